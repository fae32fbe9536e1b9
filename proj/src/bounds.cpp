#include "capeig/bounds.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace capeig {

namespace {

constexpr double kPredicateTolerance = 1e-12;
constexpr double kBisectionWidth = 1e-11;

double ipow(double base, int exponent) {
    double r = 1.0;
    for (int i = 0; i < exponent; ++i)
        r *= base;
    return r;
}

struct FamilyInfo {
    FamilyKind kind;
    std::string_view name;
};

constexpr std::array<FamilyInfo, 11> kFamilies{{
    {FamilyKind::Thm, "thm"},
    {FamilyKind::Cor, "cor"},
    {FamilyKind::Gap, "gap"},
    {FamilyKind::WangXia, "wangxia"},
    {FamilyKind::WangXiaOptimized, "wangxia-opt"},
    {FamilyKind::Hlc, "hlc"},
    {FamilyKind::CimSphereClamped, "cim-sphere"},
    {FamilyKind::YangEuclideanMembrane, "yang"},
    {FamilyKind::CimEuclideanClamped, "cim-euclid"},
    {FamilyKind::ChengYangEuclideanBuckling, "cheng-yang"},
    {FamilyKind::HuangLiEuclideanBuckling, "huang-li"},
}};

void require_prefix(const EigenSequence& prefix) {
    prefix.validate();
    if (prefix.values.empty())
        throw Error(ErrorKind::DomainError, "bounds need a prefix with k >= 1");
}

// Every sphere-buckling family divides by Lambda_i - (n - 2).
void require_above_guard(const EigenSequence& prefix) {
    const double m = prefix.n - 2;
    for (double v : prefix.values)
        if (!(v > m))
            throw Error(ErrorKind::DomainError,
                        "Lambda_i = " + std::to_string(v) + " <= n - 2 = " + std::to_string(m));
}

double g_factor(double lambda, int n, int p) {
    return f_theorem(lambda, n, p) - lambda / (lambda - double(n - 2));
}

double h_factor(double lambda, int n) {
    const double m = n - 2;
    return lambda + m * m / 4.0;
}

void check_candidate(const EigenSequence& prefix, double candidate) {
    if (!(candidate >= prefix.values.back()) || !std::isfinite(candidate))
        throw Error(ErrorKind::DomainError, "candidate must be >= Lambda_k");
}

PredicateValue finish(double lhs, double rhs) {
    return {lhs, rhs, lhs <= rhs + kPredicateTolerance * (std::abs(lhs) + std::abs(rhs))};
}

double checked_sqrt(double radicand, const char* what) {
    if (radicand < 0)
        throw Error(ErrorKind::DomainError, std::string("negative radicand in ") + what);
    return std::sqrt(radicand);
}

// Coefficient c_i of the Yang-type quadratic sum (X - v_i)^2 <= sum (X - v_i) c_i.
double yang_coefficient(const BoundFamily& family, const EigenSequence& seq, std::size_t i) {
    const double n = seq.n;
    const int p = seq.p;
    const double v = seq.values[i];
    switch (family.kind) {
    case FamilyKind::YangEuclideanMembrane:
        return 4.0 / n * v;
    case FamilyKind::CimEuclideanClamped:
        return 4.0 * p * (2.0 * p + n - 2.0) / (n * n) * v;
    case FamilyKind::ChengYangEuclideanBuckling:
        return 4.0 * (n + 2.0) / (n * n) * v;
    case FamilyKind::HuangLiEuclideanBuckling:
        return 4.0 * (p - 1.0) * (n + 2.0 * p - 2.0) / (n * n) *
               std::pow(v, (2.0 * p - 3.0) / (p - 1.0));
    case FamilyKind::CimSphereClamped: {
        const double r = std::pow(v, 1.0 / p);
        double bracket = ipow(r + n, p) - v;
        const double coef = std::ldexp(1.0, p) - (p + 1.0);
        if (coef != 0.0)
            bracket += 4.0 * coef * r * ipow(r + n, p - 2);
        const double anchor = family.cim_sphere_use_lambda_i ? v : seq.values.front();
        return 4.0 / (n * n) * bracket * (std::pow(anchor, 1.0 / p) + n * n / 4.0);
    }
    default:
        throw Error(ErrorKind::FamilyMismatch, "not a Yang-type family");
    }
}

BoundResult make_result(const BoundFamily& family, const EigenSequence& prefix, double bound) {
    if (!(bound >= prefix.values.back() * (1.0 - 1e-12)))
        throw Error(ErrorKind::DomainError, "bound " + std::to_string(bound) +
                                                " below Lambda_k: prefix inconsistent with " +
                                                std::string(family_name(family.kind)));
    BoundResult r;
    r.family = family;
    r.k = prefix.values.size();
    r.bound = bound;
    return r;
}

} // namespace

std::string_view family_name(FamilyKind kind) {
    for (const auto& f : kFamilies)
        if (f.kind == kind)
            return f.name;
    return "unknown";
}

FamilyKind parse_family(std::string_view name) {
    for (const auto& f : kFamilies)
        if (f.name == name)
            return f.kind;
    throw Error(ErrorKind::InvalidConfig, "unknown bound family '" + std::string(name) + "'");
}

const std::vector<FamilyKind>& all_families() {
    static const std::vector<FamilyKind> list = [] {
        std::vector<FamilyKind> out;
        for (const auto& f : kFamilies)
            out.push_back(f.kind);
        return out;
    }();
    return list;
}

void check_compatibility(const BoundFamily& family, const EigenSequence& seq) {
    bool buckling = false, clamped = false;
    bool ok = false;
    switch (family.kind) {
    case FamilyKind::Thm:
    case FamilyKind::Cor:
    case FamilyKind::Gap:
    case FamilyKind::HuangLiEuclideanBuckling:
        buckling = true;
        ok = seq.p >= 2;
        break;
    case FamilyKind::WangXia:
    case FamilyKind::WangXiaOptimized:
    case FamilyKind::Hlc:
    case FamilyKind::ChengYangEuclideanBuckling:
        buckling = true;
        ok = seq.p == 2;
        break;
    case FamilyKind::CimSphereClamped:
    case FamilyKind::CimEuclideanClamped:
        clamped = true;
        ok = seq.p >= 1;
        break;
    case FamilyKind::YangEuclideanMembrane:
        clamped = true;
        ok = seq.p == 1;
        break;
    }
    if (buckling && seq.problem != Problem::Buckling)
        ok = false;
    if (clamped && seq.problem != Problem::Clamped)
        ok = false;
    if (!ok)
        throw Error(ErrorKind::FamilyMismatch,
                    std::string(family_name(family.kind)) + " does not apply to " +
                        std::string(to_string(seq.problem)) + " with p = " + std::to_string(seq.p));
    if (family.kind == FamilyKind::WangXia && !(family.delta > 0))
        throw Error(ErrorKind::DomainError, "Wang-Xia parameter delta must be > 0");
}

double f_theorem(double lambda, int n, int p) {
    if (!(lambda > 0))
        throw Error(ErrorKind::DomainError, "f needs Lambda > 0");
    if (p < 2 || n < 2)
        throw Error(ErrorKind::DomainError, "f needs p >= 2 and n >= 2");
    const double t = std::pow(lambda, 1.0 / (p - 1));
    const double nn = n;
    const double up = t + nn;
    const double down = t - nn + 2.0;
    double f = (ipow(up, p - 1) - ipow(down, p - 1)) / (2.0 * (nn - 1.0));
    f += nn / (nn - 1.0) * t * ipow(up, p - 2);
    f -= t * ipow(down, p - 2) / (nn - 1.0);
    const double c3 = std::ldexp(1.0, p - 1) - p;
    if (c3 != 0.0)
        f += 2.0 * c3 * t * ipow(up, p - 3);
    const double c4 = std::ldexp(1.0, p - 2) - (p - 1.0);
    if (c4 != 0.0)
        f += 4.0 * c4 * t * t * ipow(up, p - 4);
    return f;
}

SumsST s_t(const EigenSequence& prefix) {
    require_prefix(prefix);
    if (prefix.p < 2)
        throw Error(ErrorKind::DomainError, "S/T need p >= 2");
    require_above_guard(prefix);
    const double k = double(prefix.values.size());
    double mean = 0, mean_sq = 0, gh = 0, lgh = 0;
    for (double v : prefix.values) {
        const double w = g_factor(v, prefix.n, prefix.p) * h_factor(v, prefix.n);
        mean += v;
        mean_sq += v * v;
        gh += w;
        lgh += v * w;
    }
    return {mean / k + gh / (2.0 * k), mean_sq / k + lgh / k};
}

PredicateValue predicate(const BoundFamily& family, const EigenSequence& prefix, double candidate) {
    require_prefix(prefix);
    check_compatibility(family, prefix);
    require_above_guard(prefix);
    check_candidate(prefix, candidate);
    const int n = prefix.n;
    const double m = n - 2;

    switch (family.kind) {
    case FamilyKind::Thm: {
        double lhs = 0, a = 0, b = 0;
        for (double v : prefix.values) {
            const double x = candidate - v;
            lhs += x * x * (2.0 + m / (v - m));
            a += x * x * g_factor(v, n, prefix.p);
            b += x * h_factor(v, n);
        }
        return finish(lhs, 2.0 * checked_sqrt(a, "thm") * std::sqrt(b));
    }
    case FamilyKind::Hlc: {
        double lhs = 0, a = 0, b = 0;
        for (double v : prefix.values) {
            const double x = candidate - v;
            lhs += x * x * (2.0 + m / (v - m));
            a += x * x * (v - m / (v - m));
            b += x * h_factor(v, n);
        }
        return finish(lhs, 2.0 * checked_sqrt(a, "hlc") * std::sqrt(b));
    }
    case FamilyKind::Cor: {
        double lhs = 0, rhs = 0;
        for (double v : prefix.values) {
            const double x = candidate - v;
            lhs += x * x;
            rhs += x * g_factor(v, n, prefix.p) * h_factor(v, n);
        }
        return finish(lhs, rhs);
    }
    case FamilyKind::WangXia: {
        const double d = family.delta;
        double lhs = 0, quad = 0, lin = 0;
        for (double v : prefix.values) {
            const double x = candidate - v;
            lhs += 2.0 * x * x;
            quad += x * x * (d * v + d * d * (v - m) / (4.0 * (d * v + m)));
            lin += x * h_factor(v, n);
        }
        return finish(lhs, quad + lin / d);
    }
    default:
        throw Error(ErrorKind::FamilyMismatch,
                    "no predicate form for " + std::string(family_name(family.kind)));
    }
}

BoundResult closed_form_bound(const BoundFamily& family, const EigenSequence& prefix) {
    require_prefix(prefix);
    check_compatibility(family, prefix);

    if (family.kind == FamilyKind::Cor || family.kind == FamilyKind::Gap) {
        const auto st = s_t(prefix);
        double disc = st.S * st.S - st.T;
        if (disc < -1e-12 * st.S * st.S)
            throw Error(ErrorKind::DiscriminantNegative,
                        "S^2 - T = " + std::to_string(disc) + " < 0");
        disc = std::max(disc, 0.0);
        const double bound = family.kind == FamilyKind::Cor
                                 ? st.S + std::sqrt(disc)
                                 : prefix.values.back() + 2.0 * std::sqrt(disc);
        auto r = make_result(family, prefix, bound);
        r.S = st.S;
        r.T = st.T;
        return r;
    }

    // k X^2 - X (2 sum v + sum c) + (sum v^2 + sum c v) <= 0, larger root.
    const double k = double(prefix.values.size());
    double sv = 0, sc = 0, svv = 0, scv = 0;
    for (std::size_t i = 0; i < prefix.values.size(); ++i) {
        const double v = prefix.values[i];
        const double c = yang_coefficient(family, prefix, i);
        sv += v;
        sc += c;
        svv += v * v;
        scv += c * v;
    }
    const double b = 2.0 * sv + sc;
    const double c0 = svv + scv;
    const double disc = b * b - 4.0 * k * c0;
    if (disc < -1e-12 * b * b)
        throw Error(ErrorKind::DiscriminantNegative, "Yang-type quadratic has no real root");
    return make_result(family, prefix, (b + std::sqrt(std::max(disc, 0.0))) / (2.0 * k));
}

BoundResult implied_bound(const BoundFamily& family, const EigenSequence& prefix) {
    require_prefix(prefix);
    if (family.kind != FamilyKind::Thm && family.kind != FamilyKind::WangXia &&
        family.kind != FamilyKind::Hlc)
        throw Error(ErrorKind::FamilyMismatch,
                    "implied bound undefined for " + std::string(family_name(family.kind)));
    const double top = prefix.values.back();
    const double limit = top * std::ldexp(1.0, 64);

    double lo = top;
    double step = std::max(top, 1.0);
    double hi = top + step;
    while (predicate(family, prefix, hi).holds) {
        lo = hi;
        step *= 2.0;
        if (step > limit)
            throw Error(ErrorKind::BracketFailure, "predicate holds up to Lambda_k * 2^64");
        hi = top + step;
    }
    while (hi - lo > kBisectionWidth * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (predicate(family, prefix, mid).holds)
            lo = mid;
        else
            hi = mid;
    }
    return make_result(family, prefix, hi);
}

namespace {

// Wang-Xia residual F(X, delta) = lhs - rhs and the derivatives needed to
// solve F = 0, dF/d(delta) = 0 by Newton.
struct WangXiaJet {
    double f, fx, fd, fdx, fdd;
};

WangXiaJet wang_xia_jet(const EigenSequence& prefix, double candidate, double delta) {
    const double m = prefix.n - 2;
    WangXiaJet j{0, 0, 0, 0, 0};
    double sxh = 0, sh = 0;
    for (double v : prefix.values) {
        const double x = candidate - v;
        const double a = v - m;
        const double e = delta * v + m;
        const double c = delta * v + delta * delta * a / (4.0 * e);
        const double c1 = v + a * delta * (delta * v + 2.0 * m) / (4.0 * e * e);
        const double c2 = a * m * m / (2.0 * e * e * e);
        j.f += x * x * (2.0 - c);
        j.fx += 2.0 * x * (2.0 - c);
        j.fd -= x * x * c1;
        j.fdx -= 2.0 * x * c1;
        j.fdd -= x * x * c2;
        sxh += x * h_factor(v, prefix.n);
        sh += h_factor(v, prefix.n);
    }
    j.f -= sxh / delta;
    j.fx -= sh / delta;
    j.fd += sxh / (delta * delta);
    j.fdx += sh / (delta * delta);
    j.fdd -= 2.0 * sxh / (delta * delta * delta);
    return j;
}

} // namespace

BoundResult wang_xia_optimized(const EigenSequence& prefix) {
    require_prefix(prefix);
    check_compatibility(BoundFamily{FamilyKind::WangXiaOptimized}, prefix);
    const double inf = std::numeric_limits<double>::infinity();

    auto objective = [&](double log_delta) {
        try {
            return implied_bound(BoundFamily::wang_xia(std::pow(10.0, log_delta)), prefix).bound;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::BracketFailure)
                return inf;
            throw;
        }
    };

    constexpr int kGrid = 64;
    constexpr double kLo = -6.0, kHi = 6.0;
    const double spacing = (kHi - kLo) / (kGrid - 1);
    double best_u = kLo, best = inf;
    for (int i = 0; i < kGrid; ++i) {
        const double u = kLo + spacing * i;
        const double val = objective(u);
        if (val < best) {
            best = val;
            best_u = u;
        }
    }
    if (!std::isfinite(best))
        throw Error(ErrorKind::BracketFailure, "Wang-Xia bound unbounded for every grid delta");

    // golden section on log10(delta)
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::max(kLo, best_u - spacing), b = std::min(kHi, best_u + spacing);
    double u1 = b - phi * (b - a), u2 = a + phi * (b - a);
    double f1 = objective(u1), f2 = objective(u2);
    while (b - a > 1e-8) {
        if (f1 < f2) {
            b = u2;
            u2 = u1;
            f2 = f1;
            u1 = b - phi * (b - a);
            f1 = objective(u1);
        } else {
            a = u1;
            u1 = u2;
            f1 = f2;
            u2 = a + phi * (b - a);
            f2 = objective(u2);
        }
    }
    for (auto [u, val] : {std::pair{u1, f1}, std::pair{u2, f2}})
        if (val < best) {
            best = val;
            best_u = u;
        }
    double delta_star = std::pow(10.0, best_u);

    // Polish: the optimum satisfies F = 0 and dF/d(delta) = 0 simultaneously.
    double x = best, d = delta_star;
    bool polished = false;
    for (int iter = 0; iter < 30; ++iter) {
        const auto j = wang_xia_jet(prefix, x, d);
        const double det = j.fx * j.fdd - j.fd * j.fdx;
        if (!(std::abs(det) > 0) || !std::isfinite(det))
            break;
        const double dx = (j.f * j.fdd - j.fd * j.fd) / det;
        const double dd = (j.fx * j.fd - j.fdx * j.f) / det;
        x -= dx;
        d -= dd;
        if (!(d > 0) || !std::isfinite(x))
            break;
        if (std::abs(dx) <= 1e-15 * std::abs(x) && std::abs(dd) <= 1e-15 * d) {
            polished = true;
            break;
        }
    }
    if (polished && std::abs(x - best) <= 1e-7 * best) {
        const double val = objective(std::log10(d));
        if (val <= best * (1.0 + 1e-10)) {
            best = std::min(best, val);
            delta_star = d;
        }
    }

    auto r = make_result(BoundFamily{FamilyKind::WangXiaOptimized}, prefix, best);
    r.delta_star = delta_star;
    return r;
}

BoundResult evaluate_bound(const BoundFamily& family, const EigenSequence& prefix) {
    switch (family.kind) {
    case FamilyKind::Thm:
    case FamilyKind::WangXia:
    case FamilyKind::Hlc:
        return implied_bound(family, prefix);
    case FamilyKind::WangXiaOptimized:
        return wang_xia_optimized(prefix);
    default:
        return closed_form_bound(family, prefix);
    }
}

} // namespace capeig
