#include "capeig/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace capeig {

void EigenSequence::validate() const {
    if (n < 2)
        throw Error(ErrorKind::DomainError, "dimension n must be >= 2");
    if (p < 1 || (problem == Problem::Buckling && p < 2))
        throw Error(ErrorKind::DomainError, "operator order p incompatible with problem");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0) || !std::isfinite(values[i]))
            throw Error(ErrorKind::DomainError, "eigenvalues must be positive and finite");
        if (i > 0 && values[i] < values[i - 1])
            throw Error(ErrorKind::DomainError, "eigenvalues must be ascending");
    }
}

EigenSequence EigenSequence::prefix(std::size_t k) const {
    EigenSequence out = *this;
    out.values.resize(std::min(k, values.size()));
    return out;
}

void SolverConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); };
    if (n < 2)
        fail("n must be >= 2");
    if (problem == Problem::Buckling && p < 2)
        fail("buckling requires p >= 2");
    if (p < 1)
        fail("p must be >= 1");
    if (!(theta0 > 0.0 && theta0 < M_PI))
        fail("theta0 must lie in (0, pi)");
    if (basis_size < 2)
        fail("basis size must be >= 2");
    if (count < 1)
        fail("count must be >= 1");
    if (mode_cap && *mode_cap < 0)
        fail("mode cap must be >= 0");
    if (quad_size && *quad_size < 1)
        fail("quadrature size must be >= 1");
    if (!(mode_margin >= 1.0))
        fail("mode margin must be >= 1");
}

CapMap CapMap::from_angle(double theta0) {
    const double sh = std::sin(0.5 * theta0);
    const double ch = std::cos(0.5 * theta0);
    CapMap m;
    m.x0 = std::cos(theta0);
    m.half_width = sh * sh;
    m.one_plus_x0 = 2.0 * ch * ch;
    return m;
}

RadialPoly RadialPoly::from_monomials(const std::vector<double>& coeffs, const CapMap& map) {
    ChebyshevSeries<double> acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc.times_affine(map.x0 + map.half_width, map.half_width) +
              ChebyshevSeries<double>::constant(*it);
    if (!coeffs.empty())
        acc = acc.truncated(static_cast<Eigen::Index>(coeffs.size()));
    return RadialPoly{acc, map};
}

RadialPoly apply_radial_operator(const RadialPoly& q, int l, int n) {
    const CapMap& m = q.map;
    const double h = m.half_width;
    const auto len = q.series.size();
    const auto d1 = q.series.derivative();
    const auto d2 = d1.derivative();

    // (1 - x^2) / h^2 = (1 - s) ((1 + x0 + h) + h s) / h
    auto curvature = d2.times_affine(m.one_plus_x0 + h, h).times_affine(1.0, -1.0);
    curvature *= 1.0 / h;
    // x / h = (x0 + h) / h + s
    auto drift = d1.times_affine((m.x0 + h) / h, 1.0);
    drift *= -double(2 * l + n);
    auto shift = double(-l) * double(l + n - 1) * q.series;

    auto out = curvature + drift + shift;
    return RadialPoly{out.padded(len).truncated(len), m};
}

namespace {

double binomial(long top, long k) {
    if (k < 0 || top < k || top < 0)
        return 0.0;
    double r = 1.0;
    for (long i = 1; i <= k; ++i)
        r = r * double(top - k + i) / double(i);
    return r;
}

} // namespace

std::uint64_t multiplicity(int l, int n) {
    if (l < 0 || n < 2)
        throw Error(ErrorKind::DomainError, "multiplicity needs l >= 0, n >= 2");
    // harmonic polynomials of degree l in n variables
    const double dim = binomial(l + n - 1, n - 1) - binomial(l + n - 3, n - 1);
    return static_cast<std::uint64_t>(std::llround(dim));
}

namespace {

struct ModeBasis {
    Eigen::Index count = 0;
    std::vector<RadialPoly> q;       // q_j
    std::vector<RadialPoly> dq;      // D q_j
    std::vector<RadialPoly> half;    // D^m q_j
    std::vector<RadialPoly> halfd;   // D^{m+1} q_j, odd p only
    int max_degree = 0;
};

ModeBasis build_basis(const SolverConfig& cfg, int l) {
    const CapMap map = CapMap::from_angle(cfg.theta0);
    const Eigen::Index len = cfg.p + cfg.basis_size;
    ModeBasis b;
    b.count = cfg.basis_size;
    b.max_degree = static_cast<int>(len - 1);
    const int m = cfg.p / 2;
    for (Eigen::Index j = 0; j < b.count; ++j) {
        auto series = ChebyshevSeries<double>::basis(j, j + 1);
        for (int k = 0; k < cfg.p; ++k)
            series = series.times_affine(1.0, 1.0);
        RadialPoly q{series.padded(len), map};
        RadialPoly dq = apply_radial_operator(q, l, cfg.n);
        RadialPoly h = q;
        for (int k = 0; k < m; ++k)
            h = apply_radial_operator(h, l, cfg.n);
        b.q.push_back(q);
        b.dq.push_back(dq);
        if (cfg.p % 2 == 1)
            b.halfd.push_back(apply_radial_operator(h, l, cfg.n));
        b.half.push_back(std::move(h));
    }
    return b;
}

Matrix<double> sample(const std::vector<RadialPoly>& polys, const Vector<double>& nodes) {
    Matrix<double> out(nodes.size(), static_cast<Eigen::Index>(polys.size()));
    for (std::size_t j = 0; j < polys.size(); ++j)
        out.col(static_cast<Eigen::Index>(j)) = polys[j].series.evaluate(nodes);
    return out;
}

std::pair<Matrix<double>, Matrix<double>> integrate_forms(const SolverConfig& cfg, int l,
                                                          const ModeBasis& basis, int quad) {
    const double gamma = l + 0.5 * (cfg.n - 2);
    const auto rule = gauss_jacobi_rule<double>(gamma, quad);
    const CapMap map = CapMap::from_angle(cfg.theta0);
    Vector<double> w(quad);
    for (int k = 0; k < quad; ++k)
        w[k] = rule.weights[k] * std::pow(map.one_plus_x(rule.nodes[k]), gamma);
    const auto weight = w.asDiagonal();

    const Matrix<double> half = sample(basis.half, rule.nodes);
    Matrix<double> a;
    if (cfg.p % 2 == 0)
        a = half.transpose() * weight * half;
    else
        a = -(half.transpose() * weight * sample(basis.halfd, rule.nodes));

    const Matrix<double> q = sample(basis.q, rule.nodes);
    Matrix<double> b;
    if (cfg.problem == Problem::Buckling)
        b = -(q.transpose() * weight * sample(basis.dq, rule.nodes));
    else
        b = q.transpose() * weight * q;
    return {std::move(a), std::move(b)};
}

double relative_change(const Matrix<double>& coarse, const Matrix<double>& fine) {
    const double scale = fine.cwiseAbs().maxCoeff();
    return scale > 0 ? (coarse - fine).cwiseAbs().maxCoeff() / scale : 0.0;
}

} // namespace

ModeForms assemble_mode(const SolverConfig& cfg, int l) {
    cfg.validate();
    if (l < 0)
        throw Error(ErrorKind::InvalidConfig, "mode index must be >= 0");
    const ModeBasis basis = build_basis(cfg, l);
    const int quad = cfg.quad_size.value_or(2 * basis.max_degree + 16);

    auto [a, b] = integrate_forms(cfg, l, basis, quad);
    if (cfg.check_quadrature) {
        auto [a2, b2] = integrate_forms(cfg, l, basis, 2 * quad);
        const double change = std::max(relative_change(a, a2), relative_change(b, b2));
        if (change > cfg.quad_tolerance)
            throw Error(ErrorKind::QuadratureNotConverged,
                        "node doubling changed forms by " + std::to_string(change) + " (l = " +
                            std::to_string(l) + ", quad = " + std::to_string(quad) + ")");
    }

    ModeForms forms{SymMatrix<double>(a), SymMatrix<double>(b), 0.0, quad};
    forms.asymmetry = std::max(forms.stiffness.asymmetry(), forms.rhs.asymmetry());
    if (forms.asymmetry > cfg.asymmetry_tolerance)
        throw Error(ErrorKind::QuadratureNotConverged,
                    "form asymmetry " + std::to_string(forms.asymmetry) + " exceeds tolerance");
    return forms;
}

ModeResult solve_mode(const SolverConfig& cfg, int l) {
    const ModeForms forms = assemble_mode(cfg, l);
    const auto pairs = generalized_sym_eigen(forms.stiffness, forms.rhs);
    ModeResult out;
    out.l = l;
    out.multiplicity = multiplicity(l, cfg.n);
    out.asymmetry = forms.asymmetry;
    out.quad_size = forms.quad_size;
    out.radial_values.assign(pairs.values.data(), pairs.values.data() + pairs.values.size());
    if (!(out.radial_values.front() > 0))
        throw Error(ErrorKind::NoConvergence,
                    "non-positive discrete eigenvalue in mode " + std::to_string(l));
    return out;
}

int reference_basis_size(int basis_size) {
    return std::max(1, basis_size - std::max(4, basis_size / 4));
}

std::vector<double> Spectrum::expanded(std::size_t count) const {
    std::vector<double> out;
    for (const auto& e : entries)
        for (std::uint64_t r = 0; r < e.multiplicity; ++r)
            out.push_back(e.value);
    if (count > 0 && out.size() > count)
        out.resize(count);
    return out;
}

EigenSequence Spectrum::sequence() const {
    return EigenSequence{config.n, config.p, config.problem,
                         expanded(static_cast<std::size_t>(config.count))};
}

double Spectrum::max_convergence_estimate() const {
    double worst = 0;
    for (const auto& e : entries)
        worst = std::max(worst, e.convergence);
    return worst;
}

bool Spectrum::below_buckling_guard() const {
    return config.problem == Problem::Buckling && !entries.empty() &&
           entries.front().value <= double(config.n - 2);
}

namespace {

// Smallest entries covering `count` expanded eigenvalues, ordered by
// (value, l, radial_index).
std::vector<SpectrumEntry> merge_modes(const std::vector<ModeResult>& modes, int count) {
    std::vector<SpectrumEntry> all;
    for (const auto& m : modes) {
        const auto take = std::min<std::size_t>(m.radial_values.size(), std::size_t(count));
        for (std::size_t r = 0; r < take; ++r)
            all.push_back({m.radial_values[r], m.l, int(r), m.multiplicity, 0.0});
    }
    std::stable_sort(all.begin(), all.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
        return std::tie(a.value, a.l, a.radial_index) < std::tie(b.value, b.l, b.radial_index);
    });
    std::vector<SpectrumEntry> out;
    std::uint64_t covered = 0;
    for (const auto& e : all) {
        if (covered >= std::uint64_t(count))
            break;
        out.push_back(e);
        covered += e.multiplicity;
    }
    return out;
}

std::optional<double> kth_value(const std::vector<SpectrumEntry>& merged, int count) {
    std::uint64_t covered = 0;
    for (const auto& e : merged) {
        covered += e.multiplicity;
        if (covered >= std::uint64_t(count))
            return e.value;
    }
    return std::nullopt;
}

} // namespace

Spectrum solve_spectrum(const SolverConfig& cfg) {
    cfg.validate();
    std::vector<ModeResult> modes;
    const bool fixed = cfg.mode_cap.has_value();
    const int limit = fixed ? *cfg.mode_cap : cfg.max_modes;

    bool sufficient = false;
    for (int l = 0; l <= limit; ++l) {
        ModeResult mr = solve_mode(cfg, l);
        if (!modes.empty() &&
            mr.radial_values.front() < modes.back().radial_values.front() * (1.0 - 1e-12))
            throw Error(ErrorKind::ModeMonotonicityViolation,
                        "ground value of mode " + std::to_string(l) + " below mode " +
                            std::to_string(l - 1));
        modes.push_back(std::move(mr));
        const auto kth = kth_value(merge_modes(modes, cfg.count), cfg.count);
        sufficient = kth && modes.back().radial_values.front() > cfg.mode_margin * *kth;
        if (!fixed && sufficient)
            break;
    }
    if (!sufficient)
        throw Error(ErrorKind::ModeCapTooSmall,
                    "modes 0.." + std::to_string(limit) + " do not cover " +
                        std::to_string(cfg.count) + " eigenvalues with margin");

    Spectrum out;
    out.config = cfg;
    out.l_max = modes.back().l;
    out.entries = merge_modes(modes, cfg.count);
    for (const auto& m : modes) {
        out.quad_size = std::max(out.quad_size, m.quad_size);
        out.max_form_asymmetry = std::max(out.max_form_asymmetry, m.asymmetry);
    }

    SolverConfig coarse = cfg;
    coarse.basis_size = reference_basis_size(cfg.basis_size);
    out.reference_basis_size = coarse.basis_size;
    std::vector<std::optional<ModeResult>> reference(modes.size());
    for (auto& e : out.entries) {
        auto& ref = reference[std::size_t(e.l)];
        if (!ref)
            ref = solve_mode(coarse, e.l);
        if (std::size_t(e.radial_index) < ref->radial_values.size())
            e.convergence = std::abs(ref->radial_values[std::size_t(e.radial_index)] - e.value) / e.value;
        else
            e.convergence = 1.0;
    }
    return out;
}

ConvergenceTable convergence_study(const SolverConfig& cfg, const std::vector<int>& basis_sizes,
                                   double slack) {
    if (basis_sizes.empty())
        throw Error(ErrorKind::InvalidConfig, "convergence study needs at least one basis size");
    for (std::size_t i = 1; i < basis_sizes.size(); ++i)
        if (basis_sizes[i] < basis_sizes[i - 1])
            throw Error(ErrorKind::InvalidConfig, "basis sizes must be ascending");

    ConvergenceTable table;
    table.basis_sizes = basis_sizes;
    table.values.assign(std::size_t(cfg.count), {});
    for (int size : basis_sizes) {
        SolverConfig c = cfg;
        c.basis_size = size;
        const auto values = solve_spectrum(c).expanded(std::size_t(cfg.count));
        for (std::size_t k = 0; k < values.size(); ++k)
            table.values[k].push_back(values[k]);
    }
    for (std::size_t k = 0; k < table.values.size(); ++k) {
        const auto& row = table.values[k];
        for (std::size_t j = 1; j < row.size(); ++j)
            if (row[j] > row[j - 1] + slack)
                throw Error(ErrorKind::MonotonicityViolation,
                            "eigenvalue " + std::to_string(k + 1) + " increased from N = " +
                                std::to_string(basis_sizes[j - 1]) + " to N = " +
                                std::to_string(basis_sizes[j]));
        table.estimates.push_back(row.size() >= 2 ? std::abs(row.back() - row[row.size() - 2]) / row.back()
                                                  : 0.0);
    }
    return table;
}

} // namespace capeig
