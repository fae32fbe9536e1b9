#include "capeig/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace capeig {

std::vector<FamilyKind> default_sphere_families(Problem problem, int p) {
    if (problem == Problem::Clamped)
        return {FamilyKind::CimSphereClamped};
    if (p == 2)
        return {FamilyKind::Thm, FamilyKind::Cor, FamilyKind::Gap, FamilyKind::WangXiaOptimized,
                FamilyKind::Hlc};
    return {FamilyKind::Thm, FamilyKind::Cor, FamilyKind::Gap};
}

VerificationReport check_sequence(const EigenSequence& seq, const std::vector<BoundFamily>& families,
                                  const VerifyOptions& options) {
    seq.validate();
    std::vector<BoundFamily> ordered = families;
    std::stable_sort(ordered.begin(), ordered.end(), [](const BoundFamily& a, const BoundFamily& b) {
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    for (const auto& f : ordered) {
        check_compatibility(f, seq);
        const bool sphere_buckling = seq.problem == Problem::Buckling &&
                                     f.kind != FamilyKind::ChengYangEuclideanBuckling &&
                                     f.kind != FamilyKind::HuangLiEuclideanBuckling;
        if (sphere_buckling && !seq.values.empty() && !(seq.values.front() > double(seq.n - 2)))
            throw Error(ErrorKind::GuardViolation,
                        "Lambda_1 = " + std::to_string(seq.values.front()) + " <= n - 2");
    }

    VerificationReport report;
    report.n = seq.n;
    report.p = seq.p;
    report.problem = seq.problem;
    for (const auto& f : ordered)
        report.families.push_back(f.kind);
    report.summary.min_margin = std::numeric_limits<double>::infinity();

    for (std::size_t k = 1; k < seq.values.size(); ++k) {
        const EigenSequence prefix = seq.prefix(k);
        const double actual = seq.values[k];
        double tightest = std::numeric_limits<double>::infinity();
        FamilyKind winner = ordered.empty() ? FamilyKind::Thm : ordered.front().kind;
        for (const auto& f : ordered) {
            VerificationRow row;
            row.k = k;
            row.actual = actual;
            row.result = evaluate_bound(f, prefix);
            row.margin = row.result.bound - actual;
            row.result.margin = row.margin;
            row.holds = row.margin >= -options.slack * actual;
            if (!row.holds)
                ++report.summary.violations;
            report.summary.min_margin = std::min(report.summary.min_margin, row.margin / actual);
            if (row.result.bound < tightest) {
                tightest = row.result.bound;
                winner = f.kind;
            }
            report.rows.push_back(row);
        }
        if (!ordered.empty())
            ++report.summary.tightest[winner];
    }
    if (report.rows.empty())
        report.summary.min_margin = 0;
    return report;
}

VerificationReport check_spectrum(const Spectrum& spectrum, const std::vector<BoundFamily>& families,
                                  const VerifyOptions& options) {
    auto report = check_sequence(spectrum.sequence(), families, options);
    report.theta0 = spectrum.config.theta0;
    report.summary.converged = spectrum.max_convergence_estimate() < options.convergence_limit;
    return report;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0) || !(hi >= lo) || count < 1)
        throw Error(ErrorKind::InvalidConfig, "log grid needs 0 < lo <= hi and count >= 1");
    std::vector<double> out;
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < count; ++i)
        out.push_back(count == 1 ? lo : std::pow(10.0, a + (b - a) * i / (count - 1)));
    return out;
}

SharpnessReport compare_sharpness(const EigenSequence& seq, const std::vector<double>& delta_grid,
                                  double tolerance) {
    seq.validate();
    if (seq.problem != Problem::Buckling || seq.p != 2)
        throw Error(ErrorKind::FamilyMismatch, "sharpness comparison needs p = 2 buckling");
    SharpnessReport report;
    report.delta_grid = delta_grid;
    for (std::size_t k = 1; k < seq.values.size(); ++k) {
        const auto prefix = seq.prefix(k);
        SharpnessRow row;
        row.k = k;
        row.thm = implied_bound({FamilyKind::Thm}, prefix).bound;
        row.hlc = implied_bound({FamilyKind::Hlc}, prefix).bound;
        const auto opt = wang_xia_optimized(prefix);
        row.wang_xia_opt = opt.bound;
        row.delta_star = opt.delta_star.value_or(0.0);
        row.thm_hlc_gap = std::abs(row.thm - row.hlc) / row.thm;
        row.equal = row.thm_hlc_gap <= tolerance;

        row.worst_grid_excess = (row.thm - row.wang_xia_opt) / row.thm;
        for (double d : delta_grid) {
            double wx;
            try {
                wx = implied_bound(BoundFamily::wang_xia(d), prefix).bound;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::BracketFailure)
                    throw;
                continue; // no finite Wang-Xia bound at this delta
            }
            row.worst_grid_excess = std::max(row.worst_grid_excess, (row.thm - wx) / row.thm);
        }
        row.dominated = row.worst_grid_excess <= tolerance;
        if (!row.equal || !row.dominated)
            ++report.violations;
        report.rows.push_back(row);
    }
    return report;
}

FlatLimitReport flat_limit_check(SolverConfig base, const std::vector<double>& theta0_descending,
                                 double oracle, double tolerance) {
    if (theta0_descending.empty())
        throw Error(ErrorKind::InvalidConfig, "flat limit check needs at least one angle");
    for (std::size_t i = 0; i < theta0_descending.size(); ++i) {
        if (!(theta0_descending[i] > 0 && theta0_descending[i] <= 0.2))
            throw Error(ErrorKind::InvalidConfig, "flat limit angles must lie in (0, 0.2]");
        if (i > 0 && !(theta0_descending[i] < theta0_descending[i - 1]))
            throw Error(ErrorKind::InvalidConfig, "flat limit angles must be descending");
    }
    FlatLimitReport report;
    report.oracle = oracle;
    base.count = 1;
    for (double t : theta0_descending) {
        base.theta0 = t;
        const double v = solve_spectrum(base).entries.front().value;
        report.theta0.push_back(t);
        report.scaled.push_back(v * t * t);
    }
    for (std::size_t i = 1; i < report.scaled.size(); ++i) {
        const double a2 = report.theta0[i - 1] * report.theta0[i - 1];
        const double b2 = report.theta0[i] * report.theta0[i];
        report.extrapolated.push_back((report.scaled[i] * a2 - report.scaled[i - 1] * b2) / (a2 - b2));
    }
    report.deviation = std::abs(report.scaled.back() - oracle) / oracle;
    if (report.deviation > tolerance)
        throw Error(ErrorKind::OracleMismatch,
                    "scaled ground value deviates from oracle by " + std::to_string(report.deviation));
    return report;
}

} // namespace capeig
