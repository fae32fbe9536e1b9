#pragma once

#include <map>
#include <optional>
#include <vector>

#include "capeig/bounds.hpp"
#include "capeig/spectral.hpp"

namespace capeig {

struct VerifyOptions {
    double slack = 1e-8;             // relative, absorbs Rayleigh-Ritz over-approximation
    double convergence_limit = 1e-7; // per-entry estimate required before asserting
};

struct VerificationRow {
    std::size_t k = 0;
    double actual = 0; // Lambda_{k+1}
    BoundResult result;
    double margin = 0;
    bool holds = false;
};

struct VerificationSummary {
    double min_margin = 0;          // smallest margin / actual over all rows
    std::size_t violations = 0;
    bool converged = true;          // convergence prerequisite met (true for synthetic input)
    std::map<FamilyKind, std::size_t> tightest; // rows where a family gave the smallest bound
};

struct VerificationReport {
    int n = 2;
    int p = 1;
    Problem problem = Problem::Clamped;
    std::optional<double> theta0;
    std::vector<FamilyKind> families;
    std::vector<VerificationRow> rows; // k ascending, then family order
    VerificationSummary summary;
};

/// Families that are valid on S^n for this (problem, p).
std::vector<FamilyKind> default_sphere_families(Problem problem, int p);

VerificationReport check_sequence(const EigenSequence& seq, const std::vector<BoundFamily>& families,
                                  const VerifyOptions& options = {});

/// As check_sequence, plus the per-entry convergence prerequisite.
VerificationReport check_spectrum(const Spectrum& spectrum, const std::vector<BoundFamily>& families,
                                  const VerifyOptions& options = {});

struct SharpnessRow {
    std::size_t k = 0;
    double thm = 0;
    double hlc = 0;
    double wang_xia_opt = 0;
    double delta_star = 0;
    double thm_hlc_gap = 0;       // |thm - hlc| / thm
    double worst_grid_excess = 0; // max over grid of (thm - wangxia(delta)) / thm
    bool equal = false;
    bool dominated = false;
};

struct SharpnessReport {
    std::vector<double> delta_grid;
    std::vector<SharpnessRow> rows;
    std::size_t violations = 0;
};

/// Log-spaced grid of `count` points between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// p = 2 buckling: Thm against Hlc (equal) and against Wang-Xia (dominates).
SharpnessReport compare_sharpness(const EigenSequence& seq, const std::vector<double>& delta_grid,
                                  double tolerance = 1e-10);

struct FlatLimitReport {
    std::vector<double> theta0;
    std::vector<double> scaled;       // Lambda_1 * theta0^2
    std::vector<double> extrapolated; // Richardson, assuming an O(theta0^2) correction
    double oracle = 0;
    double deviation = 0;             // |scaled(smallest theta0) - oracle| / oracle
};

/// Scaled ground values on shrinking caps against a flat-domain constant
/// supplied by the caller. Throws OracleMismatch beyond `tolerance`.
FlatLimitReport flat_limit_check(SolverConfig base, const std::vector<double>& theta0_descending,
                                 double oracle, double tolerance = 0.01);

} // namespace capeig
