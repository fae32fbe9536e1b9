#pragma once

// Clamped (-Delta)^p u = lambda u and buckling (-Delta)^p u = Lambda (-Delta) u
// on the geodesic cap {theta <= theta0} of the unit sphere S^n.
//
// Separation of variables u = sin^l(theta) q(cos theta) Y_l reduces each
// angular mode l to a radial problem in x = cos(theta) on [x0, 1]. The radial
// factor is expanded as q_j = (x - x0)^p T_j(s) with s the affine map of
// [x0, 1] onto [-1, 1]; the p-fold zero at x0 carries every boundary condition.

#include <cstdint>
#include <optional>
#include <vector>

#include "capeig/chebyshev.hpp"
#include "capeig/linalg.hpp"
#include "capeig/quadrature.hpp"
#include "capeig/types.hpp"

namespace capeig {

struct SolverConfig {
    int n = 2;
    int p = 1;
    double theta0 = 1.5707963267948966;
    Problem problem = Problem::Clamped;
    int basis_size = 32;
    std::optional<int> mode_cap;  // nullopt = Auto
    std::optional<int> quad_size; // nullopt = Auto
    int count = 8;

    double mode_margin = 1.05;    // Auto L_max safety factor
    double quad_tolerance = 1e-11;
    double asymmetry_tolerance = 1e-8;
    bool check_quadrature = true; // node doubling
    int max_modes = 512;

    void validate() const;
};

/// Affine map between x = cos(theta) in [x0, 1] and s in [-1, 1]:
/// x = x0 + half_width (1 + s). Quantities are formed from half-angles so the
/// small-cap limit keeps full relative precision.
struct CapMap {
    double x0 = 0;
    double half_width = 1; // (1 - x0) / 2
    double one_plus_x0 = 1;

    static CapMap from_angle(double theta0);
    double x_of(double s) const { return x0 + half_width * (1.0 + s); }
    double one_plus_x(double s) const { return one_plus_x0 + half_width * (1.0 + s); }
};

/// Radial factor q(x) stored as a Chebyshev series in the mapped variable s.
struct RadialPoly {
    ChebyshevSeries<double> series;
    CapMap map;

    /// q(x) = sum_k coeffs[k] x^k, re-expanded in s (exact up to rounding).
    static RadialPoly from_monomials(const std::vector<double>& coeffs, const CapMap& map);

    int degree() const { return static_cast<int>(series.degree()); }
    double operator()(double x) const {
        return series((x - map.x0) / map.half_width - 1.0);
    }
};

/// D q = (1 - x^2) q'' - (2l + n) x q' - l(l + n - 1) q, the restriction of the
/// Laplace-Beltrami operator (not its negative) to mode l. Degree-preserving.
RadialPoly apply_radial_operator(const RadialPoly& q, int l, int n);

/// Dimension of degree-l spherical harmonics on S^{n-1}.
std::uint64_t multiplicity(int l, int n);

struct ModeForms {
    SymMatrix<double> stiffness; // A_p
    SymMatrix<double> rhs;       // B: Dirichlet form (buckling) or mass (clamped)
    double asymmetry = 0;
    int quad_size = 0;
};

ModeForms assemble_mode(const SolverConfig& cfg, int l);

struct ModeResult {
    int l = 0;
    std::vector<double> radial_values; // ascending
    std::uint64_t multiplicity = 1;
    double asymmetry = 0;
    int quad_size = 0;
};

ModeResult solve_mode(const SolverConfig& cfg, int l);

struct SpectrumEntry {
    double value = 0;
    int l = 0;
    int radial_index = 0;
    std::uint64_t multiplicity = 1;
    double convergence = 0; // |value(N) - value(N_ref)| / value(N)
};

struct Spectrum {
    SolverConfig config;
    std::vector<SpectrumEntry> entries; // ascending, ties by (l, radial_index)
    int l_max = 0;
    int quad_size = 0;
    int reference_basis_size = 0;
    double max_form_asymmetry = 0;

    /// First `count` multiplicity-expanded values (all of them if count == 0).
    std::vector<double> expanded(std::size_t count = 0) const;
    EigenSequence sequence() const;
    double max_convergence_estimate() const;
    /// True when a buckling spectrum has Lambda_1 <= n - 2.
    bool below_buckling_guard() const;
};

/// Basis size used for the per-entry convergence estimate.
int reference_basis_size(int basis_size);

Spectrum solve_spectrum(const SolverConfig& cfg);

struct ConvergenceTable {
    std::vector<int> basis_sizes;
    std::vector<std::vector<double>> values; // [eigen index][basis size index]
    std::vector<double> estimates;           // |last - previous| / last
};

/// Solves at every basis size and enforces the nested-space upper-bound
/// property: each value is non-increasing in N up to `slack`.
ConvergenceTable convergence_study(const SolverConfig& cfg, const std::vector<int>& basis_sizes,
                                   double slack = 1e-10);

} // namespace capeig
