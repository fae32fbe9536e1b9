#pragma once

// Universal eigenvalue inequalities: bound Lambda_{k+1} from Lambda_1..Lambda_k.
//
// Sphere buckling families take the prefix of a buckling spectrum on a domain
// of S^n; Euclidean families are included for comparison only.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capeig/types.hpp"

namespace capeig {

enum class FamilyKind {
    Thm,                        // order-p sphere buckling, Cauchy-Schwarz form
    Cor,                        // its quadratic relaxation and S + sqrt(S^2 - T)
    Gap,                        // Lambda_k + 2 sqrt(S^2 - T)
    WangXia,                    // p = 2 sphere buckling with free parameter delta
    WangXiaOptimized,           // WangXia minimized over delta
    Hlc,                        // p = 2 sphere buckling, delta-free
    CimSphereClamped,           // order-p clamped, sphere
    YangEuclideanMembrane,      // p = 1, R^n
    CimEuclideanClamped,        // order-p clamped, R^n
    ChengYangEuclideanBuckling, // p = 2 buckling, R^n
    HuangLiEuclideanBuckling,   // order-p buckling, R^n
};

struct BoundFamily {
    FamilyKind kind = FamilyKind::Thm;
    double delta = 1.0;                   // WangXia only
    bool cim_sphere_use_lambda_i = false; // CimSphereClamped: lambda_i instead of lambda_1 in the last factor

    static BoundFamily wang_xia(double delta) { return {FamilyKind::WangXia, delta, false}; }
};

std::string_view family_name(FamilyKind kind);
/// Parses the CLI spelling ("thm", "wangxia-opt", ...).
FamilyKind parse_family(std::string_view name);
/// All families in declaration order.
const std::vector<FamilyKind>& all_families();

/// Throws FamilyMismatch if the family does not apply to (problem, p).
void check_compatibility(const BoundFamily& family, const EigenSequence& seq);

struct BoundResult {
    BoundFamily family;
    std::size_t k = 0;
    double bound = 0;
    std::optional<double> S;
    std::optional<double> T;
    std::optional<double> delta_star;
    std::optional<double> margin; // bound - actual
};

/// f(Lambda, n) of the order-p sphere buckling inequality. Terms whose integer
/// prefactor vanishes are exactly zero, so p = 2 gives Lambda + 1.
double f_theorem(double lambda, int n, int p);

struct SumsST {
    double S = 0;
    double T = 0;
};

/// S_{k+1}, T_{k+1} over the whole of `prefix`.
SumsST s_t(const EigenSequence& prefix);

struct PredicateValue {
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

/// Evaluates one inequality with Lambda_{k+1} := candidate.
/// Families: Thm, Cor, WangXia, Hlc.
PredicateValue predicate(const BoundFamily& family, const EigenSequence& prefix, double candidate);

/// Families with an explicit formula: Cor, Gap and the Yang-type quadratics.
BoundResult closed_form_bound(const BoundFamily& family, const EigenSequence& prefix);

/// First failure point of the predicate above Lambda_k, found by doubling
/// then bisection to 1e-11 relative width. Families: Thm, WangXia, Hlc.
BoundResult implied_bound(const BoundFamily& family, const EigenSequence& prefix);

/// WangXia minimized over delta: 64-point grid on log10(delta) in [-6, 6],
/// golden-section refinement, then a Newton polish of the stationarity system.
BoundResult wang_xia_optimized(const EigenSequence& prefix);

/// Dispatches to whichever of the above produces a bound for this family.
BoundResult evaluate_bound(const BoundFamily& family, const EigenSequence& prefix);

} // namespace capeig
