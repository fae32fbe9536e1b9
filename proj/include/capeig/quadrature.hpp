#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "capeig/error.hpp"

namespace capeig {

template <typename Scalar = double>
struct QuadratureRule {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;   // ascending, in (-1, 1)
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights; // positive
};

namespace detail {

// Orthonormal three-term recurrence for the Jacobi weight (1-s)^alpha (1+s)^beta:
// s p_k = beta_{k+1} p_{k+1} + a_k p_k + beta_k p_{k-1}.
template <typename Scalar>
struct JacobiRecurrence {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diag;    // a_0 .. a_{m-1}
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> offdiag; // beta_1 .. beta_m
    Scalar mu0;                                       // integral of the weight

    JacobiRecurrence(Scalar alpha, Scalar beta, int m) : diag(m), offdiag(m) {
        const Scalar ab = alpha + beta;
        for (int k = 0; k < m; ++k) {
            const Scalar t = Scalar(2 * k) + ab;
            diag[k] = (t == Scalar(0)) ? (beta - alpha) / (ab + Scalar(2))
                                       : (beta * beta - alpha * alpha) / (t * (t + Scalar(2)));
        }
        for (int k = 1; k <= m; ++k) {
            const Scalar t = Scalar(2 * k) + ab;
            const Scalar num = Scalar(4 * k) * (Scalar(k) + alpha) * (Scalar(k) + beta) * (Scalar(k) + ab);
            offdiag[k - 1] = std::sqrt(num / (t * t * (t + Scalar(1)) * (t - Scalar(1))));
        }
        mu0 = std::exp((ab + Scalar(1)) * std::log(Scalar(2)) + std::lgamma(alpha + Scalar(1)) +
                       std::lgamma(beta + Scalar(1)) - std::lgamma(ab + Scalar(2)));
    }

    // Returns p_m(s) and p_m'(s); accumulates sum_{k<m} p_k(s)^2 into christoffel.
    void evaluate(Scalar s, Scalar& pm, Scalar& dpm, Scalar& christoffel) const {
        const auto m = diag.size();
        Scalar prev = 0, dprev = 0;
        Scalar cur = Scalar(1) / std::sqrt(mu0), dcur = 0;
        christoffel = cur * cur;
        for (Eigen::Index k = 0; k < m; ++k) {
            const Scalar back = k > 0 ? offdiag[k - 1] : Scalar(0);
            const Scalar next = ((s - diag[k]) * cur - back * prev) / offdiag[k];
            const Scalar dnext = (cur + (s - diag[k]) * dcur - back * dprev) / offdiag[k];
            prev = cur;
            dprev = dcur;
            cur = next;
            dcur = dnext;
            if (k + 1 < m)
                christoffel += cur * cur;
        }
        pm = cur;
        dpm = dcur;
    }
};

} // namespace detail

/// Gauss rule with m nodes for the weight (1 - s)^gamma on [-1, 1].
/// Golub-Welsch supplies starting nodes; Newton on the orthonormal recurrence
/// polishes them and the weights come from the Christoffel function.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_jacobi_rule(Scalar gamma, int m) {
    if (m < 1)
        throw Error(ErrorKind::InvalidConfig, "gauss_jacobi_rule needs m >= 1");
    if (!(gamma >= Scalar(0)))
        throw Error(ErrorKind::InvalidConfig, "gauss_jacobi_rule needs gamma >= 0");

    const detail::JacobiRecurrence<Scalar> rec(gamma, Scalar(0), m);
    QuadratureRule<Scalar> rule;
    if (m == 1) {
        rule.nodes = rec.diag;
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> tri;
        tri.computeFromTridiagonal(rec.diag, rec.offdiag.head(m - 1), Eigen::EigenvaluesOnly);
        if (tri.info() != Eigen::Success)
            throw Error(ErrorKind::NoConvergence, "Golub-Welsch tridiagonal eigensolve failed");
        rule.nodes = tri.eigenvalues();
    }
    rule.weights.resize(m);

    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (int i = 0; i < m; ++i) {
        Scalar s = rule.nodes[i];
        Scalar pm = 0, dpm = 0, christoffel = 0;
        bool converged = false;
        for (int iter = 0; iter < 32; ++iter) {
            rec.evaluate(s, pm, dpm, christoffel);
            const Scalar step = pm / dpm;
            s -= step;
            if (std::abs(step) <= Scalar(4) * eps * std::max(Scalar(1), std::abs(s))) {
                converged = true;
                break;
            }
        }
        if (!converged && !(std::abs(pm / dpm) <= Scalar(1e-13)))
            throw Error(ErrorKind::NoConvergence,
                        "Gauss-Jacobi node " + std::to_string(i) + " of " + std::to_string(m));
        rec.evaluate(s, pm, dpm, christoffel);
        rule.nodes[i] = s;
        rule.weights[i] = Scalar(1) / christoffel;
    }
    return rule;
}

} // namespace capeig
