#pragma once

// Dense symmetric kernels: Cholesky, cyclic Jacobi, and the symmetric-definite
// generalized eigenproblem A c = lambda B c.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "capeig/error.hpp"

namespace capeig {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Square matrix stored symmetrized as (M + M^T)/2. The asymmetry of the input
/// is kept as max|M - M^T| / max|M| so callers can surface it.
template <typename Scalar = double>
class SymMatrix {
public:
    SymMatrix() = default;

    template <typename Derived>
    explicit SymMatrix(const Eigen::MatrixBase<Derived>& m) {
        if (m.rows() != m.cols() || m.rows() < 1)
            throw Error(ErrorKind::InvalidConfig, "SymMatrix requires a non-empty square matrix");
        entries_ = (m + m.transpose()) / Scalar(2);
        const Scalar scale = m.cwiseAbs().maxCoeff();
        const Scalar defect = (m - m.transpose()).cwiseAbs().maxCoeff();
        asymmetry_ = scale > Scalar(0) ? defect / scale : Scalar(0);
    }

    static SymMatrix identity(Eigen::Index order) {
        return SymMatrix(Matrix<Scalar>::Identity(order, order));
    }

    Eigen::Index order() const { return entries_.rows(); }
    const Matrix<Scalar>& entries() const { return entries_; }
    Scalar operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
    Scalar asymmetry() const { return asymmetry_; }
    Scalar max_diag() const { return entries_.diagonal().cwiseAbs().maxCoeff(); }

private:
    Matrix<Scalar> entries_;
    Scalar asymmetry_ = Scalar(0);
};

template <typename Scalar = double>
struct EigenPairs {
    Vector<Scalar> values;  // ascending
    Matrix<Scalar> vectors; // column j pairs with values[j]
};

/// Lower-triangular L with L L^T = B. A pivot at or below
/// order * 1e-14 * maxdiag(B) is reported as NotPositiveDefinite.
template <typename Scalar>
Matrix<Scalar> cholesky(const SymMatrix<Scalar>& b) {
    const Eigen::Index n = b.order();
    const Scalar tol = Scalar(n) * Scalar(1e-14) * b.max_diag();
    Matrix<Scalar> l = Matrix<Scalar>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Scalar pivot = b(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
            pivot -= l(j, k) * l(j, k);
        if (!(pivot > tol))
            throw Error(ErrorKind::NotPositiveDefinite,
                        "pivot " + std::to_string(j) + " = " + std::to_string(double(pivot)));
        const Scalar d = std::sqrt(pivot);
        l(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            Scalar s = b(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= l(i, k) * l(j, k);
            l(i, j) = s / d;
        }
    }
    return l;
}

namespace detail {

template <typename Scalar>
EigenPairs<Scalar> sorted_pairs(const Matrix<Scalar>& diagonalized, const Matrix<Scalar>& rotations) {
    const Eigen::Index n = diagonalized.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return diagonalized(a, a) < diagonalized(b, b);
    });
    EigenPairs<Scalar> out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto src = order[static_cast<std::size_t>(j)];
        out.values[j] = diagonalized(src, src);
        out.vectors.col(j) = rotations.col(src);
    }
    return out;
}

} // namespace detail

/// Cyclic Jacobi diagonalization. A rotation is skipped once |a_pq| is
/// negligible against sqrt(|a_pp a_qq|), which keeps small eigenvalues
/// accurate relative to themselves rather than to the norm.
template <typename Scalar>
EigenPairs<Scalar> sym_eigen(const SymMatrix<Scalar>& c, int max_sweeps = 64) {
    const Eigen::Index n = c.order();
    Matrix<Scalar> a = c.entries();
    Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Scalar apq = a(p, q);
                if (apq == Scalar(0))
                    continue;
                const Scalar app = a(p, p);
                const Scalar aqq = a(q, q);
                if (std::abs(apq) <= eps * std::sqrt(std::abs(app)) * std::sqrt(std::abs(aqq))) {
                    a(p, q) = a(q, p) = Scalar(0);
                    continue;
                }
                rotated = true;
                const Scalar theta = (aqq - app) / (Scalar(2) * apq);
                const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                                 (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
                const Scalar cs = Scalar(1) / std::sqrt(t * t + Scalar(1));
                const Scalar sn = t * cs;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar akp = a(k, p);
                    const Scalar akq = a(k, q);
                    a(k, p) = cs * akp - sn * akq;
                    a(k, q) = sn * akp + cs * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar apk = a(p, k);
                    const Scalar aqk = a(q, k);
                    a(p, k) = cs * apk - sn * aqk;
                    a(q, k) = sn * apk + cs * aqk;
                }
                a(p, q) = a(q, p) = Scalar(0);
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar vkp = v(k, p);
                    const Scalar vkq = v(k, q);
                    v(k, p) = cs * vkp - sn * vkq;
                    v(k, q) = sn * vkp + cs * vkq;
                }
            }
        }
        if (!rotated)
            return detail::sorted_pairs<Scalar>(a, v);
    }
    throw Error(ErrorKind::NoConvergence,
                "cyclic Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
}

/// Solves A c = lambda B c for symmetric A and positive definite B through
/// B = L L^T. B is diagonally rescaled first; the returned vectors are
/// B-orthonormal in the original coordinates.
template <typename Scalar>
EigenPairs<Scalar> generalized_sym_eigen(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b,
                                         int max_sweeps = 64) {
    if (a.order() != b.order())
        throw Error(ErrorKind::InvalidConfig, "generalized_sym_eigen: order mismatch");
    const Eigen::Index n = a.order();
    Vector<Scalar> scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar d = b(i, i);
        if (!(d > Scalar(0)))
            throw Error(ErrorKind::NotPositiveDefinite, "non-positive diagonal entry in B");
        scale[i] = Scalar(1) / std::sqrt(d);
    }
    const auto s = scale.asDiagonal();
    const SymMatrix<Scalar> bs(Matrix<Scalar>(s * b.entries() * s));
    const Matrix<Scalar> as = s * a.entries() * s;

    const Matrix<Scalar> l = cholesky(bs);
    const auto lower = l.template triangularView<Eigen::Lower>();
    // C = L^{-1} A L^{-T}
    Matrix<Scalar> half = lower.solve(as);
    Matrix<Scalar> reduced = lower.solve(Matrix<Scalar>(half.transpose()));
    EigenPairs<Scalar> pairs = sym_eigen(SymMatrix<Scalar>(reduced), max_sweeps);

    pairs.vectors = l.transpose().template triangularView<Eigen::Upper>().solve(pairs.vectors);
    pairs.vectors = s * pairs.vectors;
    return pairs;
}

} // namespace capeig
