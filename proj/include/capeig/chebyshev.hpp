#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace capeig {

/// Polynomial on [-1, 1] held as coefficients of T_0 .. T_d.
template <typename Scalar = double>
class ChebyshevSeries {
public:
    using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    ChebyshevSeries() : c_(Coeffs::Zero(1)) {}
    explicit ChebyshevSeries(Coeffs coeffs) : c_(std::move(coeffs)) {
        if (c_.size() == 0)
            c_ = Coeffs::Zero(1);
    }

    static ChebyshevSeries constant(Scalar value, Eigen::Index length = 1) {
        Coeffs c = Coeffs::Zero(std::max<Eigen::Index>(length, 1));
        c[0] = value;
        return ChebyshevSeries(std::move(c));
    }

    /// T_k padded with zeros to `length` coefficients.
    static ChebyshevSeries basis(Eigen::Index k, Eigen::Index length) {
        Coeffs c = Coeffs::Zero(std::max(length, k + 1));
        c[k] = Scalar(1);
        return ChebyshevSeries(std::move(c));
    }

    const Coeffs& coeffs() const { return c_; }
    Eigen::Index size() const { return c_.size(); }
    Eigen::Index degree() const { return c_.size() - 1; }

    ChebyshevSeries padded(Eigen::Index length) const {
        if (length <= size())
            return *this;
        Coeffs c = Coeffs::Zero(length);
        c.head(size()) = c_;
        return ChebyshevSeries(std::move(c));
    }

    /// Truncates to `length` coefficients; caller guarantees the tail is zero.
    ChebyshevSeries truncated(Eigen::Index length) const {
        return ChebyshevSeries(Coeffs(c_.head(std::min(length, size()))));
    }

    /// s * p(s). Uses s T_0 = T_1, s T_k = (T_{k+1} + T_{k-1}) / 2.
    ChebyshevSeries times_s() const {
        const Eigen::Index n = size();
        Coeffs out = Coeffs::Zero(n + 1);
        out[1] += c_[0];
        for (Eigen::Index k = 1; k < n; ++k) {
            out[k + 1] += c_[k] / Scalar(2);
            out[k - 1] += c_[k] / Scalar(2);
        }
        return ChebyshevSeries(std::move(out));
    }

    /// (a + b s) * p(s)
    ChebyshevSeries times_affine(Scalar a, Scalar b) const {
        ChebyshevSeries out = times_s();
        out.c_ *= b;
        out.c_.head(size()) += a * c_;
        return out;
    }

    /// dp/ds, one coefficient shorter (never shorter than one).
    ChebyshevSeries derivative() const {
        const Eigen::Index n = size();
        if (n == 1)
            return constant(Scalar(0));
        Coeffs d = Coeffs::Zero(n + 1);
        for (Eigen::Index k = n - 1; k >= 1; --k)
            d[k - 1] = d[k + 1] + Scalar(2 * k) * c_[k];
        d[0] /= Scalar(2);
        return ChebyshevSeries(Coeffs(d.head(n - 1)));
    }

    Scalar operator()(Scalar s) const {
        // Clenshaw
        Scalar b1 = 0, b2 = 0;
        for (Eigen::Index k = size() - 1; k >= 1; --k) {
            const Scalar b0 = Scalar(2) * s * b1 - b2 + c_[k];
            b2 = b1;
            b1 = b0;
        }
        return s * b1 - b2 + c_[0];
    }

    template <typename Derived>
    Coeffs evaluate(const Eigen::MatrixBase<Derived>& nodes) const {
        Coeffs out(nodes.size());
        for (Eigen::Index i = 0; i < nodes.size(); ++i)
            out[i] = (*this)(nodes[i]);
        return out;
    }

    ChebyshevSeries& operator+=(const ChebyshevSeries& o) {
        if (o.size() > size())
            *this = padded(o.size());
        c_.head(o.size()) += o.c_;
        return *this;
    }
    ChebyshevSeries& operator*=(Scalar k) {
        c_ *= k;
        return *this;
    }

    friend ChebyshevSeries operator+(ChebyshevSeries a, const ChebyshevSeries& b) { return a += b; }
    friend ChebyshevSeries operator*(Scalar k, ChebyshevSeries a) { return a *= k; }
    friend ChebyshevSeries operator-(ChebyshevSeries a, const ChebyshevSeries& b) {
        return a += Scalar(-1) * b;
    }

private:
    Coeffs c_;
};

} // namespace capeig
