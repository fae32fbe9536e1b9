#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace capeig::oracle {

/// J_nu(x) for integer nu >= 0 from its power series; fine for x below ~10.
inline double bessel_j(int nu, double x) {
    const double half = 0.5 * x;
    double term = std::pow(half, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= -half * half / (double(m) * double(m + nu));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

/// First positive zero of J_nu: scan for a sign change, then bisect.
inline double bessel_first_zero(int nu) {
    double a = 0.5, fa = bessel_j(nu, a);
    for (double b = a + 0.05; b < 20.0; b += 0.05) {
        const double fb = bessel_j(nu, b);
        if (fa * fb < 0) {
            double lo = a, hi = b;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (bessel_j(nu, lo) * bessel_j(nu, mid) <= 0 ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
        a = b;
        fa = fb;
    }
    throw std::runtime_error("no Bessel zero found");
}

/// Number of monomials of total degree d in `vars` variables, by enumeration.
inline std::uint64_t count_monomials(int vars, int d) {
    if (d < 0)
        return 0;
    if (vars == 1)
        return 1;
    std::uint64_t total = 0;
    for (int first = 0; first <= d; ++first)
        total += count_monomials(vars - 1, d - first);
    return total;
}

/// dim of degree-l harmonic polynomials in n variables = dim P_l - dim P_{l-2}.
inline std::uint64_t harmonic_dimension(int l, int n) {
    return count_monomials(n, l) - count_monomials(n, l - 2);
}

} // namespace capeig::oracle
