#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "capeig/error.hpp"

namespace capeig {

enum class Problem { Clamped, Buckling };

inline std::string_view to_string(Problem p) {
    return p == Problem::Clamped ? "clamped" : "buckling";
}

inline Problem parse_problem(std::string_view s) {
    if (s == "clamped")
        return Problem::Clamped;
    if (s == "buckling")
        return Problem::Buckling;
    throw Error(ErrorKind::InvalidConfig, "unknown problem '" + std::string(s) + "'");
}

/// Multiplicity-expanded eigenvalues lambda_1 <= ... <= lambda_K together with
/// the (n, p, problem) they belong to.
struct EigenSequence {
    int n = 2;
    int p = 1;
    Problem problem = Problem::Clamped;
    std::vector<double> values;

    /// Throws DomainError unless ascending, positive, and p consistent with problem.
    void validate() const;

    std::size_t size() const { return values.size(); }
    EigenSequence prefix(std::size_t k) const;
};

} // namespace capeig
