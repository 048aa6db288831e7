#pragma once

#include <span>
#include <vector>

namespace degenpde {

/// A x = rhs with A tridiagonal. lower[i] = A(i+1, i), upper[i] = A(i, i+1);
/// both have one entry fewer than diag.
struct TridiagonalSystem {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;
};

/// Thomas elimination without pivoting. Throws SolverError on a zero pivot or
/// mismatched sizes.
std::vector<double> thomas_solve(std::span<const double> lower, std::span<const double> diag,
                                 std::span<const double> upper, std::span<const double> rhs);

std::vector<double> thomas_solve(const TridiagonalSystem& system);

}  // namespace degenpde
