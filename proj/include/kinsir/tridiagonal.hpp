#pragma once

#include <cstddef>
#include <vector>

namespace kinsir {

/// Thomas algorithm. `lower` and `upper` hold the n-1 off-diagonal entries.
std::vector<double> solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                                      const std::vector<double>& upper, const std::vector<double>& rhs);

/// In-place variant: lower[j] couples x[j-1] into row j (lower[0] unused), upper[j] couples
/// x[j+1] into row j. `x` holds the right-hand side on entry; `scratch` needs n doubles.
void thomas_inplace(std::size_t n, const double* lower, const double* diag, const double* upper,
                    double* x, double* scratch);

}  // namespace kinsir
