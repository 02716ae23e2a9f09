#include "kinsir/tridiagonal.hpp"

#include "kinsir/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace kinsir {

void thomas_inplace(std::size_t n, const double* lower, const double* diag, const double* upper,
                    double* x, double* scratch)
{
    if (n == 0) return;
    double pivot = diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericError("tridiagonal solve: zero pivot at row 0");
    scratch[0] = n > 1 ? upper[0] / pivot : 0.0;
    x[0] /= pivot;
    for (std::size_t j = 1; j < n; ++j) {
        pivot = diag[j] - lower[j] * scratch[j - 1];
        if (pivot == 0.0 || !std::isfinite(pivot))
            throw NumericError("tridiagonal solve: zero pivot at row " + std::to_string(j));
        scratch[j] = j + 1 < n ? upper[j] / pivot : 0.0;
        x[j] = (x[j] - lower[j] * x[j - 1]) / pivot;
    }
    for (std::size_t j = n - 1; j-- > 0;) x[j] -= scratch[j] * x[j + 1];
}

std::vector<double> solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                                      const std::vector<double>& upper, const std::vector<double>& rhs)
{
    const std::size_t n = diag.size();
    if (rhs.size() != n || (n > 0 && (lower.size() != n - 1 || upper.size() != n - 1)))
        throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
    std::vector<double> lo(n, 0.0), up(n, 0.0), x = rhs, scratch(n);
    for (std::size_t j = 1; j < n; ++j) lo[j] = lower[j - 1];
    for (std::size_t j = 0; j + 1 < n; ++j) up[j] = upper[j];
    thomas_inplace(n, lo.data(), diag.data(), up.data(), x.data(), scratch.data());
    return x;
}

}  // namespace kinsir
