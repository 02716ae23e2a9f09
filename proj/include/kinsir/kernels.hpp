#pragma once

#include <cstddef>

namespace kinsir {

/// Execution backend for the hot loops. Both produce bitwise identical results.
enum class Backend { Serial, OpenMP };

namespace kernels {

/// M(i,l) = sum_k W(i,k) wk(k) F(k,l), with W of shape rows x nk and F of shape nk x nl.
void contract(Backend be, const double* W, std::size_t rows, const double* wk, const double* F,
              std::size_t nk, std::size_t nl, double* M);

/// Backward-Euler Chang-Cooper solve of `rows` independent rows of `n` nodes in place.
/// Face j of row r carries the flux a[j] f[j+1] - b[j] f[j] (n-1 faces per row); the
/// end nodes own half cells of width h/2. Returns the smallest updated entry.
double solve_flux_rows(Backend be, std::size_t rows, std::size_t n, const double* a,
                       const double* b, double h, double dt, double* f);

/// One row of solve_flux_rows; `work` must hold 4n doubles.
void solve_flux_row(std::size_t n, const double* a, const double* b, double h, double dt,
                    double* f, double* work);

}  // namespace kernels
}  // namespace kinsir
