#include "kinsir/kernels.hpp"

#include "kinsir/tridiagonal.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <vector>

namespace kinsir::kernels {

namespace {

void contract_row(const double* W, std::size_t i, const double* wk, const double* F, std::size_t nk,
                  std::size_t nl, double* M)
{
    double* out = M + i * nl;
    std::fill(out, out + nl, 0.0);
    for (std::size_t k = 0; k < nk; ++k) {
        const double c = W[i * nk + k] * wk[k];
        if (c == 0.0) continue;
        const double* src = F + k * nl;
        for (std::size_t l = 0; l < nl; ++l) out[l] += c * src[l];
    }
}

}  // namespace

void contract(Backend be, const double* W, std::size_t rows, const double* wk, const double* F,
              std::size_t nk, std::size_t nl, double* M)
{
    const long nrows = static_cast<long>(rows);
    if (be == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < nrows; ++i) contract_row(W, static_cast<std::size_t>(i), wk, F, nk, nl, M);
    } else {
        for (long i = 0; i < nrows; ++i) contract_row(W, static_cast<std::size_t>(i), wk, F, nk, nl, M);
    }
}

void solve_flux_row(std::size_t n, const double* a, const double* b, double h, double dt, double* f,
                    double* work)
{
    double* lower = work;
    double* diag = work + n;
    double* upper = work + 2 * n;
    double* scratch = work + 3 * n;
    for (std::size_t j = 0; j < n; ++j) {
        const double omega = (j == 0 || j + 1 == n) ? 0.5 * h : h;
        const double r = dt / omega;
        const double out_right = j + 1 < n ? b[j] : 0.0;
        const double out_left = j > 0 ? a[j - 1] : 0.0;
        lower[j] = j > 0 ? -r * b[j - 1] : 0.0;
        upper[j] = j + 1 < n ? -r * a[j] : 0.0;
        diag[j] = 1.0 + r * (out_right + out_left);
    }
    thomas_inplace(n, lower, diag, upper, f, scratch);
}

double solve_flux_rows(Backend be, std::size_t rows, std::size_t n, const double* a, const double* b,
                       double h, double dt, double* f)
{
    const long nrows = static_cast<long>(rows);
    std::vector<double> row_min(rows, std::numeric_limits<double>::infinity());
    auto body = [&](long r, std::vector<double>& work) {
        const std::size_t ur = static_cast<std::size_t>(r);
        double* row = f + ur * n;
        solve_flux_row(n, a + ur * (n - 1), b + ur * (n - 1), h, dt, row, work.data());
        row_min[ur] = *std::min_element(row, row + n);
    };
    if (be == Backend::OpenMP) {
        std::exception_ptr failure;
#pragma omp parallel
        {
            std::vector<double> work(4 * n);
#pragma omp for schedule(static)
            for (long r = 0; r < nrows; ++r) {
                try {
                    body(r, work);
                } catch (...) {
#pragma omp critical
                    if (!failure) failure = std::current_exception();
                }
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        std::vector<double> work(4 * n);
        for (long r = 0; r < nrows; ++r) body(r, work);
    }
    return rows ? *std::min_element(row_min.begin(), row_min.end()) : 0.0;
}

}  // namespace kinsir::kernels
