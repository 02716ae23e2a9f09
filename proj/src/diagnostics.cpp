#include "kinsir/diagnostics.hpp"

#include "kinsir/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kinsir {

namespace {

void check_sizes(std::size_t n, const std::vector<double>& f, const std::vector<double>& g)
{
    if (f.size() != n || g.size() != n) throw std::invalid_argument("diagnostics: grid mismatch");
}

// Phase-grid trapezoid weight of flat index q.
template <class Fn>
double phase_sum(const PhaseGrid& grid, Fn&& term, bool exclude_endpoints = false)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.nx1(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < grid.nw1(); ++j) {
            if (exclude_endpoints && (j == 0 || j + 1 == grid.nw1())) continue;
            row += grid.ww[j] * term(grid.idx(i, j));
        }
        sum += grid.wx[i] * row;
    }
    return sum;
}

}  // namespace

double weighted_l1(const std::vector<double>& wt, const std::vector<double>& f, const std::vector<double>& g)
{
    check_sizes(wt.size(), f, g);
    double sum = 0.0;
    for (std::size_t k = 0; k < wt.size(); ++k) sum += wt[k] * std::abs(f[k] - g[k]);
    return sum;
}

double l1_distance(const PhaseGrid& grid, const std::vector<double>& f, const std::vector<double>& g,
                   bool exclude_endpoints)
{
    check_sizes(grid.size(), f, g);
    return phase_sum(grid, [&](std::size_t q) { return std::abs(f[q] - g[q]); }, exclude_endpoints);
}

double relative_entropy(const PhaseGrid& grid, const std::vector<double>& f, const std::vector<double>& g)
{
    check_sizes(grid.size(), f, g);
    bool infinite = false;
    const double h = phase_sum(grid, [&](std::size_t q) {
        if (f[q] <= 0.0) return 0.0;
        if (g[q] <= 0.0) {
            infinite = true;
            return 0.0;
        }
        return f[q] * std::log(f[q] / g[q]);
    });
    return infinite ? std::numeric_limits<double>::infinity() : h;
}

double hellinger(const PhaseGrid& grid, const std::vector<double>& f, const std::vector<double>& g)
{
    check_sizes(grid.size(), f, g);
    for (std::size_t q = 0; q < f.size(); ++q)
        if (f[q] < 0.0 || g[q] < 0.0) throw DomainError("hellinger: negative density");
    const double d2 = phase_sum(grid, [&](std::size_t q) {
        const double d = std::sqrt(f[q]) - std::sqrt(g[q]);
        return d * d;
    });
    return std::sqrt(std::max(d2, 0.0));
}

double sobolev_neg_norm(const std::vector<double>& f, const std::vector<double>& g, double dv, double s)
{
    if (f.size() != g.size() || f.size() < 2) throw std::invalid_argument("sobolev_neg_norm: size mismatch");
    if (!(dv > 0.0)) throw std::invalid_argument("sobolev_neg_norm: dv must be positive");
    const std::size_t n = f.size();
    std::vector<double> d(n);
    double mf = 0.0, mg = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (k == 0 || k + 1 == n) ? 0.5 * dv : dv;
        d[k] = w * (f[k] - g[k]);
        mf += w * f[k];
        mg += w * g[k];
    }
    if (std::abs(mf - mg) > 1e-8) throw DomainError("sobolev_neg_norm: masses differ; the norm diverges at zero frequency");

    std::size_t m = 1;
    while (m < 4 * n) m <<= 1;
    double* in = fftw_alloc_real(m);
    fftw_complex* out = fftw_alloc_complex(m / 2 + 1);
    std::fill(in, in + m, 0.0);
    std::copy(d.begin(), d.end(), in);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, out, FFTW_ESTIMATE);
    fftw_execute(plan);

    // |xi|^{-2s}|D|^2 is even in xi: integrate over xi > 0 and double.
    const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(m) * dv);
    double sum = 0.0;
    for (std::size_t k = 1; k <= m / 2; ++k) {
        const double xi = dxi * static_cast<double>(k);
        const double p2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
        const double wq = k == m / 2 ? 0.5 : 1.0;
        sum += wq * std::pow(xi, -2.0 * s) * p2;
    }
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
    return std::sqrt(2.0 * sum * dxi);
}

std::vector<WavePeak> detect_waves(const std::vector<double>& t, const std::vector<double>& y, double prominence)
{
    if (t.size() != y.size()) throw std::invalid_argument("detect_waves: size mismatch");
    std::vector<WavePeak> peaks;
    const std::size_t n = y.size();
    if (n < 3) return peaks;
    if (prominence < 0.0) prominence = 0.1 * *std::max_element(y.begin(), y.end());
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (!(y[k] > y[k - 1])) continue;
        std::size_t e = k;  // end of a plateau
        while (e + 1 < n && y[e + 1] == y[k]) ++e;
        if (e + 1 >= n || !(y[e + 1] < y[k])) continue;
        double left = y[k], right = y[k];
        for (std::size_t q = k; q-- > 0;) {
            if (y[q] > y[k]) break;
            left = std::min(left, y[q]);
        }
        for (std::size_t q = e + 1; q < n; ++q) {
            if (y[q] > y[k]) break;
            right = std::min(right, y[q]);
        }
        if (y[k] - left >= prominence && y[k] - right >= prominence) peaks.push_back({t[k], y[k]});
        k = e;
    }
    return peaks;
}

int count_crossings(const std::vector<double>& y, double level)
{
    int count = 0, last = 0;
    for (double v : y) {
        const int sgn = v > level ? 1 : (v < level ? -1 : 0);
        if (sgn == 0) continue;
        if (last != 0 && sgn != last) ++count;
        last = sgn;
    }
    return count;
}

}  // namespace kinsir
