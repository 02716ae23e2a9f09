#pragma once

#include "kinsir/phase_grid.hpp"

#include <vector>

namespace kinsir {

/// Weighted L1 distance sum_k wt_k |f_k - g_k|.
double weighted_l1(const std::vector<double>& wt, const std::vector<double>& f, const std::vector<double>& g);

/// Trapezoid L1 distance over the phase grid, optionally dropping the w = -1 and w = 1 nodes.
double l1_distance(const PhaseGrid& grid, const std::vector<double>& f, const std::vector<double>& g,
                   bool exclude_endpoints = false);

/// int f log(f/g), 0 log 0 = 0; +inf when g vanishes where f does not.
double relative_entropy(const PhaseGrid& grid, const std::vector<double>& f, const std::vector<double>& g);

/// (int (sqrt f - sqrt g)^2)^{1/2}; DomainError on negative input.
double hellinger(const PhaseGrid& grid, const std::vector<double>& f, const std::vector<double>& g);

/// Homogeneous negative Sobolev norm of f - g sampled on v_k = k dv. The difference is
/// zero-padded to a window of at least four times its support and transformed with a real
/// FFT; the norm is (int_R |xi|^{-2s} |D(xi)|^2 dxi)^{1/2}, D(xi) = int (f-g) e^{-i xi v} dv,
/// with the zero frequency excluded. DomainError when the trapezoid masses differ by > 1e-8.
double sobolev_neg_norm(const std::vector<double>& f, const std::vector<double>& g, double dv, double s);

struct WavePeak {
    double t;
    double value;
};

/// Interior local maxima whose drop to the lowest point before a higher value, on both sides, is at
/// least `prominence`. A negative prominence selects 10% of the series maximum.
std::vector<WavePeak> detect_waves(const std::vector<double>& t, const std::vector<double>& y,
                                   double prominence = -1.0);

/// Number of sign changes of y - level along the series (zeros skipped).
int count_crossings(const std::vector<double>& y, double level);

}  // namespace kinsir
