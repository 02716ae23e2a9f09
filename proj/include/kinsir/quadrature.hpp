#pragma once

#include <functional>
#include <vector>

namespace kinsir {

/// Gauss-Legendre rule on [0,1] with weights summing to one.
struct UnitRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule of the given even order (2 -> midpoint, 4 -> 2 points, ..., 10 -> 5 points).
UnitRule gauss_legendre_unit(int order);

/// Adaptive Gauss-Kronrod integral of f over [a,b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-13);

/// Composite trapezoid weights for n+1 uniform nodes with spacing h.
std::vector<double> trapezoid_weights(int n, double h);

}  // namespace kinsir
