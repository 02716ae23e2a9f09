#include "kinsir/chang_cooper.hpp"

#include <algorithm>
#include <cmath>

namespace kinsir {

double bernoulli(double z)
{
    if (std::abs(z) < 1e-3) return 1.0 - z / 2.0 + z * z / 12.0 - z * z * z * z / 720.0;
    if (z > 0.0) return z * std::exp(-z) / -std::expm1(-z);
    return z / std::expm1(z);
}

double cc_weight(double lambda)
{
    if (std::isinf(lambda)) return lambda > 0.0 ? 0.0 : 1.0;
    if (std::abs(lambda) < 1e-3) {
        const double l2 = lambda * lambda;
        return 0.5 - lambda / 12.0 + lambda * l2 / 720.0;
    }
    return 1.0 / lambda - 1.0 / std::expm1(lambda);
}

FaceFlux cc_face(double drift, double diff, double lambda, double h)
{
    if (diff > 0.0 && std::isfinite(lambda)) {
        const double s = diff / h;
        return {s * bernoulli(-lambda), s * bernoulli(lambda)};
    }
    // upwind limit of the weights
    const double s = std::max(diff, 0.0) / h;
    return {std::max(drift, 0.0) + s, std::max(-drift, 0.0) + s};
}

}  // namespace kinsir
