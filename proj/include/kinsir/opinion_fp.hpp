#pragma once

#include "kinsir/graphon.hpp"
#include "kinsir/kernels.hpp"
#include "kinsir/phase_grid.hpp"

#include <array>
#include <vector>

namespace kinsir {

struct ModelVariant {
    enum class Kind { Full, Simplified };
    Kind kind = Kind::Simplified;
    OpinionKernel G;
    std::array<double, kCompartments> sigma2{0.01, 0.01, 0.01};
    double lambda = 1.0;  // compromise strength
    double tau = 1.0;
    int quad_order = 6;   // order of the face-average rule
};

void validate(const ModelVariant& v);

/// Face quantities for every (J, i, j), j = 0..nw-1 the face between w_j and w_{j+1}.
/// drift/diff follow the flux convention  J = drift * f - diff * d_w f  (not divided by tau);
/// lambda is the cell integral of -drift/diff; a, b are the scheme coefficients (divided by tau).
struct FpCoefficients {
    std::size_t nx1 = 0;
    std::size_t nfaces = 0;
    double dw = 0.0;
    double tau = 1.0;
    std::vector<double> drift, diff, lambda, delta, a, b;

    std::size_t idx(int J, std::size_t i, std::size_t j) const
    {
        return (static_cast<std::size_t>(J) * nx1 + i) * nfaces + j;
    }
    double max_abs_drift() const;
};

FpCoefficients assemble_coefficients(const CompartmentField& state, const ModelVariant& variant,
                                     const GraphonLattice& lattice, Backend be = Backend::OpenMP);

/// safety * dw / (2 C), C = max |drift| / tau floored at 1e-30, capped at dt_max.
double cfl_dt(const FpCoefficients& coeffs, const PhaseGrid& grid, double safety, double dt_max);

/// One semi-implicit Chang-Cooper step with zero flux at w = -1 and w = 1.
void fp_step(CompartmentField& state, const FpCoefficients& coeffs, double dt,
             Backend be = Backend::OpenMP);

}  // namespace kinsir
