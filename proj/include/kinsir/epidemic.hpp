#pragma once

#include "kinsir/opinion_fp.hpp"

namespace kinsir {

struct EpiParams {
    double beta = 0.8;
    double alpha = 0.0;  // opinion exponent of the transmission rate
    double gamma = 0.6;
};

void validate(const EpiParams& p);

/// beta (1-w)^alpha (1-w*)^alpha.
double beta_T(double w, double w_star, const EpiParams& p);

/// Increment (E_S, E_I, E_R) of the exchange operator at every node.
std::array<std::vector<double>, kCompartments> epi_rhs(const CompartmentField& state, const EpiParams& p);

/// Classical RK4 for the pointwise exchange system; the incidence integral is refreshed per stage.
void rk4_epi_step(CompartmentField& state, const EpiParams& p, double dt);

/// Lie splitting: opinion step with the given coefficients, then the exchange step.
void split_step(CompartmentField& state, const FpCoefficients& coeffs, const EpiParams& p, double dt,
                Backend be = Backend::OpenMP);
/// Same, assembling the coefficients from `state` first.
void split_step(CompartmentField& state, const ModelVariant& variant, const GraphonLattice& lattice,
                const EpiParams& p, double dt, Backend be = Backend::OpenMP);

/// (beta/gamma)(1 - m_S)(1 - m_I) rho_S.
double effective_R(const Moments& mom, const EpiParams& p);

struct SirState {
    double rho_S = 0.0;
    double rho_I = 0.0;
    double rho_R = 0.0;
};

/// Root in (0, rho_S] of log(s/rho_S) + R0 (rho_S + rho_I - s) = 0.
double sir_final_size(const SirState& in, double R0);
/// Peak infected fraction of the classical SIR trajectory.
double sir_peak(const SirState& in, double R0);

}  // namespace kinsir
