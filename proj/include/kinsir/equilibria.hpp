#pragma once

#include "kinsir/epidemic.hpp"

#include <optional>

namespace kinsir {

/// Exponents of (1+w)^{e_minus} (1-w)^{e_plus} at every x node for one compartment.
struct BetaEquilibrium {
    std::vector<double> e_minus, e_plus;
    double nu = 0.0;  // sigma_J^2 / lambda
    bool empirical = false;  // weighted mean taken from a terminal numerical state
};

enum class Regime { Consensus, Polarization };
const char* to_string(Regime r);

/// Simplified model: exponents -1 + (P~(x)/nu)(rho_P~ +- m_P~). Full model: -1 + (rho_BP +- m_BP)/(nu rho_B).
/// `mom` supplies the (weighted) densities and means; throws DomainError when |m| >= rho.
BetaEquilibrium beta_equilibrium(int J, const Moments& mom, const ModelVariant& variant,
                                 const GraphonLattice& lattice);

Regime classify_regime(const BetaEquilibrium& eq, std::size_t i);

/// log of int_{-1}^{1} (1+w)^{em} (1-w)^{ep} dw = (a+b-1) log 2 + log B(a,b), a = em+1, b = ep+1.
double beta_log_normalizer(double e_minus, double e_plus);

/// Density with the given w-integral sampled on `w`. Divergent endpoints are filled by
/// geometric one-sided extrapolation from the two neighbouring nodes.
std::vector<double> sample_beta(double e_minus, double e_plus, double mass, const std::vector<double>& w);

/// Fill a field from per-compartment row masses (x-marginals) and exponents.
CompartmentField equilibrium_field(const PhaseGrid& grid,
                                   const std::array<std::vector<double>, kCompartments>& row_mass,
                                   const std::array<BetaEquilibrium, kCompartments>& eq);

/// Closed-form global equilibrium for alpha = 0: S keeps its x-marginal shape scaled to the
/// final-size root, I vanishes, R takes the remaining mass of each row.
CompartmentField global_sir_equilibrium(const CompartmentField& ic, const EpiParams& params,
                                        const ModelVariant& variant, const GraphonLattice& lattice);

/// Local equilibrium matching the row masses and weighted means of a given state.
CompartmentField equilibrium_from_state(const CompartmentField& state, const ModelVariant& variant,
                                        const GraphonLattice& lattice);

/// Inverse gamma law with shape 1 + 2 mu/zeta^2 and scale 2 theta F/zeta^2.
struct InverseGamma {
    double shape = 0.0;
    double scale = 0.0;

    static InverseGamma from_params(double F, double mu, double zeta2, double theta);
    double pdf(double v) const;
    double mean() const;
    double mode() const;
    /// Second moment; +inf when shape <= 2.
    double energy() const;
    /// Mass beyond L.
    double tail_mass(double L) const;
};

}  // namespace kinsir
