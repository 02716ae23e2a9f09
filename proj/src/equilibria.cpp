#include "kinsir/equilibria.hpp"

#include "kinsir/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace kinsir {

const char* to_string(Regime r)
{
    return r == Regime::Consensus ? "consensus" : "polarization";
}

BetaEquilibrium beta_equilibrium(int J, const Moments& mom, const ModelVariant& variant,
                                 const GraphonLattice& lattice)
{
    if (!(variant.lambda > 0.0) || !(variant.sigma2[J] > 0.0))
        throw DomainError("beta_equilibrium: requires lambda > 0 and sigma^2 > 0");
    BetaEquilibrium eq;
    eq.nu = variant.sigma2[J] / variant.lambda;
    const std::size_t n = lattice.n;
    eq.e_minus.resize(n);
    eq.e_plus.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double rho, m, k;
        if (variant.kind == ModelVariant::Kind::Simplified) {
            rho = mom.rho_ptilde;
            m = mom.m_ptilde;
            k = lattice.p_tilde[i] / eq.nu;
        } else {
            rho = mom.rho_BP.at(i);
            m = mom.m_BP.at(i);
            const double rB = mom.rho_B.at(i);
            if (!(rB > 0.0)) throw DomainError("beta_equilibrium: vanishing rho_B at x node " + std::to_string(i));
            k = 1.0 / (eq.nu * rB);
        }
        if (!(std::abs(m) < rho))
            throw DomainError("beta_equilibrium: |m| >= rho, the equilibrium is a Dirac mass");
        eq.e_minus[i] = -1.0 + k * (rho + m);
        eq.e_plus[i] = -1.0 + k * (rho - m);
    }
    return eq;
}

Regime classify_regime(const BetaEquilibrium& eq, std::size_t i)
{
    return std::min(eq.e_minus.at(i), eq.e_plus.at(i)) < 0.0 ? Regime::Polarization : Regime::Consensus;
}

double beta_log_normalizer(double e_minus, double e_plus)
{
    const double a = e_minus + 1.0, b = e_plus + 1.0;
    if (!(a > 0.0 && b > 0.0)) throw DomainError("beta_log_normalizer: exponents must exceed -1");
    return (a + b - 1.0) * std::log(2.0) + std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

std::vector<double> sample_beta(double e_minus, double e_plus, double mass, const std::vector<double>& w)
{
    const std::size_t n = w.size();
    std::vector<double> out(n, 0.0);
    if (mass == 0.0) return out;
    if (n < 3) throw std::invalid_argument("sample_beta: need at least three nodes");
    const double logc = std::log(mass) - beta_log_normalizer(e_minus, e_plus);
    for (std::size_t j = 0; j < n; ++j) {
        const double lp = 1.0 + w[j], lm = 1.0 - w[j];
        const bool left_div = lp <= 0.0 && e_minus < 0.0;
        const bool right_div = lm <= 0.0 && e_plus < 0.0;
        if (left_div || right_div) continue;
        double v = logc;
        if (e_minus != 0.0) v += lp > 0.0 ? e_minus * std::log(lp) : -std::numeric_limits<double>::infinity();
        if (e_plus != 0.0) v += lm > 0.0 ? e_plus * std::log(lm) : -std::numeric_limits<double>::infinity();
        out[j] = std::exp(v);
    }
    auto extrapolate = [&](std::size_t at, std::size_t n1, std::size_t n2) {
        out[at] = out[n2] > 0.0 ? out[n1] * out[n1] / out[n2] : out[n1];
    };
    if (1.0 + w.front() <= 0.0 && e_minus < 0.0) extrapolate(0, 1, 2);
    if (1.0 - w.back() <= 0.0 && e_plus < 0.0) extrapolate(n - 1, n - 2, n - 3);
    return out;
}

CompartmentField equilibrium_field(const PhaseGrid& grid,
                                   const std::array<std::vector<double>, kCompartments>& row_mass,
                                   const std::array<BetaEquilibrium, kCompartments>& eq)
{
    CompartmentField out(grid);
    for (int J = 0; J < kCompartments; ++J) {
        for (std::size_t i = 0; i < grid.nx1(); ++i) {
            const double mass = row_mass[J].at(i);
            if (mass <= 0.0) continue;
            const auto col = sample_beta(eq[J].e_minus.at(i), eq[J].e_plus.at(i), mass, grid.w);
            std::copy(col.begin(), col.end(), out.f[J].begin() + static_cast<long>(grid.idx(i, 0)));
        }
    }
    return out;
}

CompartmentField global_sir_equilibrium(const CompartmentField& ic, const EpiParams& params,
                                        const ModelVariant& variant, const GraphonLattice& lattice)
{
    if (params.alpha != 0.0)
        throw DomainError("global_sir_equilibrium: no closed form for alpha != 0");
    const PhaseGrid& g = ic.grid;
    const Moments mom = compute_moments(ic, lattice);
    const SirState in{mom.rho[S], mom.rho[I], mom.rho[R]};
    const double s_inf = sir_final_size(in, params.beta / params.gamma);

    std::array<std::vector<double>, kCompartments> rows;
    rows[S] = row_masses(g, ic.f[S]);
    const auto total_rows = row_masses(g, ic.total());
    const double scale = s_inf / mom.rho[S];
    rows[I].assign(g.nx1(), 0.0);
    rows[R].resize(g.nx1());
    for (std::size_t i = 0; i < g.nx1(); ++i) {
        rows[S][i] *= scale;
        rows[R][i] = std::max(0.0, total_rows[i] - rows[S][i]);
    }
    std::array<BetaEquilibrium, kCompartments> eq;
    for (int J = 0; J < kCompartments; ++J) eq[J] = beta_equilibrium(J, mom, variant, lattice);
    return equilibrium_field(g, rows, eq);
}

CompartmentField equilibrium_from_state(const CompartmentField& state, const ModelVariant& variant,
                                        const GraphonLattice& lattice)
{
    const PhaseGrid& g = state.grid;
    const Moments mom = compute_moments(state, lattice);
    std::array<std::vector<double>, kCompartments> rows;
    std::array<BetaEquilibrium, kCompartments> eq;
    for (int J = 0; J < kCompartments; ++J) {
        rows[J] = row_masses(g, state.f[J]);
        eq[J] = beta_equilibrium(J, mom, variant, lattice);
        eq[J].empirical = true;
    }
    return equilibrium_field(g, rows, eq);
}

InverseGamma InverseGamma::from_params(double F, double mu, double zeta2, double theta)
{
    if (!(mu > 0.0 && zeta2 > 0.0 && theta > 0.0))
        throw DomainError("inverse gamma: mu, zeta^2 and theta must be positive");
    if (!(F > 0.0)) throw DomainError("inverse gamma: F = 0 gives a Dirac mass at v = 0");
    return InverseGamma{1.0 + 2.0 * mu / zeta2, 2.0 * theta * F / zeta2};
}

double InverseGamma::pdf(double v) const
{
    if (v <= 0.0) return 0.0;
    const double lg = shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(v) - scale / v;
    return std::exp(lg);
}

double InverseGamma::mean() const
{
    return shape > 1.0 ? scale / (shape - 1.0) : std::numeric_limits<double>::infinity();
}

double InverseGamma::mode() const { return scale / (shape + 1.0); }

double InverseGamma::energy() const
{
    return shape > 2.0 ? scale * scale / ((shape - 1.0) * (shape - 2.0))
                       : std::numeric_limits<double>::infinity();
}

double InverseGamma::tail_mass(double L) const
{
    if (L <= 0.0) return 1.0;
    return boost::math::gamma_p(shape, scale / L);
}

}  // namespace kinsir
