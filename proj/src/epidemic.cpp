#include "kinsir/epidemic.hpp"

#include "kinsir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kinsir {

void validate(const EpiParams& p)
{
    if (!(p.beta >= 0.0) || !std::isfinite(p.beta)) throw ConfigError("epi.beta must be >= 0");
    if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) throw ConfigError("epi.alpha must be >= 0");
    if (!(p.gamma >= 0.0) || !std::isfinite(p.gamma)) throw ConfigError("epi.gamma must be >= 0");
}

namespace {

double protect(double w, double alpha)
{
    if (alpha == 0.0) return 1.0;
    return std::pow(std::max(0.0, 1.0 - w), alpha);
}

// Phi = int int (1-w*)^alpha f_I dy dw*, so that Lambda(w) = beta (1-w)^alpha Phi.
double incidence_integral(const PhaseGrid& g, const std::vector<double>& fI, double alpha)
{
    std::vector<double> wt(g.nw1());
    for (std::size_t j = 0; j < g.nw1(); ++j) wt[j] = g.ww[j] * protect(g.w[j], alpha);
    double phi = 0.0;
    for (std::size_t i = 0; i < g.nx1(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.nw1(); ++j) row += wt[j] * fI[g.idx(i, j)];
        phi += g.wx[i] * row;
    }
    return phi;
}

struct Stage {
    std::vector<double> s, i, r;
};

void rhs(const PhaseGrid& g, const std::vector<double>& fS, const std::vector<double>& fI,
         const EpiParams& p, const std::vector<double>& prot, Stage& out)
{
    const double phi = p.beta * incidence_integral(g, fI, p.alpha);
    const std::size_t nw1 = g.nw1();
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double inf = fS[n] * phi * prot[n % nw1];
        const double rec = p.gamma * fI[n];
        out.s[n] = -inf;
        out.i[n] = inf - rec;
        out.r[n] = rec;
    }
}

}  // namespace

double beta_T(double w, double w_star, const EpiParams& p)
{
    return p.beta * protect(w, p.alpha) * protect(w_star, p.alpha);
}

std::array<std::vector<double>, kCompartments> epi_rhs(const CompartmentField& state, const EpiParams& p)
{
    const PhaseGrid& g = state.grid;
    std::vector<double> prot(g.nw1());
    for (std::size_t j = 0; j < g.nw1(); ++j) prot[j] = protect(g.w[j], p.alpha);
    Stage k{std::vector<double>(g.size()), std::vector<double>(g.size()), std::vector<double>(g.size())};
    rhs(g, state.f[S], state.f[I], p, prot, k);
    return {std::move(k.s), std::move(k.i), std::move(k.r)};
}

void rk4_epi_step(CompartmentField& state, const EpiParams& p, double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_epi_step: dt must be positive");
    const PhaseGrid& g = state.grid;
    const std::size_t n = g.size();
    std::vector<double> prot(g.nw1());
    for (std::size_t j = 0; j < g.nw1(); ++j) prot[j] = protect(g.w[j], p.alpha);

    auto make = [n] { return Stage{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)}; };
    Stage k1 = make(), k2 = make(), k3 = make(), k4 = make();
    std::vector<double> ts(n), ti(n);
    const auto& fS = state.f[S];
    const auto& fI = state.f[I];

    rhs(g, fS, fI, p, prot, k1);
    for (std::size_t q = 0; q < n; ++q) {
        ts[q] = fS[q] + 0.5 * dt * k1.s[q];
        ti[q] = fI[q] + 0.5 * dt * k1.i[q];
    }
    rhs(g, ts, ti, p, prot, k2);
    for (std::size_t q = 0; q < n; ++q) {
        ts[q] = fS[q] + 0.5 * dt * k2.s[q];
        ti[q] = fI[q] + 0.5 * dt * k2.i[q];
    }
    rhs(g, ts, ti, p, prot, k3);
    for (std::size_t q = 0; q < n; ++q) {
        ts[q] = fS[q] + dt * k3.s[q];
        ti[q] = fI[q] + dt * k3.i[q];
    }
    rhs(g, ts, ti, p, prot, k4);

    const double c = dt / 6.0;
    double lowest = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
        const double s = state.f[S][q] + c * (k1.s[q] + 2.0 * k2.s[q] + 2.0 * k3.s[q] + k4.s[q]);
        const double i = state.f[I][q] + c * (k1.i[q] + 2.0 * k2.i[q] + 2.0 * k3.i[q] + k4.i[q]);
        const double r = state.f[R][q] + c * (k1.r[q] + 2.0 * k2.r[q] + 2.0 * k3.r[q] + k4.r[q]);
        state.f[S][q] = s;
        state.f[I][q] = i;
        state.f[R][q] = r;
        lowest = std::min({lowest, s, i, r});
    }
    if (lowest < -1e-12)
        throw NumericError("exchange step produced a negative density (" + std::to_string(lowest) +
                           "); reduce the time step");
}

void split_step(CompartmentField& state, const FpCoefficients& coeffs, const EpiParams& p, double dt,
                Backend be)
{
    fp_step(state, coeffs, dt, be);
    rk4_epi_step(state, p, dt);
}

void split_step(CompartmentField& state, const ModelVariant& variant, const GraphonLattice& lattice,
                const EpiParams& p, double dt, Backend be)
{
    const FpCoefficients coeffs = assemble_coefficients(state, variant, lattice, be);
    split_step(state, coeffs, p, dt, be);
}

double effective_R(const Moments& mom, const EpiParams& p)
{
    const double mS = mom.rho[S] >= kMassFloor ? mom.m[S] : 0.0;
    const double mI = mom.rho[I] >= kMassFloor ? mom.m[I] : 0.0;
    return p.beta / p.gamma * (1.0 - mS) * (1.0 - mI) * mom.rho[S];
}

double sir_final_size(const SirState& in, double R0)
{
    if (!(R0 > 0.0)) throw DomainError("sir_final_size: R0 must be positive");
    if (!(in.rho_S > 0.0)) throw DomainError("sir_final_size: rho_S must be positive");
    const double s0 = in.rho_S, i0 = in.rho_I;
    auto g = [&](double s) { return std::log(s / s0) + R0 * (s0 + i0 - s); };
    if (g(s0) == 0.0) return s0;
    double lo = std::numeric_limits<double>::min(), hi = s0;
    if (!(g(lo) < 0.0 && g(hi) > 0.0)) throw DomainError("sir_final_size: no sign change on (0, rho_S]");
    for (int it = 0; it < 2000; ++it) {
        const double mid = lo > 0.0 && hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    const double root = std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;
    if (!(std::abs(g(root)) <= 1e-12))
        throw NumericError("sir_final_size: residual above 1e-12");
    return root;
}

double sir_peak(const SirState& in, double R0)
{
    if (R0 * in.rho_S <= 1.0) return in.rho_I;
    return -(std::log(R0) + std::log(in.rho_S) + 1.0) / R0 + in.rho_S + in.rho_I;
}

}  // namespace kinsir
