#include "kinsir/popularity.hpp"

#include "kinsir/chang_cooper.hpp"
#include "kinsir/equilibria.hpp"
#include "kinsir/errors.hpp"
#include "kinsir/kernels.hpp"
#include "kinsir/quadrature.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kinsir {

void validate(const PopularityParams& p)
{
    if (!(p.mu > 0.0)) throw ConfigError("popularity.mu must be > 0");
    if (!(p.theta > 0.0)) throw ConfigError("popularity.theta must be > 0");
    if (!(p.zeta2 > 0.0)) throw ConfigError("popularity.zeta2 must be > 0");
    if (!(p.tau_p > 0.0)) throw ConfigError("popularity.tau_p must be > 0");
    if (!(p.w_hat >= -1.0 && p.w_hat <= 1.0)) throw ConfigError("popularity.w_hat must lie in [-1,1]");
}

void validate(const GridPolicy& g)
{
    if (!(g.eps_tail > 0.0 && g.eps_tail < 1e-3)) throw ConfigError("popularity.eps_tail must lie in (0, 1e-3)");
    if (!(g.L_min > 0.0)) throw ConfigError("popularity.L_min must be > 0");
    if (g.N_min < 4) throw ConfigError("popularity.N_min must be >= 4");
    if (g.N_max < g.N_min) throw ConfigError("popularity.N_max must be >= popularity.N_min");
    if (!(g.dv_target >= 0.0)) throw ConfigError("popularity.dv_target must be >= 0");
}

PopGrid::PopGrid(double L_, int N_) : L(L_), N(N_)
{
    if (!(L > 0.0) || N < 2) throw std::invalid_argument("PopGrid: need L > 0 and N >= 2");
    dv = L / N;
    v.resize(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) v[k] = k * dv;
    v.back() = L;
    wt = trapezoid_weights(N, dv);
}

PopGrid adapt_grid(const GridPolicy& policy, double mu, double zeta2, double theta, double F_max)
{
    validate(policy);
    if (!(F_max > 0.0)) throw DomainError("adapt_grid: F_max must be positive");
    const InverseGamma ig = InverseGamma::from_params(F_max, mu, zeta2, theta);
    const double v_peak = ig.mode();
    const double L_tail = ig.scale / boost::math::gamma_p_inv(ig.shape, policy.eps_tail);
    const double L = std::max(L_tail, policy.L_min * v_peak);
    const double dv_target = policy.dv_target > 0.0 ? policy.dv_target : v_peak / 10.0;
    const double n_req = std::ceil(L / dv_target);
    const int N = static_cast<int>(std::clamp(n_req, static_cast<double>(policy.N_min),
                                              static_cast<double>(policy.N_max)));
    if (L / N > 0.25 * v_peak)
        throw ConfigError("popularity grid infeasible: L = " + std::to_string(L) + " needs more than N_max = " +
                          std::to_string(policy.N_max) + " cells to resolve the peak at " +
                          std::to_string(v_peak) + "; raise N_max or eps_tail");
    return PopGrid(L, N);
}

PopularityField uniform_popularity(const PopGrid& grid, double v_max)
{
    if (!(v_max > 0.0)) throw DomainError("uniform_popularity: v_max must be positive");
    PopularityField out{grid, std::vector<double>(grid.size(), 0.0)};
    const double top = std::min(v_max, grid.L);
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (grid.v[k] <= top + 1e-12 * grid.L) out.h[k] = 1.0;
    double mass = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) mass += grid.wt[k] * out.h[k];
    for (double& x : out.h) x /= mass;
    return out;
}

PopularityField inverse_gamma_field(const PopGrid& grid, double F, const PopularityParams& p)
{
    const InverseGamma ig = InverseGamma::from_params(F, p.mu, p.zeta2, p.theta);
    PopularityField out{grid, std::vector<double>(grid.size())};
    for (std::size_t k = 0; k < grid.size(); ++k) out.h[k] = ig.pdf(grid.v[k]);
    return out;
}

double pop_drift(double v, double F, const PopularityParams& p)
{
    return -(p.mu + p.zeta2) * v + p.theta * F;
}

PopFaces pop_faces(const PopGrid& grid, double F, const PopularityParams& p)
{
    const std::size_t nf = grid.size() - 1;
    PopFaces out;
    out.drift.resize(nf);
    out.lambda.resize(nf);
    out.a.resize(nf);
    out.b.resize(nf);
    const double k = p.mu + p.zeta2;
    for (std::size_t j = 0; j < nf; ++j) {
        const double v0 = grid.v[j], v1 = grid.v[j + 1];
        // d_t h = d_v (C h + D d_v h) with C = (mu + zeta^2) v - theta F, D = zeta^2 v^2 / 2
        const double avgC = k * 0.5 * (v0 + v1) - p.theta * F;
        const double avgD = 0.5 * p.zeta2 * (v0 * v0 + v0 * v1 + v1 * v1) / 3.0;
        double lam;
        if (v0 <= 0.0)
            lam = F > 0.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        else
            lam = 2.0 * k / p.zeta2 * std::log(v1 / v0) + 2.0 * p.theta * F / p.zeta2 * (1.0 / v1 - 1.0 / v0);
        const FaceFlux ff = cc_face(avgC / p.tau_p, avgD / p.tau_p, lam, grid.dv);
        out.drift[j] = -avgC;
        out.lambda[j] = lam;
        out.a[j] = ff.a;
        out.b[j] = ff.b;
        out.max_abs_drift = std::max(out.max_abs_drift, std::abs(avgC));
        if (!std::isfinite(ff.a) || !std::isfinite(ff.b))
            throw NumericError("non-finite popularity coefficient at face " + std::to_string(j));
    }
    return out;
}

double pop_cfl_dt(const PopFaces& faces, const PopGrid& grid, const PopularityParams& p, double safety)
{
    return safety * grid.dv / (2.0 * std::max(faces.max_abs_drift / p.tau_p, 1e-30));
}

void pop_step(PopularityField& field, const PopFaces& faces, double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("pop_step: dt must be positive");
    const std::size_t n = field.grid.size();
    if (faces.a.size() + 1 != n) throw std::invalid_argument("pop_step: faces do not match the grid");
    const double lowest = kernels::solve_flux_rows(Backend::Serial, 1, n, faces.a.data(), faces.b.data(),
                                                   field.grid.dv, dt, field.h.data());
    if (lowest < -1e-14)
        throw NumericError("popularity step produced a negative density (" + std::to_string(lowest) + ")");
}

void pop_step(PopularityField& field, double F, double dt, const PopularityParams& p)
{
    pop_step(field, pop_faces(field.grid, F, p), dt);
}

void FSeries::push(double time, double value)
{
    if (!t.empty() && !(time > t.back())) throw std::invalid_argument("FSeries: stamps must increase");
    t.push_back(time);
    F.push_back(value);
}

double interpolate_F(const FSeries& series, double t)
{
    if (series.t.empty()) throw std::out_of_range("interpolate_F: empty series");
    if (t < series.t.front()) throw std::out_of_range("interpolate_F: time before the first stamp");
    const auto it = std::upper_bound(series.t.begin(), series.t.end(), t);
    return series.F[static_cast<std::size_t>(it - series.t.begin()) - 1];
}

std::size_t advance_popularity(PopularityField& field, const FSeries& series, double t0, double t1,
                               const PopularityParams& p, double safety)
{
    if (series.t.empty()) throw std::out_of_range("advance_popularity: empty series");
    std::size_t steps = 0;
    double t = t0;
    while (t < t1) {
        const auto it = std::upper_bound(series.t.begin(), series.t.end(), t);
        if (it == series.t.begin()) throw std::out_of_range("advance_popularity: time before the first stamp");
        const std::size_t n = static_cast<std::size_t>(it - series.t.begin()) - 1;
        const double seg_end = std::min(t1, n + 1 < series.t.size() ? series.t[n + 1] : t1);
        const double len = seg_end - t;
        if (len <= 0.0) break;
        const PopFaces faces = pop_faces(field.grid, series.F[n], p);
        const double dt_cfl = pop_cfl_dt(faces, field.grid, p, safety);
        const auto nsub = static_cast<std::size_t>(std::ceil(len / dt_cfl));
        const double dt = len / static_cast<double>(nsub);
        for (std::size_t s = 0; s < nsub; ++s) pop_step(field, faces, dt);
        steps += nsub;
        t = seg_end;
    }
    return steps;
}

PopMoments pop_moments(const PopularityField& field)
{
    PopMoments m;
    const auto& g = field.grid;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double c = g.wt[k] * field.h[k];
        m.mass += c;
        m.m_p += c * g.v[k];
        m.e_p += c * g.v[k] * g.v[k];
    }
    return m;
}

}  // namespace kinsir
