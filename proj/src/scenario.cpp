#include "kinsir/scenario.hpp"

#include "kinsir/errors.hpp"
#include "kinsir/output.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kinsir {

namespace {

// Fraction of the control volume of a node that lies inside [lo, hi].
double overlap_fraction(double node, double half, double dom_lo, double dom_hi, double lo, double hi)
{
    const double a = std::max(node - half, dom_lo), b = std::min(node + half, dom_hi);
    const double len = b - a;
    if (len <= 0.0) return 0.0;
    const double o = std::min(b, hi) - std::max(a, lo);
    return o > 0.0 ? o / len : 0.0;
}

double time_tol(double T) { return 1e-12 * std::max(1.0, T); }

std::vector<double> event_times(const ScenarioConfig& cfg, std::vector<double>& outputs)
{
    const double T = cfg.time.T, dt_out = cfg.output_interval();
    outputs.clear();
    const auto n = static_cast<long>(std::floor(T / dt_out + 1e-9));
    for (long k = 1; k <= n; ++k) outputs.push_back(std::min(T, static_cast<double>(k) * dt_out));
    if (outputs.empty() || outputs.back() < T - time_tol(T)) outputs.push_back(T);
    std::vector<double> ev = outputs;
    for (double t : cfg.output.snapshot_times)
        if (t > 0.0) ev.push_back(t);
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end(), [&](double a, double b) { return std::abs(a - b) <= time_tol(T); }),
             ev.end());
    return ev;
}

bool contains_time(const std::vector<double>& ts, double t, double tol)
{
    return std::any_of(ts.begin(), ts.end(), [&](double s) { return std::abs(s - t) <= tol; });
}

double source_F(const ScenarioConfig& cfg, const CompartmentField& state, const GraphonLattice& lattice)
{
    const auto& p = cfg.popularity.params;
    return functional_F(state, lattice, snap_to_node(state.grid, p.w_hat), p.flip);
}

MomentRecord record(double t, const ScenarioConfig& cfg, const CompartmentField& state,
                    const GraphonLattice& lattice, double F)
{
    MomentRecord r;
    r.t = t;
    r.mom = compute_moments(state, lattice);
    r.R_eff = cfg.epi.gamma > 0.0 ? effective_R(r.mom, cfg.epi) : 0.0;
    r.F = F;
    r.H = functional_H(state, lattice);
    return r;
}

std::size_t advance_and_record(RunArtifacts& art, PopularityField& field, const FSeries& series, double t0,
                               double t1)
{
    const auto& pc = art.config.popularity;
    const std::size_t steps = advance_popularity(field, series, t0, t1, pc.params, pc.safety);
    art.pop_records.push_back({t1, pop_moments(field), interpolate_F(series, t1)});
    art.pop_states.push_back(field);
    return steps;
}

}  // namespace

CompartmentField build_initial_condition(const ScenarioConfig& cfg, const PhaseGrid& grid)
{
    CompartmentField out(grid);
    const double targets[kCompartments] = {1.0 - cfg.rho_I_in - cfg.rho_R_in, cfg.rho_I_in, cfg.rho_R_in};
    for (int J = 0; J < kCompartments; ++J) {
        auto& f = out.f[J];
        bool any_rect = false, any_support = false;
        for (const auto& r : cfg.rects) {
            if (r.compartment != J) continue;
            any_rect = true;
            for (std::size_t i = 0; i < grid.nx1(); ++i) {
                const double fx = overlap_fraction(grid.x[i], 0.5 * grid.dx, 0.0, 1.0, r.x0, r.x1);
                if (fx == 0.0) continue;
                for (std::size_t j = 0; j < grid.nw1(); ++j) {
                    const double fw = overlap_fraction(grid.w[j], 0.5 * grid.dw, -1.0, 1.0, r.w0, r.w1);
                    if (fw == 0.0) continue;
                    any_support = true;
                    f[grid.idx(i, j)] += r.weight * fx * fw;
                }
            }
        }
        if (any_rect && !any_support)
            throw ConfigError(std::string("ic.rect: empty support for compartment ") + compartment_name(J));
        if (!any_rect) std::fill(f.begin(), f.end(), 1.0);
        const double mass = integrate_phase(grid, f);
        if (mass > 0.0)
            for (double& v : f) v *= targets[J] / mass;
    }
    return out;
}

std::vector<double> RunArtifacts::series(const std::string& metric) const
{
    std::vector<double> out;
    for (const auto& row : diagnostics)
        if (row.metric == metric) out.push_back(row.value);
    return out;
}

CompartmentField reference_equilibrium(const ScenarioConfig& cfg, const GraphonLattice& lattice,
                                       const CompartmentField& ic, const CompartmentField& state,
                                       std::string* kind)
{
    const bool closed = cfg.epi.alpha == 0.0 && cfg.model.kind == ModelVariant::Kind::Simplified &&
                        cfg.model.G.kind == OpinionKernel::Kind::Unity && cfg.epi.gamma > 0.0 &&
                        compute_moments(ic, lattice).rho[S] > 0.0;
    if (kind) *kind = closed ? "closed_form" : "empirical";
    if (closed) return global_sir_equilibrium(ic, cfg.epi, cfg.model, lattice);
    return equilibrium_from_state(state, cfg.model, lattice);
}

bool any_polarization(const ScenarioConfig& cfg, const GraphonLattice& lattice, const CompartmentField& state)
{
    const Moments mom = compute_moments(state, lattice);
    for (int J = 0; J < kCompartments; ++J) {
        const BetaEquilibrium eq = beta_equilibrium(J, mom, cfg.model, lattice);
        for (std::size_t i = 0; i < lattice.n; ++i)
            if (classify_regime(eq, i) == Regime::Polarization) return true;
    }
    return false;
}

RunArtifacts run_scenario(const ScenarioConfig& cfg, const RunOptions& opt)
{
    validate(cfg);
    RunArtifacts art;
    art.config = cfg;
    art.grid = PhaseGrid(cfg.nx, cfg.nw);
    art.lattice = build_lattice(cfg.graphon, art.grid.x);
    art.initial = build_initial_condition(cfg, art.grid);
    CompartmentField state = art.initial;

    std::vector<double> outputs;
    const std::vector<double> events = event_times(cfg, outputs);
    const double T = cfg.time.T, tol = time_tol(T);
    const bool all_snaps = cfg.output.snapshot_times.empty();

    double t = 0.0;
    double F = source_F(cfg, state, art.lattice);
    art.f_series.push(0.0, F);
    art.moments.push_back(record(0.0, cfg, state, art.lattice, F));
    if (opt.keep_states) art.states.push_back(state);
    if (all_snaps || contains_time(cfg.output.snapshot_times, 0.0, tol)) art.snapshots.emplace_back(0.0, state);

    std::optional<PopularityField> pop;
    if (cfg.popularity.enabled) {
        const auto& pc = cfg.popularity;
        double F_max = 0.0;  // int p f dx dw over all opinions bounds F for all times
        const auto rows = row_masses(art.grid, state.total());
        for (std::size_t i = 0; i < art.grid.nx1(); ++i) F_max += art.grid.wx[i] * art.lattice.p[i] * rows[i];
        art.pop_grid = adapt_grid(pc.policy, pc.params.mu, pc.params.zeta2, pc.params.theta, F_max);
        const double v0 = pc.v0_max > 0.0 ? pc.v0_max : 2.0 * pc.params.theta * (F > 0.0 ? F : F_max) / pc.params.mu;
        pop = uniform_popularity(art.pop_grid, v0);
        art.has_popularity = true;
        art.pop_records.push_back({0.0, pop_moments(*pop), F});
        art.pop_states.push_back(*pop);
    }
    const std::optional<PopularityField> pop_initial = pop;

    double t_pop = 0.0;
    for (double target : events) {
        while (t < target - tol) {
            try {
                const FpCoefficients coeffs = assemble_coefficients(state, cfg.model, art.lattice, opt.backend);
                double dt = cfl_dt(coeffs, art.grid, cfg.time.safety, cfg.time.dt_max);
                bool land = false;
                if (t + dt >= target - tol) {
                    dt = target - t;
                    land = true;
                }
                split_step(state, coeffs, cfg.epi, dt, opt.backend);
                t = land ? target : t + dt;
                ++art.steps;
                art.dt_min = art.steps == 1 ? dt : std::min(art.dt_min, dt);
                art.dt_max = std::max(art.dt_max, dt);
                F = source_F(cfg, state, art.lattice);
                art.f_series.push(t, F);
            } catch (const ConfigError& e) {
                throw;
            } catch (const std::exception& e) {
                std::ostringstream msg;
                msg << "step " << art.steps + 1 << " at t = " << t << ": " << e.what();
                throw NumericError(msg.str());
            }
        }
        if (contains_time(outputs, target, tol)) {
            art.moments.push_back(record(target, cfg, state, art.lattice, F));
            if (opt.keep_states) art.states.push_back(state);
            if (pop && !cfg.popularity.offline) {
                art.pop_steps += advance_and_record(art, *pop, art.f_series, t_pop, target);
                t_pop = target;
            }
        }
        if (all_snaps ? contains_time(outputs, target, tol) : contains_time(cfg.output.snapshot_times, target, tol))
            art.snapshots.emplace_back(target, state);
    }
    art.final_state = state;

    if (pop && cfg.popularity.offline) {
        // replay through the same text format as f_series.csv
        const FSeries replay = parse_f_series(format_f_series(art.f_series));
        PopularityField field = *pop_initial;
        double tp = 0.0;
        for (double target : outputs) {
            art.pop_steps += advance_and_record(art, field, replay, tp, target);
            tp = target;
        }
    }

    compute_diagnostics(art);
    return art;
}

void compute_diagnostics(RunArtifacts& art)
{
    const ScenarioConfig& cfg = art.config;
    art.diagnostics.clear();
    const PhaseGrid& g = art.grid;

    const bool need_target = cfg.wants("l1") || cfg.wants("entropy") || cfg.wants("hellinger");
    if (need_target && cfg.model.lambda > 0.0) {
        try {
            art.target = reference_equilibrium(cfg, art.lattice, art.initial, art.final_state, &art.target_kind);
            art.exclude_endpoints = any_polarization(cfg, art.lattice, art.final_state);
        } catch (const DomainError&) {
            art.target.reset();
        }
    }

    std::vector<double> h_inf;
    if (art.has_popularity && !art.pop_states.empty()) {
        const auto& pc = cfg.popularity.params;
        const double F_inf = art.f_series.F.back();
        if (F_inf > 0.0) {
            h_inf = inverse_gamma_field(art.pop_grid, F_inf, pc).h;
            const double mass_inf = weighted_l1(art.pop_grid.wt, h_inf, std::vector<double>(h_inf.size(), 0.0));
            const double mass = pop_moments(art.pop_states.front()).mass;
            for (double& v : h_inf) v *= mass / mass_inf;
        }
    }

    const Moments& m0 = art.moments.front().mom;
    const auto& H0 = art.moments.front().H;
    for (std::size_t k = 0; k < art.moments.size(); ++k) {
        const double t = art.moments[k].t;
        const Moments& mk = art.moments[k].mom;
        auto add = [&](const std::string& name, double v) { art.diagnostics.push_back({t, name, v}); };
        if (art.target && k < art.states.size()) {
            const auto& st = art.states[k];
            if (cfg.wants("l1")) {
                double worst = 0.0;
                for (int J = 0; J < kCompartments; ++J) {
                    const double d = l1_distance(g, st.f[J], art.target->f[J], art.exclude_endpoints);
                    worst = std::max(worst, d);
                    add(std::string("l1_") + compartment_name(J), d);
                }
                add("l1_max", worst);
            }
            if (cfg.wants("entropy")) add("relative_entropy_S", relative_entropy(g, st.f[S], art.target->f[S]));
            if (cfg.wants("hellinger")) add("hellinger_S", hellinger(g, st.f[S], art.target->f[S]));
        }
        if (cfg.wants("conservation")) {
            add("mass_drift", std::abs(mk.rho_total - m0.rho_total));
            add("m_drift", std::abs(mk.m_total - m0.m_total));
            add("m_ptilde_drift", std::abs(mk.m_ptilde - m0.m_ptilde));
            add("rho_ptilde_drift", std::abs(mk.rho_ptilde - m0.rho_ptilde));
            double hd = 0.0;
            for (std::size_t i = 0; i < H0.size(); ++i) hd = std::max(hd, std::abs(art.moments[k].H[i] - H0[i]));
            add("H_drift", hd);
        }
        if (!h_inf.empty() && k < art.pop_states.size()) {
            const auto& h = art.pop_states[k].h;
            add("popularity_l1", weighted_l1(art.pop_grid.wt, h, h_inf));
            add("F_gap", std::abs(art.pop_records[k].F - art.f_series.F.back()));
            if (cfg.wants("sobolev")) {
                for (double s : {0.6, 0.75, 0.9}) {
                    std::ostringstream name;
                    name << "sobolev_" << s;
                    add(name.str(), sobolev_neg_norm(h, h_inf, art.pop_grid.dv, s));
                }
            }
        }
    }

    if (cfg.wants("waves")) {
        std::vector<double> ts, rhoI, reff;
        for (const auto& r : art.moments) {
            ts.push_back(r.t);
            rhoI.push_back(r.mom.rho[I]);
            reff.push_back(r.R_eff);
        }
        art.waves = detect_waves(ts, rhoI);
        art.reff_crossings = count_crossings(reff, 1.0);
        for (const auto& w : art.waves) art.diagnostics.push_back({w.t, "wave_peak_rho_I", w.value});
        art.diagnostics.push_back({cfg.time.T, "R_eff_crossings", static_cast<double>(art.reff_crossings)});
    }
    std::stable_sort(art.diagnostics.begin(), art.diagnostics.end(),
                     [](const DiagnosticRow& a, const DiagnosticRow& b) { return a.t < b.t; });
}

}  // namespace kinsir
