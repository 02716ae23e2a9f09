#include "kinsir/config.hpp"
#include "kinsir/errors.hpp"
#include "kinsir/output.hpp"
#include "kinsir/scenario.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace kinsir;

namespace {

int run_cmd(const ScenarioConfig& cfg, const std::string& out)
{
    const RunArtifacts art = run_scenario(cfg);
    emit_csv(art, out);
    const auto& last = art.moments.back();
    std::cout << "steps " << art.steps << ", t = " << last.t << ", rho = (" << last.mom.rho[S] << ", "
              << last.mom.rho[I] << ", " << last.mom.rho[R] << ")\n";
    if (!art.waves.empty() || art.config.wants("waves"))
        std::cout << "waves " << art.waves.size() << ", R_eff crossings " << art.reff_crossings << '\n';
    std::cout << "written to " << out << '\n';
    return 0;
}

int equilibrium_cmd(const ScenarioConfig& cfg, const std::string& out)
{
    const PhaseGrid grid(cfg.nx, cfg.nw);
    const GraphonLattice lat = build_lattice(cfg.graphon, grid.x);
    const CompartmentField ic = build_initial_condition(cfg, grid);
    std::string kind;
    const CompartmentField eq = reference_equilibrium(cfg, lat, ic, ic, &kind);
    std::filesystem::create_directories(out);
    write_snapshot((std::filesystem::path(out) / "equilibrium.csv").string(), eq);
    const Moments mom = compute_moments(eq, lat);
    std::cout << "equilibrium (" << (kind == "closed_form" ? "closed form" : "local, matched to the initial datum")
              << "): rho = (" << mom.rho[S] << ", " << mom.rho[I] << ", " << mom.rho[R] << ")\n";
    for (int J = 0; J < kCompartments; ++J) {
        const BetaEquilibrium be = beta_equilibrium(J, compute_moments(ic, lat), cfg.model, lat);
        std::size_t pol = 0;
        for (std::size_t i = 0; i < lat.n; ++i) pol += classify_regime(be, i) == Regime::Polarization;
        std::cout << "  " << compartment_name(J) << ": polarized at " << pol << " of " << lat.n << " x nodes\n";
    }
    if (cfg.popularity.enabled) {
        const auto& p = cfg.popularity.params;
        const double F = functional_F(eq, lat, snap_to_node(grid, p.w_hat), p.flip);
        const InverseGamma ig = InverseGamma::from_params(F, p.mu, p.zeta2, p.theta);
        std::ofstream h(std::filesystem::path(out) / "popularity_equilibrium.txt");
        h << "F = " << fmt17(F) << "\nshape = " << fmt17(ig.shape) << "\nscale = " << fmt17(ig.scale)
          << "\nmean = " << fmt17(ig.mean()) << "\nmode = " << fmt17(ig.mode()) << "\nenergy = " << fmt17(ig.energy())
          << '\n';
        std::cout << "popularity equilibrium: F = " << F << ", mean = " << ig.mean() << '\n';
    }
    std::cout << "written to " << out << '\n';
    return 0;
}

int diagnose_cmd(const ScenarioConfig& cfg, const std::string& against)
{
    const CompartmentField snap = read_snapshot(against);
    if (snap.grid.nx != cfg.nx || snap.grid.nw != cfg.nw)
        throw ConfigError("--against: snapshot grid does not match grid.nx / grid.nw");
    const GraphonLattice lat = build_lattice(cfg.graphon, snap.grid.x);
    const CompartmentField ic = build_initial_condition(cfg, snap.grid);
    std::string kind;
    const CompartmentField eq = reference_equilibrium(cfg, lat, ic, snap, &kind);
    const bool excl = any_polarization(cfg, lat, snap);
    std::cout << "metric,value\n";
    for (int J = 0; J < kCompartments; ++J)
        std::cout << "l1_" << compartment_name(J) << ',' << fmt17(l1_distance(snap.grid, snap.f[J], eq.f[J], excl))
                  << '\n';
    std::cout << "relative_entropy_S," << fmt17(relative_entropy(snap.grid, snap.f[S], eq.f[S])) << '\n';
    std::cout << "hellinger_S," << fmt17(hellinger(snap.grid, snap.f[S], eq.f[S])) << '\n';
    std::cout << "equilibrium," << kind << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kinetic SIR model with opinion dynamics on graphons"};
    app.require_subcommand(1);
    std::string config_path, out_dir, preset, against;
    int threads = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "Configuration file (key = value)")->required();
        sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
        sub->add_option("--threads", threads, "Worker threads (0 keeps the OpenMP default)")->check(CLI::NonNegativeNumber);
        sub->add_option("--preset", preset, "Preset name (overrides the preset key)");
    };
    auto* run = app.add_subcommand("run", "Simulate and write CSV output");
    add_common(run);
    auto* eq = app.add_subcommand("equilibrium", "Write the analytic equilibrium only");
    add_common(eq);
    auto* diag = app.add_subcommand("diagnose", "Distances of a snapshot to the equilibrium");
    add_common(diag);
    diag->add_option("--against", against, "Snapshot CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (threads > 0) omp_set_num_threads(threads);
        ScenarioConfig cfg = load_config(config_path, preset);
        if (!out_dir.empty()) cfg.output.dir = out_dir;
        if (run->parsed()) return run_cmd(cfg, cfg.output.dir);
        if (eq->parsed()) return equilibrium_cmd(cfg, cfg.output.dir);
        return diagnose_cmd(cfg, against);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    }
}
