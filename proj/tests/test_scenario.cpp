#include "doctest.h"

#include "kinsir/config.hpp"
#include "kinsir/errors.hpp"
#include "kinsir/output.hpp"
#include "kinsir/scenario.hpp"

#include <omp.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace kinsir;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("kinsir_tests_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> tree(const fs::path& root)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
    return out;
}

// Short Test-2 style run on a coarse grid.
ScenarioConfig small_test2()
{
    ScenarioConfig cfg = preset_config(Preset::Test2);
    cfg.nx = 10;
    cfg.nw = 50;
    cfg.time.T = 4.0;
    cfg.time.output_interval = 0.5;
    return cfg;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(KINSIR_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_SUITE("scenario")
{
    TEST_CASE("preset tables")
    {
        const ScenarioConfig t2 = preset_config(Preset::Test2);
        CHECK(t2.popularity.enabled);
        CHECK(t2.popularity.params.mu == 1.5);
        CHECK(t2.popularity.params.theta == 5.0);
        CHECK(t2.popularity.params.zeta2 == 1.0);
        CHECK(t2.popularity.params.tau_p == 1.0);
        CHECK(t2.popularity.params.w_hat == 0.3);
        CHECK(t2.epi.beta == 0.8);
        CHECK(t2.epi.gamma == 0.6);
        CHECK(t2.epi.alpha == 0.0);
        CHECK(t2.model.sigma2[S] == 0.01);
        CHECK(t2.model.lambda == 1.0);
        CHECK(t2.graphon.kind == GraphonKind::SpatialAdjacency);
        CHECK(t2.graphon.r == 0.2);
        CHECK(t2.graphon.chi == 0.5);
        CHECK(t2.graphon.a == 0.5);

        const ScenarioConfig t1 = preset_config(Preset::Test1FatTailed);
        CHECK(t1.model.sigma2[S] == 0.16);
        CHECK(t1.graphon.kind == GraphonKind::FatTailed);
        CHECK(t1.graphon.xi == 0.05);
        CHECK(t1.graphon.chi == 0.5);
        CHECK(t1.model.quad_order == 6);

        const ScenarioConfig t3 = preset_config(Preset::Test3);
        CHECK(t3.epi.beta == 0.8);
        CHECK(t3.epi.alpha == 1.0);
        CHECK(t3.epi.gamma == 0.4);
        CHECK(t3.model.sigma2 == std::array<double, 3>{0.05, 0.03, 0.01});
        CHECK(t3.model.G.kind == OpinionKernel::Kind::BoundedConfidence);
        CHECK(t3.model.G.delta == 0.5);
        CHECK(t3.graphon.xi == 0.25);
        CHECK(t3.graphon.chi == 2.0);
        CHECK(t3.time.T == 450.0);
        CHECK(t3.model.quad_order == 2);

        const ScenarioConfig a = preset_config(Preset::Test4Leaders), b = preset_config(Preset::Test4NoLeaders);
        CHECK(a.model.kind == ModelVariant::Kind::Full);
        CHECK(a.graphon.xi == 0.25);
        CHECK(a.graphon.chi == 2.0);
        CHECK(b.graphon.xi == 0.05);
        CHECK(b.graphon.chi == 0.5);
        CHECK(a.graphon.cutoff == 1e-3);
        CHECK(a.time.T == 35.0);
        ScenarioConfig b2 = b;
        b2.graphon = a.graphon;
        b2.preset = a.preset;
        CHECK(echo_config(a) == echo_config(b2));
    }

    TEST_CASE("parse_config: preset file, overrides and errors")
    {
        const ScenarioConfig p = parse_config("preset = Test2\n");
        CHECK(echo_config(p) == echo_config(preset_config(Preset::Test2)));
        const ScenarioConfig q = parse_config("# comment\npreset = Test2\nepi.beta = 0.5  # inline\n");
        CHECK(q.epi.beta == 0.5);
        CHECK(parse_config("preset = Test2\n", "Test3").preset == Preset::Test3);

        CHECK_THROWS_AS(parse_config("preset = Test2\nepi.alpha = -1\n"), ConfigError);
        try {
            parse_config("");
            FAIL("empty config accepted");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("missing preset or custom block") != std::string::npos);
        }
        try {
            parse_config("preset = Test2\nepi.bta = 1\n");
            FAIL("unknown key accepted");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("epi.bta") != std::string::npos);
        }
        CHECK_THROWS_AS(parse_config("preset = Test9\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("preset = Test2\ngrid.nw = 2.5\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("preset = Test2\npopularity.eps_tail = 0.5\n"), ConfigError);
        CHECK_THROWS_AS(load_config("/nonexistent/kinsir.cfg"), ConfigError);
    }

    TEST_CASE("echoed configuration parses back to itself")
    {
        for (Preset p : {Preset::Test1FatTailed, Preset::Test2, Preset::Test3, Preset::Test4Leaders}) {
            const std::string echo = echo_config(preset_config(p));
            CHECK(echo_config(parse_config(echo)) == echo);
        }
        const ScenarioConfig custom = parse_config("ic.rect = S 0 1 -1 1 1\nic.rect = I 0 0.5 0 1 2\n");
        CHECK(custom.preset == Preset::Custom);
        CHECK(custom.rects.size() == 2);
        CHECK(echo_config(parse_config(echo_config(custom))) == echo_config(custom));
    }

    TEST_CASE("initial conditions hit the target masses")
    {
        const ScenarioConfig cfg = preset_config(Preset::Test1FatTailed);
        const PhaseGrid g(cfg.nx, cfg.nw);
        const auto lat = build_lattice(cfg.graphon, g.x);
        const Moments m = compute_moments(build_initial_condition(cfg, g), lat);
        CHECK(std::abs(m.rho[S] - 0.998) <= 1e-12);
        CHECK(std::abs(m.rho[I] - 1e-3) <= 1e-12);
        CHECK(std::abs(m.rho[R] - 1e-3) <= 1e-12);
        CHECK(m.m[S] == doctest::Approx(-1.0 / 6.0).epsilon(1e-3));

        const ScenarioConfig sp = preset_config(Preset::Test1Spatial);
        const PhaseGrid gs(sp.nx, sp.nw);
        const Moments ms = compute_moments(build_initial_condition(sp, gs), build_lattice(sp.graphon, gs.x));
        CHECK(ms.m[S] == doctest::Approx(0.5).epsilon(1e-6));
    }

    TEST_CASE("initial rectangles of Tests 3 and 4 sit at the printed centres")
    {
        for (Preset p : {Preset::Test3, Preset::Test4Leaders}) {
            const ScenarioConfig cfg = preset_config(p);
            const PhaseGrid g(cfg.nx, cfg.nw);
            const auto f = build_initial_condition(cfg, g);
            for (const auto& r : cfg.rects) {
                double mass = 0.0, cx = 0.0, cw = 0.0;
                for (std::size_t i = 0; i < g.nx1(); ++i)
                    for (std::size_t j = 0; j < g.nw1(); ++j) {
                        if (g.x[i] < r.x0 - g.dx || g.x[i] > r.x1 + g.dx) continue;
                        if (g.w[j] < r.w0 - g.dw || g.w[j] > r.w1 + g.dw) continue;
                        const double c = g.wx[i] * g.ww[j] * f.at(S, i, j);
                        mass += c;
                        cx += c * g.x[i];
                        cw += c * g.w[j];
                    }
                CHECK(cx / mass == doctest::Approx(0.5 * (r.x0 + r.x1)).epsilon(1e-9));
                CHECK(cw / mass == doctest::Approx(0.5 * (r.w0 + r.w1)).epsilon(1e-9));
            }
            const double c1 = p == Preset::Test3 ? 0.6 : 0.7;
            CHECK(0.5 * (cfg.rects[1].w0 + cfg.rects[1].w1) == doctest::Approx(c1));
            CHECK(0.5 * (cfg.rects[0].x0 + cfg.rects[0].x1) == doctest::Approx(0.8));
            CHECK(0.5 * (cfg.rects[0].w0 + cfg.rects[0].w1) == doctest::Approx(-0.6));
            CHECK(0.5 * (cfg.rects[1].x0 + cfg.rects[1].x1) == doctest::Approx(0.2));
        }
    }

    TEST_CASE("initial condition edge cases")
    {
        ScenarioConfig cfg = parse_config("ic.rect = S 0 1 -1 1 0\n");
        const PhaseGrid g(10, 20);
        const auto f = build_initial_condition(cfg, g);
        for (double v : f.f[S]) CHECK(v == 0.0);
        cfg.rects = {{S, 0.52, 0.52, -1.0, 1.0, 1.0}};
        CHECK_THROWS_AS(build_initial_condition(cfg, g), ConfigError);
    }

    TEST_CASE("null dynamics keep every output constant")
    {
        ScenarioConfig cfg = preset_config(Preset::Test1Spatial);
        cfg.nx = 10;
        cfg.nw = 40;
        cfg.epi = EpiParams{0.0, 0.0, 0.0};
        cfg.model.lambda = 0.0;
        cfg.model.sigma2 = {0.0, 0.0, 0.0};
        cfg.time.T = 2.0;
        cfg.time.output_interval = 0.5;
        cfg.output.diagnostics.clear();
        const RunArtifacts art = run_scenario(cfg);
        for (const auto& s : art.states)
            for (int J = 0; J < kCompartments; ++J) CHECK(s.f[J] == art.initial.f[J]);
        CHECK(art.dt_max == doctest::Approx(0.1));
    }

    TEST_CASE("run bookkeeping: landing on T, snapshots and manifest")
    {
        ScenarioConfig cfg = small_test2();
        cfg.output.snapshot_times = {0.0, 1.25, 4.0};
        const RunArtifacts art = run_scenario(cfg);
        CHECK(art.moments.back().t == 4.0);
        CHECK(art.moments.size() == 9);
        REQUIRE(art.snapshots.size() == 3);
        CHECK(art.snapshots[1].first == 1.25);
        for (int J = 0; J < kCompartments; ++J) CHECK(art.snapshots[0].second.f[J] == art.initial.f[J]);
        CHECK(art.f_series.t.size() == art.steps + 1);

        const fs::path out = scratch("bookkeeping");
        emit_csv(art, out.string());
        const std::string manifest = slurp(out / "manifest.txt");
        CHECK(manifest.find("steps = " + std::to_string(art.steps)) != std::string::npos);
        CHECK(manifest.find("t_final = 4") != std::string::npos);
        CHECK(manifest.find("popularity.mu = 1.5") != std::string::npos);
        const auto snap = read_snapshot((out / "snapshots" / (time_stamp(0.0) + ".csv")).string());
        for (int J = 0; J < kCompartments; ++J) CHECK(snap.f[J] == art.initial.f[J]);
        CHECK(fs::exists(out / "diagnostics.csv"));
        CHECK(fs::exists(out / "popularity.csv"));

        const FSeries back = read_f_series((out / "f_series.csv").string());
        CHECK(back.t == art.f_series.t);
        CHECK(back.F == art.f_series.F);
    }

    TEST_CASE("disabled diagnostics leave no diagnostics file")
    {
        ScenarioConfig cfg = small_test2();
        cfg.popularity.enabled = false;
        cfg.output.diagnostics.clear();
        const RunArtifacts art = run_scenario(cfg);
        CHECK(art.diagnostics.empty());
        const fs::path out = scratch("nodiag");
        emit_csv(art, out.string());
        CHECK_FALSE(fs::exists(out / "diagnostics.csv"));
        CHECK(fs::exists(out / "moments.csv"));
    }

    TEST_CASE("identical runs give byte-identical files for any worker count")
    {
        const int threads = omp_get_max_threads();
        const ScenarioConfig cfg = small_test2();
        const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
        omp_set_num_threads(1);
        emit_csv(run_scenario(cfg), a.string());
        emit_csv(run_scenario(cfg), b.string());
        omp_set_num_threads(4);
        emit_csv(run_scenario(cfg, RunOptions{Backend::OpenMP, true}), c.string());
        omp_set_num_threads(threads);
        const auto ta = tree(a), tb = tree(b), tc = tree(c);
        CHECK(ta.size() > 10);
        CHECK(ta == tb);
        CHECK(ta == tc);
        const fs::path d = scratch("det_serial");
        emit_csv(run_scenario(cfg, RunOptions{Backend::Serial, true}), d.string());
        CHECK(tree(d) == ta);
    }

    TEST_CASE("online and offline popularity agree")
    {
        ScenarioConfig cfg = small_test2();
        const RunArtifacts on = run_scenario(cfg);
        cfg.popularity.offline = true;
        const RunArtifacts off = run_scenario(cfg);
        REQUIRE(on.pop_states.size() == off.pop_states.size());
        for (std::size_t k = 0; k < on.pop_states.size(); ++k) CHECK(on.pop_states[k].h == off.pop_states[k].h);
        CHECK(on.pop_steps == off.pop_steps);
    }

    TEST_CASE("popularity source stays below its bound")
    {
        const RunArtifacts art = run_scenario(small_test2());
        const auto rows = row_masses(art.grid, art.initial.total());
        double bound = 0.0;
        for (std::size_t i = 0; i < art.grid.nx1(); ++i) bound += art.grid.wx[i] * art.lattice.p[i] * rows[i];
        for (double F : art.f_series.F) CHECK(F <= bound + 1e-8);
    }

    TEST_CASE("halving the output cadence moves m_p by at most first order")
    {
        ScenarioConfig cfg = small_test2();
        const RunArtifacts a = run_scenario(cfg);
        cfg.time.output_interval = 0.25;
        const RunArtifacts b = run_scenario(cfg);
        const double ma = a.pop_records.back().mom.m_p, mb = b.pop_records.back().mom.m_p;
        MESSAGE("m_p(T): " << ma << " vs " << mb);
        CHECK(std::abs(ma - mb) <= 0.25 * std::abs(ma));
    }

    TEST_CASE("command line exit codes")
    {
        const fs::path dir = scratch("cli");
        {
            std::ofstream(dir / "ok.cfg") << "preset = Test1Spatial\ngrid.nx = 4\ngrid.nw = 20\ntime.T = 0.5\n";
            std::ofstream(dir / "bad.cfg") << "preset = Test1Spatial\nepi.alpha = -1\n";
            std::ofstream(dir / "empty.cfg") << "";
            std::ofstream(dir / "other_grid.cfg") << "preset = Test1Spatial\ngrid.nx = 4\ngrid.nw = 40\n";
            std::ofstream(dir / "blowup.cfg")
                << "preset = Test1Spatial\ngrid.nx = 4\ngrid.nw = 20\ntime.T = 1\nepi.gamma = 1000\n";
        }
        const std::string out = " --out " + (dir / "out").string();
        CHECK(run_cli("run " + (dir / "ok.cfg").string() + out) == 0);
        CHECK(fs::exists(dir / "out" / "manifest.txt"));
        CHECK(run_cli("run " + (dir / "bad.cfg").string() + out) == 2);
        CHECK(run_cli("run " + (dir / "empty.cfg").string() + out) == 2);
        CHECK(run_cli("run " + (dir / "blowup.cfg").string() + out) == 3);
        CHECK(run_cli("run") == 2);
        CHECK(run_cli("equilibrium " + (dir / "ok.cfg").string() + " --out " + (dir / "eq").string()) == 0);
        CHECK(fs::exists(dir / "eq" / "equilibrium.csv"));
        const std::string snap = (dir / "out" / "snapshots" / (time_stamp(0.5) + ".csv")).string();
        CHECK(run_cli("diagnose " + (dir / "ok.cfg").string() + " --against " + snap) == 0);
        CHECK(run_cli("diagnose " + (dir / "ok.cfg").string() + " --against " + snap + " --preset Test1FatTailed") == 0);
        CHECK(run_cli("diagnose " + (dir / "other_grid.cfg").string() + " --against " + snap) == 2);
        CHECK(run_cli("run " + (dir / "ok.cfg").string() + out + " --threads 2 --preset Test1Spatial") == 0);
    }
}
