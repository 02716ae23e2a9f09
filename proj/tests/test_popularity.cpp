#include "doctest.h"

#include "kinsir/config.hpp"
#include "kinsir/equilibria.hpp"
#include "kinsir/errors.hpp"
#include "kinsir/popularity.hpp"
#include "kinsir/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

using namespace kinsir;

namespace {

double test2_F_max()
{
    const ScenarioConfig cfg = preset_config(Preset::Test2);
    const PhaseGrid g(cfg.nx, cfg.nw);
    const auto lat = build_lattice(cfg.graphon, g.x);
    const auto ic = build_initial_condition(cfg, g);
    const auto rows = row_masses(g, ic.total());
    double F = 0.0;
    for (std::size_t i = 0; i < g.nx1(); ++i) F += g.wx[i] * lat.p[i] * rows[i];
    return F;
}

double mass_beyond(const PopularityField& f, double v0)
{
    double m = 0.0;
    for (std::size_t k = 0; k < f.grid.size(); ++k)
        if (f.grid.v[k] > v0) m += f.grid.wt[k] * f.h[k];
    return m;
}

}  // namespace

TEST_SUITE("popularity")
{
    TEST_CASE("adapt_grid meets the tail tolerance and the peak multiple")
    {
        const double F = test2_F_max();
        CHECK(F > 0.0);
        const GridPolicy policy{1e-12, 8.0, 50, 100000, 0.0};
        const PopGrid g = adapt_grid(policy, 1.5, 1.0, 5.0, F);
        const InverseGamma ig = InverseGamma::from_params(F, 1.5, 1.0, 5.0);
        CHECK(g.L >= 8.0 * ig.mode());
        CHECK(ig.tail_mass(g.L) < 1e-12);
        CHECK(g.dv <= ig.mode() / 10.0 * (1.0 + 1e-12));
        // the same tolerance cannot be resolved with 801 cells
        CHECK_THROWS_AS(adapt_grid(GridPolicy{1e-12, 8.0, 50, 801, 0.0}, 1.5, 1.0, 5.0, F), ConfigError);
        CHECK_NOTHROW(adapt_grid(GridPolicy{1e-6, 8.0, 101, 801, 0.0}, 1.5, 1.0, 5.0, F));
    }

    TEST_CASE("adapt_grid scaling")
    {
        const GridPolicy a{1e-6, 8.0, 10, 100000, 0.01};
        GridPolicy b = a;
        b.dv_target = 0.02;
        const PopGrid ga = adapt_grid(a, 1.5, 1.0, 1.0, 1.0), gb = adapt_grid(b, 1.5, 1.0, 1.0, 1.0);
        CHECK(ga.L == gb.L);
        CHECK(std::abs(ga.N - 2 * gb.N) <= 1);
        double prev = 0.0;
        for (double F : {0.1, 0.5, 1.0, 2.0, 8.0}) {
            const PopGrid g = adapt_grid(GridPolicy{1e-6, 8.0, 10, 100000, 0.0}, 1.5, 1.0, 1.0, F);
            CHECK(g.L >= prev);
            prev = g.L;
        }
        const GridPolicy clamp{1e-6, 8.0, 300, 400, 0.5};
        CHECK(adapt_grid(clamp, 1.5, 1.0, 1.0, 1.0).N == 300);
        CHECK_THROWS_AS(adapt_grid(a, 1.5, 1.0, 1.0, 0.0), DomainError);
    }

    TEST_CASE("pop_drift examples")
    {
        PopularityParams p{1.5, 5.0, 1.0, 1.0, 0.3, false};
        CHECK(pop_drift(5.0 * 0.4 / 2.5, 0.4, p) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
        CHECK(pop_drift(1.0, 0.0, p) == -2.5);
        CHECK(pop_drift(0.0, 0.7, p) == doctest::Approx(3.5));
    }

    TEST_CASE("inverse gamma is a discrete fixed point of pop_step")
    {
        const PopularityParams p{1.5, 5.0, 1.0, 1.0, 0.3, false};
        const double F = 0.2;
        const PopGrid g = adapt_grid(GridPolicy{1e-6, 8.0, 101, 801, 0.0}, p.mu, p.zeta2, p.theta, F);
        PopularityField h = inverse_gamma_field(g, F, p);
        const PopFaces faces = pop_faces(g, F, p);
        const double dt = pop_cfl_dt(faces, g, p, 0.95);
        for (int k = 0; k < 100; ++k) {
            const PopularityField before = h;
            pop_step(h, faces, dt);
            double res = 0.0;
            for (std::size_t q = 0; q < g.size(); ++q) res += g.wt[q] * std::abs(h.h[q] - before.h[q]);
            REQUIRE(res <= 1e-6);
        }
    }

    TEST_CASE("zero source concentrates mass near the origin")
    {
        const PopularityParams p{1.5, 5.0, 1.0, 1.0, 0.3, false};
        const PopGrid g(10.0, 400);
        PopularityField h = uniform_popularity(g, 4.0);
        const PopFaces faces = pop_faces(g, 0.0, p);
        const double dt = pop_cfl_dt(faces, g, p, 0.95);
        double prev = mass_beyond(h, 1.0);
        double mass0 = pop_moments(h).mass;
        for (int k = 0; k < 200; ++k) {
            pop_step(h, faces, dt);
            const double m = mass_beyond(h, 1.0);
            CHECK(m < prev);
            prev = m;
        }
        CHECK(pop_moments(h).mass == doctest::Approx(mass0).epsilon(1e-13));
    }

    TEST_CASE("one step of m_p follows the backward Euler moment update")
    {
        const PopularityParams p{1.5, 5.0, 1.0, 1.0, 0.3, false};
        const double F = 0.2;
        const PopGrid g = adapt_grid(GridPolicy{1e-6, 8.0, 101, 801, 0.0}, p.mu, p.zeta2, p.theta, F);
        PopularityField h = uniform_popularity(g, 2.0 * p.theta * F / p.mu);
        const double m0 = pop_moments(h).m_p;
        const PopFaces faces = pop_faces(g, F, p);
        const double dt = pop_cfl_dt(faces, g, p, 0.95);
        pop_step(h, faces, dt);
        const double be = (m0 + dt * p.theta * F / p.tau_p) / (1.0 + dt * p.mu / p.tau_p);
        // local error: O(dt^2) in time plus O(dt dv) from the discrete flux
        MESSAGE("dt = " << dt << ", dv = " << g.dv << ", |m_p - BE| = " << std::abs(pop_moments(h).m_p - be));
        CHECK(std::abs(pop_moments(h).m_p - be) <= dt * dt + dt * g.dv);
    }

    TEST_CASE("mass and nonnegativity over many steps")
    {
        const PopularityParams p{1.5, 5.0, 1.0, 1.0, 0.3, false};
        const PopGrid g(20.0, 300);
        PopularityField h = uniform_popularity(g, 3.0);
        const double m0 = pop_moments(h).mass;
        for (int k = 0; k < 2000; ++k) {
            const double F = 0.5 + 0.4 * std::sin(0.01 * k);
            const PopFaces faces = pop_faces(g, F, p);
            pop_step(h, faces, pop_cfl_dt(faces, g, p, 0.95));
            REQUIRE(std::abs(pop_moments(h).mass - m0) <= 1e-13 * m0);
            REQUIRE(*std::min_element(h.h.begin(), h.h.end()) >= -1e-14);
        }
    }

    TEST_CASE("interpolate_F is left-constant and extends the last value")
    {
        FSeries s;
        s.push(0.0, 1.0);
        s.push(1.0, 2.0);
        CHECK(interpolate_F(s, 0.5) == 1.0);
        CHECK(interpolate_F(s, 1.0) == 2.0);
        CHECK(interpolate_F(s, 5.0) == 2.0);
        CHECK(interpolate_F(s, 0.0) == 1.0);
        CHECK_THROWS_AS(interpolate_F(s, -0.1), std::out_of_range);
        CHECK_THROWS_AS(s.push(0.5, 3.0), std::invalid_argument);
        CHECK_THROWS_AS(interpolate_F(FSeries{}, 0.0), std::out_of_range);
    }

    TEST_CASE("advance_popularity splits intervals into CFL substeps")
    {
        const PopularityParams p{1.5, 5.0, 1.0, 1.0, 0.3, false};
        const PopGrid g(10.0, 200);
        FSeries s;
        s.push(0.0, 0.3);
        s.push(0.7, 0.5);
        PopularityField a = uniform_popularity(g, 2.0), b = a;
        const std::size_t n = advance_popularity(a, s, 0.0, 1.0, p, 0.95);
        // same result as stepping the two segments by hand
        std::size_t m = 0;
        for (auto [t0, t1, F] : {std::tuple{0.0, 0.7, 0.3}, std::tuple{0.7, 1.0, 0.5}}) {
            const PopFaces faces = pop_faces(g, F, p);
            const auto k = static_cast<std::size_t>(std::ceil((t1 - t0) / pop_cfl_dt(faces, g, p, 0.95)));
            for (std::size_t q = 0; q < k; ++q) pop_step(b, faces, (t1 - t0) / static_cast<double>(k));
            m += k;
        }
        CHECK(n == m);
        CHECK(a.h == b.h);
    }

    TEST_CASE("moments of the sampled inverse gamma")
    {
        const PopularityParams p{1.5, 1.0, 1.0, 1.0, 0.3, false};
        const PopGrid g = adapt_grid(GridPolicy{1e-12, 8.0, 50, 100000, 0.0}, p.mu, p.zeta2, p.theta, 1.0);
        const PopMoments m = pop_moments(inverse_gamma_field(g, 1.0, p));
        CHECK(std::abs(m.mass - 1.0) <= 1e-6);
        CHECK(std::abs(m.m_p - 2.0 / 3.0) <= 1e-3);
        CHECK(std::abs(m.e_p - 2.0 / 3.0) <= 1e-2);

        PopularityField spike{PopGrid(10.0, 100), std::vector<double>(101, 0.0)};
        spike.h[0] = 2.0 / spike.grid.dv;
        CHECK(pop_moments(spike).m_p <= spike.grid.dv);
    }

    TEST_CASE("energy grows with the truncation when zeta^2 >= 2 mu")
    {
        const PopularityParams p{0.1, 1.0, 1.0, 1.0, 0.3, false};
        const double e1 = pop_moments(inverse_gamma_field(PopGrid(1000.0, 20000), 1.0, p)).e_p;
        const double e2 = pop_moments(inverse_gamma_field(PopGrid(2000.0, 40000), 1.0, p)).e_p;
        CHECK(e2 >= 1.5 * e1);
        const PopularityParams q{1.5, 1.0, 1.0, 1.0, 0.3, false};
        const double f1 = pop_moments(inverse_gamma_field(PopGrid(1000.0, 20000), 1.0, q)).e_p;
        const double f2 = pop_moments(inverse_gamma_field(PopGrid(2000.0, 40000), 1.0, q)).e_p;
        CHECK(f2 == doctest::Approx(f1).epsilon(1e-6));
    }

    TEST_CASE("validate rejects bad parameters")
    {
        CHECK_THROWS_AS(validate(PopularityParams{0.0, 5.0, 1.0, 1.0, 0.3, false}), ConfigError);
        CHECK_THROWS_AS(validate(PopularityParams{1.5, 5.0, 1.0, 1.0, 1.3, false}), ConfigError);
        CHECK_THROWS_AS(validate(GridPolicy{1e-2, 8.0, 50, 801, 0.0}), ConfigError);
        CHECK_THROWS_AS(validate(GridPolicy{1e-6, 8.0, 900, 801, 0.0}), ConfigError);
    }
}
