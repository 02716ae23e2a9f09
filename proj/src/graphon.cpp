#include "kinsir/graphon.hpp"

#include "kinsir/errors.hpp"
#include "kinsir/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace kinsir {

namespace {

// Tolerance on the adjacency window so that node pairs at distance exactly r
// are not lost to rounding of the node coordinates.
constexpr double kWindowTol = 1e-12;

void check_position(double x, const char* name)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument(std::string("position ") + name + " outside [0,1]");
}

double finite_or_throw(double v, const char* what)
{
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " is not finite");
    return v;
}

}  // namespace

std::string to_string(GraphonKind kind)
{
    switch (kind) {
    case GraphonKind::FatTailed: return "fat_tailed";
    case GraphonKind::SpatialAdjacency: return "spatial";
    case GraphonKind::Constant: return "constant";
    }
    return "unknown";
}

GraphonKind graphon_kind_from_string(const std::string& name)
{
    if (name == "fat_tailed") return GraphonKind::FatTailed;
    if (name == "spatial") return GraphonKind::SpatialAdjacency;
    if (name == "constant") return GraphonKind::Constant;
    throw ConfigError("graphon.kind: unknown graphon '" + name + "'");
}

void validate(const GraphonSpec& spec)
{
    if (spec.kind == GraphonKind::FatTailed) {
        if (!(spec.xi > 0.0 && spec.xi < 1.0)) throw ConfigError("graphon.xi must lie in (0,1)");
        if (!(spec.cutoff > 0.0)) throw ConfigError("graphon.cutoff must be > 0 for fat_tailed");
    }
    if (spec.kind == GraphonKind::SpatialAdjacency && !(spec.r > 0.0 && spec.r < 0.25))
        throw ConfigError("graphon.r must lie in (0,0.25)");
    if (!(spec.chi > 0.0)) throw ConfigError("graphon.chi must be > 0");
    if (!(spec.cutoff >= 0.0)) throw ConfigError("graphon.cutoff must be >= 0");
    if (!(spec.a > 0.0)) throw ConfigError("graphon.a must be > 0");
}

double graphon_eval(const GraphonSpec& spec, double x, double y)
{
    check_position(x, "x");
    check_position(y, "y");
    switch (spec.kind) {
    case GraphonKind::FatTailed:
        return finite_or_throw(std::pow((x + spec.cutoff) * (y + spec.cutoff), -spec.xi), "graphon");
    case GraphonKind::SpatialAdjacency:
        return std::abs(x - y) <= spec.r + kWindowTol ? 1.0 : 0.0;
    case GraphonKind::Constant:
        return 1.0;
    }
    return 0.0;
}

double in_degree(const GraphonSpec& spec, double x)
{
    check_position(x, "x");
    switch (spec.kind) {
    case GraphonKind::FatTailed: {
        const double c = spec.cutoff, xi = spec.xi;
        const double tail = (std::pow(1.0 + c, 1.0 - xi) - std::pow(c, 1.0 - xi)) / (1.0 - xi);
        return finite_or_throw(std::pow(x + c, -xi) * tail, "in-degree");
    }
    case GraphonKind::SpatialAdjacency:
        return std::min(1.0, x + spec.r) - std::max(0.0, x - spec.r);
    case GraphonKind::Constant:
        return 1.0;
    }
    return 0.0;
}

double interaction_eval(const GraphonSpec& spec, double x, double y)
{
    const double dx = in_degree(spec, x);
    const double dy = in_degree(spec, y);
    if (!(dy > 0.0)) throw DomainError("interaction: in-degree of y vanishes");
    return finite_or_throw(std::pow(1.0 + dx / dy, -spec.chi), "interaction");
}

double spatial_interaction_closed(double r, double chi, double x, double y)
{
    const bool xl = x < r, xr = x > 1.0 - r;
    const bool yl = y < r, yr = y > 1.0 - r;
    if (xl && yl) return std::pow(1.0 + (x + r) / (y + r), -chi);
    if (xl && yr) return std::pow(1.0 + (x + r) / (1.0 - y + r), -chi);
    if (xl) return std::pow(1.0 + (x + r) / (2.0 * r), -chi);
    if (xr && yl) return std::pow(1.0 + (1.0 - x + r) / (y + r), -chi);
    if (xr && yr) return std::pow(1.0 + (1.0 - x + r) / (1.0 - y + r), -chi);
    if (xr) return std::pow(1.0 + (1.0 - x + r) / (2.0 * r), -chi);
    if (yl) return std::pow(1.0 + 2.0 * r / (y + r), -chi);
    if (yr) return std::pow(1.0 + 2.0 * r / (1.0 - y + r), -chi);
    return std::pow(2.0, -chi);
}

double spatial_propensity_closed(double r, double chi, double x)
{
    check_position(x, "x");
    if (x >= 2.0 * r && x <= 1.0 - 2.0 * r) return r * std::pow(2.0, 1.0 - chi);
    if (x < r) {
        auto g = [&](double y) { return std::pow(1.0 + (x + r) / (y + r), -chi); };
        return x * std::pow(1.0 + (x + r) / (2.0 * r), -chi) + integrate_adaptive(g, 0.0, r);
    }
    if (x < 2.0 * r) {
        auto g = [&](double y) { return std::pow(1.0 + 2.0 * r / (y + r), -chi); };
        return x * std::pow(2.0, -chi) + integrate_adaptive(g, x - r, r);
    }
    if (x <= 1.0 - r) {
        auto g = [&](double y) { return std::pow(1.0 + 2.0 * r / (1.0 - y + r), -chi); };
        return (1.0 - x) * std::pow(2.0, -chi) + integrate_adaptive(g, 1.0 - r, x + r);
    }
    auto g = [&](double y) { return std::pow(1.0 + (1.0 - x + r) / (1.0 - y + r), -chi); };
    return (1.0 - x) * std::pow(1.0 + (1.0 - x + r) / (2.0 * r), -chi) +
           integrate_adaptive(g, 1.0 - r, 1.0);
}

double propensity_quadrature(const GraphonSpec& spec, double x)
{
    check_position(x, "x");
    switch (spec.kind) {
    case GraphonKind::FatTailed: {
        // z + c = e^u keeps the algebraic singularity at z = -c smooth in u
        const double c = spec.cutoff;
        if (!(c > 0.0)) throw DomainError("fat-tailed propensity requires a positive cutoff");
        auto g = [&](double u) {
            const double z = std::clamp(std::exp(u) - c, 0.0, 1.0);
            return graphon_eval(spec, x, z) * interaction_eval(spec, x, z) * std::exp(u);
        };
        const double lo = std::log(c), hi = std::log(1.0 + c);
        const double mid = std::clamp(std::log(x + c), lo, hi);
        return finite_or_throw(integrate_adaptive(g, lo, mid) + integrate_adaptive(g, mid, hi),
                               "propensity");
    }
    case GraphonKind::SpatialAdjacency: {
        const double lo = std::max(0.0, x - spec.r), hi = std::min(1.0, x + spec.r);
        auto g = [&](double z) { return interaction_eval(spec, x, z); };
        std::vector<double> cuts = {lo};
        for (double b : {spec.r, 1.0 - spec.r})
            if (b > lo && b < hi) cuts.push_back(b);
        cuts.push_back(hi);
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) sum += integrate_adaptive(g, cuts[k], cuts[k + 1]);
        return sum;
    }
    case GraphonKind::Constant: {
        auto g = [&](double z) { return interaction_eval(spec, x, z); };
        return integrate_adaptive(g, 0.0, 1.0);
    }
    }
    return 0.0;
}

double propensity(const GraphonSpec& spec, double x)
{
    switch (spec.kind) {
    case GraphonKind::SpatialAdjacency:
        return spatial_propensity_closed(spec.r, spec.chi, x);
    case GraphonKind::Constant:
        check_position(x, "x");
        return std::pow(2.0, -spec.chi);
    case GraphonKind::FatTailed: {
        check_position(x, "x");
        const double c = spec.cutoff, xi = spec.xi, chi = spec.chi;
        if (!(c > 0.0)) throw DomainError("fat-tailed propensity requires a positive cutoff");
        const double xc = x + c;
        // B*P in s = z + c:  xc^{-xi} s^{-xi} (1 + (s/xc)^xi)^{-chi}, integrated in u = log s
        auto g = [&](double u) {
            const double s = std::exp(u);
            return std::pow(xc, -xi) * std::pow(s, 1.0 - xi) * std::pow(1.0 + std::pow(s / xc, xi), -chi);
        };
        const double lo = std::log(c), hi = std::log(1.0 + c);
        const double mid = std::clamp(std::log(xc), lo, hi);
        return finite_or_throw(integrate_adaptive(g, lo, mid) + integrate_adaptive(g, mid, hi),
                               "propensity");
    }
    }
    return 0.0;
}

double saturate(double p, double a)
{
    if (!(a > 0.0)) throw ConfigError("graphon.a must be > 0");
    if (!(p >= 0.0)) throw DomainError("propensity must be nonnegative");
    if (std::isinf(p)) return 1.0;
    return p / (a + p);
}

double propensity_scaled(const GraphonSpec& spec, double x)
{
    return saturate(propensity(spec, x), spec.a);
}

GraphonLattice build_lattice(const GraphonSpec& spec, const std::vector<double>& x_nodes)
{
    validate(spec);
    GraphonLattice lat;
    lat.n = x_nodes.size();
    lat.x = x_nodes;
    lat.d_in.resize(lat.n);
    lat.p.resize(lat.n);
    lat.p_tilde.resize(lat.n);
    lat.B.resize(lat.n * lat.n);
    lat.BP.resize(lat.n * lat.n);
    for (std::size_t i = 0; i < lat.n; ++i) {
        lat.d_in[i] = in_degree(spec, x_nodes[i]);
        lat.p[i] = propensity(spec, x_nodes[i]);
        lat.p_tilde[i] = saturate(lat.p[i], spec.a);
    }
    for (std::size_t i = 0; i < lat.n; ++i) {
        for (std::size_t k = 0; k < lat.n; ++k) {
            const double b = graphon_eval(spec, x_nodes[i], x_nodes[k]);
            const double p = std::pow(1.0 + lat.d_in[i] / lat.d_in[k], -spec.chi);
            lat.B[i * lat.n + k] = b;
            lat.BP[i * lat.n + k] = b * p;
        }
    }
    return lat;
}

}  // namespace kinsir
