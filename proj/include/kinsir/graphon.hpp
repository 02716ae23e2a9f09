#pragma once

#include <string>
#include <vector>

namespace kinsir {

enum class GraphonKind { FatTailed, SpatialAdjacency, Constant };

std::string to_string(GraphonKind kind);
GraphonKind graphon_kind_from_string(const std::string& name);

struct GraphonSpec {
    GraphonKind kind = GraphonKind::Constant;
    double xi = 0.05;       // FatTailed exponent
    double r = 0.2;         // SpatialAdjacency radius
    double chi = 0.5;       // interaction exponent
    double cutoff = 1e-10;  // additive shift of singular arguments
    double a = 1.0;         // saturation constant of g(p) = p/(a+p)
};

/// Throws ConfigError when a field is outside its domain.
void validate(const GraphonSpec& spec);

double graphon_eval(const GraphonSpec& spec, double x, double y);
double in_degree(const GraphonSpec& spec, double x);
double interaction_eval(const GraphonSpec& spec, double x, double y);

/// p(x): closed form where available, adaptive quadrature otherwise.
double propensity(const GraphonSpec& spec, double x);
/// p(x) by direct adaptive quadrature of B*P over z in [0,1].
double propensity_quadrature(const GraphonSpec& spec, double x);
/// g(p) = p/(a+p).
double saturate(double p, double a);
double propensity_scaled(const GraphonSpec& spec, double x);

/// Piecewise closed forms for the spatial adjacency graphon.
double spatial_interaction_closed(double r, double chi, double x, double y);
double spatial_propensity_closed(double r, double chi, double x);

/// Graphon quantities cached on the x-node lattice.
struct GraphonLattice {
    std::size_t n = 0;              // number of x nodes
    std::vector<double> x;
    std::vector<double> d_in;       // in-degree per node
    std::vector<double> p;          // propensity
    std::vector<double> p_tilde;    // g(p)
    std::vector<double> B;          // n*n, row i = x_i
    std::vector<double> BP;         // n*n, B*P
};

GraphonLattice build_lattice(const GraphonSpec& spec, const std::vector<double>& x_nodes);

}  // namespace kinsir
