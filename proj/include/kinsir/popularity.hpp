#pragma once

#include <cstddef>
#include <vector>

namespace kinsir {

struct PopularityParams {
    double mu = 1.5;
    double theta = 5.0;
    double zeta2 = 1.0;
    double tau_p = 1.0;
    double w_hat = 0.3;
    bool flip = false;  // count opinions w <= w_hat instead of w >= w_hat
};

void validate(const PopularityParams& p);

struct GridPolicy {
    double eps_tail = 1e-12;
    double L_min = 8.0;     // multiple of the equilibrium peak
    int N_min = 50;
    int N_max = 801;
    double dv_target = 0.0; // 0 selects v_peak / 10
};

void validate(const GridPolicy& g);

/// Nodes v_k = k dv, k = 0..N on [0, L].
struct PopGrid {
    double L = 0.0;
    int N = 0;
    double dv = 0.0;
    std::vector<double> v, wt;  // nodes and trapezoid weights

    PopGrid() = default;
    PopGrid(double L, int N);
    std::size_t size() const { return v.size(); }
};

/// Truncation and resolution for the equilibrium at F_max. Throws ConfigError when the
/// required L cannot be resolved at N_max.
PopGrid adapt_grid(const GridPolicy& policy, double mu, double zeta2, double theta, double F_max);

struct PopularityField {
    PopGrid grid;
    std::vector<double> h;
};

/// Uniform density of unit mass on [0, v_max] (v_max clipped to L).
PopularityField uniform_popularity(const PopGrid& grid, double v_max);
/// Inverse gamma equilibrium sampled on the grid (no renormalization).
PopularityField inverse_gamma_field(const PopGrid& grid, double F, const PopularityParams& p);

/// -(mu + zeta^2) v + theta F.
double pop_drift(double v, double F, const PopularityParams& p);

struct PopFaces {
    std::vector<double> drift;  // face average of pop_drift
    std::vector<double> lambda;
    std::vector<double> a, b;   // divided by tau_p
    double max_abs_drift = 0.0;
};

PopFaces pop_faces(const PopGrid& grid, double F, const PopularityParams& p);

/// safety * dv / (2 max|drift| / tau_p).
double pop_cfl_dt(const PopFaces& faces, const PopGrid& grid, const PopularityParams& p, double safety);

/// One Chang-Cooper step with zero flux at v = 0 and v = L.
void pop_step(PopularityField& field, const PopFaces& faces, double dt);
void pop_step(PopularityField& field, double F, double dt, const PopularityParams& p);

/// Time-stamped source values, piecewise constant from the left.
struct FSeries {
    std::vector<double> t, F;
    void push(double time, double value);
};

double interpolate_F(const FSeries& series, double t);

/// Advance from t0 to t1 on the popularity clock. Each series interval is split into
/// equal substeps obeying the CFL bound. Returns the number of substeps taken.
std::size_t advance_popularity(PopularityField& field, const FSeries& series, double t0, double t1,
                               const PopularityParams& p, double safety);

struct PopMoments {
    double mass = 0.0;
    double m_p = 0.0;
    double e_p = 0.0;
};

PopMoments pop_moments(const PopularityField& field);

}  // namespace kinsir
