#pragma once

#include "kinsir/graphon.hpp"
#include "kinsir/kernels.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace kinsir {

enum Compartment : int { S = 0, I = 1, R = 2 };
constexpr int kCompartments = 3;
const char* compartment_name(int J);

/// Uniform nodes x_i = i/nx (i = 0..nx) and w_j = -1 + 2j/nw (j = 0..nw).
struct PhaseGrid {
    int nx = 20;
    int nw = 100;
    double dx = 0.05;
    double dw = 0.02;
    std::vector<double> x, w;
    std::vector<double> wx, ww;  // trapezoid weights

    PhaseGrid() : PhaseGrid(20, 100) {}
    PhaseGrid(int nx, int nw);

    std::size_t nx1() const { return static_cast<std::size_t>(nx) + 1; }
    std::size_t nw1() const { return static_cast<std::size_t>(nw) + 1; }
    std::size_t size() const { return nx1() * nw1(); }
    std::size_t idx(std::size_t i, std::size_t j) const { return i * nw1() + j; }
    bool operator==(const PhaseGrid& o) const { return nx == o.nx && nw == o.nw; }
};

/// f_S, f_I, f_R sampled on the nodes, row-major in (x, w).
struct CompartmentField {
    PhaseGrid grid;
    std::array<std::vector<double>, kCompartments> f;

    CompartmentField() = default;
    explicit CompartmentField(const PhaseGrid& g);

    double& at(int J, std::size_t i, std::size_t j) { return f[J][grid.idx(i, j)]; }
    double at(int J, std::size_t i, std::size_t j) const { return f[J][grid.idx(i, j)]; }
    std::vector<double> total() const;
};

constexpr double kMassFloor = 1e-12;

/// Composite trapezoid over the phase grid.
double integrate_phase(const PhaseGrid& grid, const std::vector<double>& field);
/// Trapezoid in w of each x row.
std::vector<double> row_masses(const PhaseGrid& grid, const std::vector<double>& field);

struct Moments {
    std::array<double, kCompartments> rho{};
    std::array<double, kCompartments> m{};
    double rho_total = 0.0;
    double m_total = 0.0;
    double rho_ptilde = 0.0;
    double m_ptilde = 0.0;
    std::vector<double> rho_B, rho_BP, m_BP;  // per x node
};

Moments compute_moments(const CompartmentField& field, const GraphonLattice& lattice);

/// Opinion interaction kernel G(w, w*).
struct OpinionKernel {
    enum class Kind { Unity, BoundedConfidence };
    Kind kind = Kind::Unity;
    double delta = 2.0;
    double eval(double w, double ws) const;
};

/// Opinion profiles q_r(l) (already multiplied by the w-trapezoid weights) with prefix
/// sums, so that K_r(w) = sum_l q_r(l) G(w, w_l) (w - w_l) costs O(log N_w).
class InteractionProfile {
public:
    InteractionProfile(const std::vector<double>& w_nodes, std::size_t rows, std::vector<double> q);
    double eval(std::size_t row, double w, const OpinionKernel& G) const;
    double mass(std::size_t row) const { return s0_[row * (nl_ + 1) + nl_]; }
    double first(std::size_t row) const { return s1_[row * (nl_ + 1) + nl_]; }
    std::size_t rows() const { return rows_; }

private:
    std::vector<double> w_;
    std::size_t rows_, nl_;
    std::vector<double> s0_, s1_;
};

/// Rows x_i: q_i(l) = ww_l sum_k wx_k B(x_i,y_k) P(x_i,y_k) f(y_k, w_l).
InteractionProfile profile_full(const PhaseGrid& grid, const GraphonLattice& lattice,
                                const std::vector<double>& total, Backend be = Backend::OpenMP);
/// Single row: q(l) = ww_l sum_k wx_k P~(y_k) f(y_k, w_l).
InteractionProfile profile_simplified(const PhaseGrid& grid, const GraphonLattice& lattice,
                                      const std::vector<double>& total);

std::vector<double> functional_H(const CompartmentField& field, const GraphonLattice& lattice);
std::vector<double> functional_K(const CompartmentField& field, const GraphonLattice& lattice,
                                 const OpinionKernel& G);
std::vector<double> functional_K_tilde(const CompartmentField& field, const GraphonLattice& lattice,
                                       const OpinionKernel& G);
double functional_F(const CompartmentField& field, const GraphonLattice& lattice, double w_hat,
                    bool flip = false);

/// Nearest opinion node to w_hat.
double snap_to_node(const PhaseGrid& grid, double w_hat);

}  // namespace kinsir
