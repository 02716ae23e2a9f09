#include "kinsir/phase_grid.hpp"

#include "kinsir/errors.hpp"
#include "kinsir/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinsir {

namespace {
constexpr double kNodeTol = 1e-12;
}

const char* compartment_name(int J)
{
    static const char* names[] = {"S", "I", "R"};
    return names[J];
}

PhaseGrid::PhaseGrid(int nx_, int nw_) : nx(nx_), nw(nw_)
{
    if (nx < 2) throw ConfigError("grid.nx must be >= 2");
    if (nw < 4) throw ConfigError("grid.nw must be >= 4");
    dx = 1.0 / nx;
    dw = 2.0 / nw;
    x.resize(nx1());
    w.resize(nw1());
    for (int i = 0; i <= nx; ++i) x[i] = static_cast<double>(i) / nx;
    for (int j = 0; j <= nw; ++j) w[j] = -1.0 + 2.0 * j / nw;
    w.front() = -1.0;
    w.back() = 1.0;
    wx = trapezoid_weights(nx, dx);
    ww = trapezoid_weights(nw, dw);
}

CompartmentField::CompartmentField(const PhaseGrid& g) : grid(g)
{
    for (auto& v : f) v.assign(grid.size(), 0.0);
}

std::vector<double> CompartmentField::total() const
{
    std::vector<double> t(grid.size());
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = f[S][n] + f[I][n] + f[R][n];
    return t;
}

double integrate_phase(const PhaseGrid& grid, const std::vector<double>& field)
{
    if (field.size() != grid.size()) throw std::invalid_argument("integrate_phase: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.nx1(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < grid.nw1(); ++j) {
            const double v = field[grid.idx(i, j)];
            if (!std::isfinite(v)) throw NumericError("integrate_phase: non-finite entry");
            row += grid.ww[j] * v;
        }
        sum += grid.wx[i] * row;
    }
    return sum;
}

std::vector<double> row_masses(const PhaseGrid& grid, const std::vector<double>& field)
{
    std::vector<double> out(grid.nx1(), 0.0);
    for (std::size_t i = 0; i < grid.nx1(); ++i)
        for (std::size_t j = 0; j < grid.nw1(); ++j) out[i] += grid.ww[j] * field[grid.idx(i, j)];
    return out;
}

Moments compute_moments(const CompartmentField& field, const GraphonLattice& lattice)
{
    const PhaseGrid& g = field.grid;
    Moments mom;
    double first_total = 0.0;
    std::vector<double> row_rho(g.nx1(), 0.0), row_first(g.nx1(), 0.0);
    for (int J = 0; J < kCompartments; ++J) {
        double rho = 0.0, first = 0.0;
        for (std::size_t i = 0; i < g.nx1(); ++i) {
            double r0 = 0.0, r1 = 0.0;
            for (std::size_t j = 0; j < g.nw1(); ++j) {
                const double v = field.f[J][g.idx(i, j)];
                if (!std::isfinite(v)) throw NumericError("moments: non-finite density");
                r0 += g.ww[j] * v;
                r1 += g.ww[j] * g.w[j] * v;
            }
            row_rho[i] += r0;
            row_first[i] += r1;
            rho += g.wx[i] * r0;
            first += g.wx[i] * r1;
        }
        mom.rho[J] = rho;
        mom.m[J] = rho >= kMassFloor ? first / rho : 0.0;
        mom.rho_total += rho;
        first_total += first;
    }
    mom.m_total = mom.rho_total >= kMassFloor ? first_total / mom.rho_total : 0.0;
    for (std::size_t i = 0; i < g.nx1(); ++i) {
        mom.rho_ptilde += g.wx[i] * lattice.p_tilde[i] * row_rho[i];
        mom.m_ptilde += g.wx[i] * lattice.p_tilde[i] * row_first[i];
    }
    const std::size_t n = g.nx1();
    mom.rho_B.assign(n, 0.0);
    mom.rho_BP.assign(n, 0.0);
    mom.m_BP.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            mom.rho_B[i] += lattice.B[i * n + k] * g.wx[k] * row_rho[k];
            mom.rho_BP[i] += lattice.BP[i * n + k] * g.wx[k] * row_rho[k];
            mom.m_BP[i] += lattice.BP[i * n + k] * g.wx[k] * row_first[k];
        }
    }
    return mom;
}

double OpinionKernel::eval(double w, double ws) const
{
    if (kind == Kind::Unity) return 1.0;
    return std::abs(w - ws) <= delta + kNodeTol ? 1.0 : 0.0;
}

InteractionProfile::InteractionProfile(const std::vector<double>& w_nodes, std::size_t rows,
                                       std::vector<double> q)
    : w_(w_nodes), rows_(rows), nl_(w_nodes.size())
{
    if (q.size() != rows_ * nl_) throw std::invalid_argument("InteractionProfile: size mismatch");
    s0_.assign(rows_ * (nl_ + 1), 0.0);
    s1_.assign(rows_ * (nl_ + 1), 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double* p0 = &s0_[r * (nl_ + 1)];
        double* p1 = &s1_[r * (nl_ + 1)];
        for (std::size_t l = 0; l < nl_; ++l) {
            p0[l + 1] = p0[l] + q[r * nl_ + l];
            p1[l + 1] = p1[l] + q[r * nl_ + l] * w_[l];
        }
    }
}

double InteractionProfile::eval(std::size_t row, double w, const OpinionKernel& G) const
{
    std::size_t lo = 0, hi = nl_;
    if (G.kind == OpinionKernel::Kind::BoundedConfidence) {
        lo = static_cast<std::size_t>(
            std::lower_bound(w_.begin(), w_.end(), w - G.delta - kNodeTol) - w_.begin());
        hi = static_cast<std::size_t>(
            std::upper_bound(w_.begin(), w_.end(), w + G.delta + kNodeTol) - w_.begin());
        if (hi <= lo) return 0.0;
    }
    const double* p0 = &s0_[row * (nl_ + 1)];
    const double* p1 = &s1_[row * (nl_ + 1)];
    return w * (p0[hi] - p0[lo]) - (p1[hi] - p1[lo]);
}

InteractionProfile profile_full(const PhaseGrid& grid, const GraphonLattice& lattice,
                                const std::vector<double>& total, Backend be)
{
    const std::size_t n = grid.nx1(), nl = grid.nw1();
    std::vector<double> M(n * nl);
    kernels::contract(be, lattice.BP.data(), n, grid.wx.data(), total.data(), n, nl, M.data());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < nl; ++l) M[i * nl + l] *= grid.ww[l];
    return InteractionProfile(grid.w, n, std::move(M));
}

InteractionProfile profile_simplified(const PhaseGrid& grid, const GraphonLattice& lattice,
                                      const std::vector<double>& total)
{
    const std::size_t n = grid.nx1(), nl = grid.nw1();
    std::vector<double> q(nl, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double c = grid.wx[k] * lattice.p_tilde[k];
        for (std::size_t l = 0; l < nl; ++l) q[l] += c * total[k * nl + l];
    }
    for (std::size_t l = 0; l < nl; ++l) q[l] *= grid.ww[l];
    return InteractionProfile(grid.w, 1, std::move(q));
}

std::vector<double> functional_H(const CompartmentField& field, const GraphonLattice& lattice)
{
    const PhaseGrid& g = field.grid;
    const auto rows = row_masses(g, field.total());
    const std::size_t n = g.nx1();
    std::vector<double> H(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) H[i] += lattice.B[i * n + k] * g.wx[k] * rows[k];
        if (!std::isfinite(H[i])) throw NumericError("functional_H: non-finite value");
    }
    return H;
}

std::vector<double> functional_K(const CompartmentField& field, const GraphonLattice& lattice,
                                 const OpinionKernel& G)
{
    const PhaseGrid& g = field.grid;
    const auto prof = profile_full(g, lattice, field.total(), Backend::Serial);
    std::vector<double> K(g.size());
    for (std::size_t i = 0; i < g.nx1(); ++i)
        for (std::size_t j = 0; j < g.nw1(); ++j) K[g.idx(i, j)] = prof.eval(i, g.w[j], G);
    return K;
}

std::vector<double> functional_K_tilde(const CompartmentField& field, const GraphonLattice& lattice,
                                       const OpinionKernel& G)
{
    const PhaseGrid& g = field.grid;
    const auto prof = profile_simplified(g, lattice, field.total());
    std::vector<double> K(g.size());
    for (std::size_t j = 0; j < g.nw1(); ++j) {
        const double v = prof.eval(0, g.w[j], G);
        for (std::size_t i = 0; i < g.nx1(); ++i) K[g.idx(i, j)] = v;
    }
    return K;
}

double functional_F(const CompartmentField& field, const GraphonLattice& lattice, double w_hat,
                    bool flip)
{
    const PhaseGrid& g = field.grid;
    const auto tot = field.total();
    double F = 0.0;
    for (std::size_t i = 0; i < g.nx1(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.nw1(); ++j) {
            const bool in = flip ? g.w[j] <= w_hat + kNodeTol : g.w[j] >= w_hat - kNodeTol;
            if (in) row += g.ww[j] * tot[g.idx(i, j)];
        }
        F += g.wx[i] * lattice.p[i] * row;
    }
    return F;
}

double snap_to_node(const PhaseGrid& grid, double w_hat)
{
    if (!(w_hat >= -1.0 && w_hat <= 1.0)) throw ConfigError("popularity.w_hat must lie in [-1,1]");
    const long j = std::lround((w_hat + 1.0) / grid.dw);
    return grid.w[static_cast<std::size_t>(std::clamp(j, 0L, static_cast<long>(grid.nw)))];
}

}  // namespace kinsir
