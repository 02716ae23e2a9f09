#include "kinsir/opinion_fp.hpp"

#include "kinsir/chang_cooper.hpp"
#include "kinsir/errors.hpp"
#include "kinsir/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

namespace kinsir {

void validate(const ModelVariant& v)
{
    for (int J = 0; J < kCompartments; ++J)
        if (!(v.sigma2[J] >= 0.0))
            throw ConfigError(std::string("model.sigma2_") + compartment_name(J) + " must be >= 0");
    if (!(v.lambda >= 0.0)) throw ConfigError("model.lambda must be >= 0");
    if (!(v.tau > 0.0)) throw ConfigError("model.tau must be > 0");
    if (v.G.kind == OpinionKernel::Kind::BoundedConfidence && !(v.G.delta > 0.0 && v.G.delta < 2.0))
        throw ConfigError("model.delta must lie in (0,2)");
    if (v.quad_order < 2 || v.quad_order > 10 || v.quad_order % 2 != 0)
        throw ConfigError("numerics.quad_order must be one of 2, 4, 6, 8, 10");
}

double FpCoefficients::max_abs_drift() const
{
    double c = 0.0;
    for (double d : drift) c = std::max(c, std::abs(d));
    return c;
}

namespace {

// Coefficients of one (J, i) row:  C(w) = k_scale K(w) - s2 H w,  D(w) = s2 H (1 - w^2) / 2.
void assemble_row(FpCoefficients& out, int J, std::size_t i, const PhaseGrid& grid,
                  const InteractionProfile& prof, std::size_t prof_row, double k_scale, double H,
                  double s2, const OpinionKernel& G, const UnitRule& rule)
{
    const std::size_t nq = rule.nodes.size();
    const double dw = grid.dw;
    const double kmag = k_scale * (std::abs(prof.mass(prof_row)) + std::abs(prof.first(prof_row)));
    auto C = [&](double w) { return k_scale * prof.eval(prof_row, w, G) - s2 * H * w; };
    auto D = [&](double w) { return 0.5 * s2 * H * (1.0 - w * w); };
    const bool diffusive = s2 * H > 0.0;
    for (std::size_t j = 0; j < out.nfaces; ++j) {
        const double wl = grid.w[j];
        double avgC = 0.0, avgD = 0.0, ratio = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            const double w = wl + rule.nodes[q] * dw;
            const double c = C(w), d = D(w);
            avgC += rule.weights[q] * c;
            avgD += rule.weights[q] * d;
            if (diffusive) ratio += rule.weights[q] * c / d;
        }
        double lam;
        if (!diffusive) {
            lam = avgC > 0.0 ? std::numeric_limits<double>::infinity()
                : avgC < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
        } else if (j == 0 || j + 1 == out.nfaces) {
            // D vanishes at w = -1 / w = 1: the cell integral of C/D diverges unless C does too
            const double cend = C(j == 0 ? -1.0 : 1.0);
            if (std::abs(cend) > 1e-13 * (kmag + s2 * H))
                lam = std::copysign(std::numeric_limits<double>::infinity(), cend);
            else
                lam = dw * ratio;
        } else {
            lam = dw * ratio;
        }
        const std::size_t n = out.idx(J, i, j);
        out.drift[n] = -avgC;
        out.diff[n] = avgD;
        out.lambda[n] = lam;
        out.delta[n] = cc_weight(lam);
        const FaceFlux ff = cc_face(avgC / out.tau, avgD / out.tau, lam, dw);
        out.a[n] = ff.a;
        out.b[n] = ff.b;
        if (!std::isfinite(avgC) || !std::isfinite(avgD) || std::isnan(lam) || !std::isfinite(ff.a) ||
            !std::isfinite(ff.b))
            throw NumericError("non-finite Fokker-Planck coefficient at (J=" +
                               std::string(compartment_name(J)) + ", i=" + std::to_string(i) +
                               ", j=" + std::to_string(j) + ")");
    }
}

}  // namespace

FpCoefficients assemble_coefficients(const CompartmentField& state, const ModelVariant& variant,
                                     const GraphonLattice& lattice, Backend be)
{
    const PhaseGrid& grid = state.grid;
    FpCoefficients out;
    out.nx1 = grid.nx1();
    out.nfaces = static_cast<std::size_t>(grid.nw);
    out.dw = grid.dw;
    out.tau = variant.tau;
    const std::size_t total_faces = kCompartments * out.nx1 * out.nfaces;
    for (auto* v : {&out.drift, &out.diff, &out.lambda, &out.delta, &out.a, &out.b}) v->assign(total_faces, 0.0);

    const auto tot = state.total();
    const bool full = variant.kind == ModelVariant::Kind::Full;
    std::vector<double> H(out.nx1, 1.0);
    if (full) H = functional_H(state, lattice);
    const InteractionProfile prof =
        full ? profile_full(grid, lattice, tot, be) : profile_simplified(grid, lattice, tot);
    const UnitRule rule = gauss_legendre_unit(variant.quad_order);

    const long rows = static_cast<long>(kCompartments * out.nx1);
    auto body = [&](long r) {
        const int J = static_cast<int>(r / static_cast<long>(out.nx1));
        const std::size_t i = static_cast<std::size_t>(r) % out.nx1;
        const double k_scale = variant.lambda * (full ? 1.0 : lattice.p_tilde[i]);
        assemble_row(out, J, i, grid, prof, full ? i : 0, k_scale, H[i], variant.sigma2[J], variant.G,
                     rule);
    };
    if (be == Backend::OpenMP) {
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (long r = 0; r < rows; ++r) {
            try {
                body(r);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (long r = 0; r < rows; ++r) body(r);
    }
    return out;
}

double cfl_dt(const FpCoefficients& coeffs, const PhaseGrid& grid, double safety, double dt_max)
{
    const double C = std::max(coeffs.max_abs_drift() / coeffs.tau, 1e-30);
    return std::min(dt_max, safety * grid.dw / (2.0 * C));
}

void fp_step(CompartmentField& state, const FpCoefficients& coeffs, double dt, Backend be)
{
    const PhaseGrid& grid = state.grid;
    if (coeffs.nx1 != grid.nx1() || coeffs.nfaces != static_cast<std::size_t>(grid.nw))
        throw std::invalid_argument("fp_step: coefficients do not match the grid");
    if (!(dt > 0.0)) throw std::invalid_argument("fp_step: dt must be positive");
    double lowest = std::numeric_limits<double>::infinity();
    for (int J = 0; J < kCompartments; ++J) {
        const std::size_t off = coeffs.idx(J, 0, 0);
        lowest = std::min(lowest, kernels::solve_flux_rows(be, grid.nx1(), grid.nw1(), coeffs.a.data() + off,
                                                           coeffs.b.data() + off, grid.dw, dt,
                                                           state.f[J].data()));
    }
    if (lowest < -1e-14)
        throw NumericError("Fokker-Planck step produced a negative density (" + std::to_string(lowest) +
                           "); time step violates the CFL bound");
}

}  // namespace kinsir
