#pragma once

#include "kinsir/config.hpp"
#include "kinsir/diagnostics.hpp"
#include "kinsir/equilibria.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kinsir {

/// Sample the rectangles by control-volume averaging and rescale each compartment to its
/// target mass (S: 1 - rho_I - rho_R). Compartments without rectangles are uniform.
CompartmentField build_initial_condition(const ScenarioConfig& cfg, const PhaseGrid& grid);

struct MomentRecord {
    double t = 0.0;
    Moments mom;
    double R_eff = 0.0;
    double F = 0.0;
    std::vector<double> H;
};

struct DiagnosticRow {
    double t;
    std::string metric;
    double value;
};

struct PopularityRecord {
    double t = 0.0;
    PopMoments mom;
    double F = 0.0;
};

struct RunArtifacts {
    ScenarioConfig config;
    PhaseGrid grid;
    GraphonLattice lattice;
    CompartmentField initial, final_state;
    std::vector<MomentRecord> moments;           // at output times
    std::vector<CompartmentField> states;        // at output times
    std::vector<std::pair<double, CompartmentField>> snapshots;  // at the configured snapshot times
    FSeries f_series;                            // every accepted step
    std::size_t steps = 0;
    double dt_min = 0.0, dt_max = 0.0;

    std::optional<CompartmentField> target;      // equilibrium used by the distances
    std::string target_kind;                     // "closed_form" or "empirical"
    bool exclude_endpoints = false;

    bool has_popularity = false;
    PopGrid pop_grid;
    std::vector<PopularityRecord> pop_records;   // at output times
    std::vector<PopularityField> pop_states;
    std::size_t pop_steps = 0;

    std::vector<DiagnosticRow> diagnostics;
    std::vector<WavePeak> waves;
    int reff_crossings = 0;

    /// Value of `metric` at every output time.
    std::vector<double> series(const std::string& metric) const;
};

struct RunOptions {
    Backend backend = Backend::OpenMP;
    bool keep_states = true;
};

/// Stepping, popularity clock and post-run diagnostics. Errors carry the step index and time.
RunArtifacts run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {});

/// Equilibrium the distances are measured against: the closed form for alpha = 0 in the
/// simplified model, otherwise the local equilibrium matched to `state`.
CompartmentField reference_equilibrium(const ScenarioConfig& cfg, const GraphonLattice& lattice,
                                       const CompartmentField& ic, const CompartmentField& state,
                                       std::string* kind = nullptr);

/// Whether any x node of any compartment sits in the polarization regime.
bool any_polarization(const ScenarioConfig& cfg, const GraphonLattice& lattice, const CompartmentField& state);

/// Fill `art.diagnostics` from the stored states.
void compute_diagnostics(RunArtifacts& art);

}  // namespace kinsir
