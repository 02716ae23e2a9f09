#pragma once

#include "kinsir/epidemic.hpp"
#include "kinsir/graphon.hpp"
#include "kinsir/kernels.hpp"
#include "kinsir/opinion_fp.hpp"
#include "kinsir/popularity.hpp"

#include <string>
#include <vector>

namespace kinsir {

enum class Preset { Test1FatTailed, Test1Spatial, Test2, Test3, Test4NoLeaders, Test4Leaders, Custom };

std::string to_string(Preset p);
Preset preset_from_string(const std::string& name);

/// Piecewise-constant block of one compartment; weights are relative heights.
struct RectangleIC {
    int compartment = S;
    double x0 = 0.0, x1 = 1.0, w0 = -1.0, w1 = 1.0;
    double weight = 1.0;
};

struct TimeConfig {
    double T = 50.0;
    double dt_max = 0.1;
    double safety = 0.95;
    double output_interval = 0.0;  // 0 selects T/200
};

struct PopularityConfig {
    bool enabled = false;
    bool offline = false;          // replay from the serialized F series after the run
    PopularityParams params;
    GridPolicy policy;
    double v0_max = 0.0;           // initial support [0, v0_max]; 0 selects 2 theta F(0)/mu
    double safety = 0.95;
};

struct OutputConfig {
    std::string dir = "out";
    std::vector<double> snapshot_times;  // empty: every output time
    std::vector<std::string> diagnostics{"l1", "entropy", "hellinger", "conservation", "sobolev", "waves"};
};

struct ScenarioConfig {
    Preset preset = Preset::Custom;
    ModelVariant model;
    EpiParams epi;
    GraphonSpec graphon;
    int nx = 20;
    int nw = 100;
    TimeConfig time;
    PopularityConfig popularity;
    double rho_I_in = 1e-3;
    double rho_R_in = 1e-3;
    std::vector<RectangleIC> rects;  // S blocks; I and R are uniform unless listed
    OutputConfig output;

    double output_interval() const { return time.output_interval > 0.0 ? time.output_interval : time.T / 200.0; }
    bool wants(const std::string& diag) const;
};

/// Parameter table of a preset.
ScenarioConfig preset_config(Preset p);

/// Parse `key = value` lines ('#' starts a comment). `preset` is applied first, the remaining
/// keys override it in file order. `rect = J x0 x1 w0 w1 weight` may repeat.
ScenarioConfig parse_config(const std::string& text, const std::string& preset_override = "");
ScenarioConfig load_config(const std::string& path, const std::string& preset_override = "");

/// Apply one key; throws ConfigError naming the key.
void apply_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

void validate(const ScenarioConfig& cfg);

/// Every effective setting as `key = value` lines.
std::string echo_config(const ScenarioConfig& cfg);

}  // namespace kinsir
