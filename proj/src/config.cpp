#include "kinsir/config.hpp"

#include "kinsir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace kinsir {

namespace {

const std::map<std::string, Preset>& preset_names()
{
    static const std::map<std::string, Preset> names{
        {"Test1FatTailed", Preset::Test1FatTailed}, {"Test1Spatial", Preset::Test1Spatial},
        {"Test2", Preset::Test2},                   {"Test3", Preset::Test3},
        {"Test4NoLeaders", Preset::Test4NoLeaders}, {"Test4Leaders", Preset::Test4Leaders},
        {"Custom", Preset::Custom}};
    return names;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v)
{
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int compartment_from(const std::string& key, const std::string& name)
{
    if (name == "S") return S;
    if (name == "I") return I;
    if (name == "R") return R;
    throw ConfigError(key + ": unknown compartment '" + name + "'");
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

std::string to_string(Preset p)
{
    for (const auto& [name, value] : preset_names())
        if (value == p) return name;
    return "Custom";
}

Preset preset_from_string(const std::string& name)
{
    const auto it = preset_names().find(name);
    if (it == preset_names().end()) throw ConfigError("preset: unknown preset '" + name + "'");
    return it->second;
}

bool ScenarioConfig::wants(const std::string& diag) const
{
    return std::find(output.diagnostics.begin(), output.diagnostics.end(), diag) != output.diagnostics.end();
}

ScenarioConfig preset_config(Preset p)
{
    ScenarioConfig c;
    c.preset = p;
    c.epi = EpiParams{0.8, 0.0, 0.6};
    c.model.kind = ModelVariant::Kind::Simplified;
    c.model.lambda = 1.0;
    c.model.tau = 1.0;
    c.model.quad_order = 6;
    c.model.G = OpinionKernel{};
    c.time.dt_max = 0.1;
    switch (p) {
    case Preset::Test1FatTailed:
        c.model.sigma2 = {0.16, 0.16, 0.16};
        c.graphon = GraphonSpec{GraphonKind::FatTailed, 0.05, 0.2, 0.5, 1e-10, 1.0};
        c.time.T = 200.0;
        c.rects = {{S, 0.0, 1.0, -1.0, 0.0, 2.0 / 3.0}, {S, 0.0, 1.0, 0.0, 1.0, 1.0 / 3.0}};
        break;
    case Preset::Test1Spatial:
    case Preset::Test2:
        c.model.sigma2 = {0.01, 0.01, 0.01};
        c.graphon = GraphonSpec{GraphonKind::SpatialAdjacency, 0.05, 0.2, 0.5, 1e-10, 0.5};
        c.nw = 200;
        c.time.T = 200.0;
        c.rects = {{S, 0.0, 1.0, 1.0 / 3.0, 2.0 / 3.0, 3.0}};
        if (p == Preset::Test2) {
            c.popularity.enabled = true;
            c.popularity.params = PopularityParams{1.5, 5.0, 1.0, 1.0, 0.3, false};
            c.popularity.policy = GridPolicy{1e-6, 8.0, 101, 801, 0.0};
        }
        break;
    case Preset::Test3:
        c.epi = EpiParams{0.8, 1.0, 0.4};
        c.model.sigma2 = {0.05, 0.03, 0.01};
        c.model.G = OpinionKernel{OpinionKernel::Kind::BoundedConfidence, 0.5};
        c.model.quad_order = 2;
        c.graphon = GraphonSpec{GraphonKind::FatTailed, 0.25, 0.2, 2.0, 1e-10, 1.0};
        c.time.T = 450.0;
        c.rects = {{S, 0.7, 0.9, -0.8, -0.4, 0.25}, {S, 0.1, 0.3, 0.4, 0.8, 1.0}};
        break;
    case Preset::Test4NoLeaders:
    case Preset::Test4Leaders:
        c.epi = EpiParams{0.8, 1.0, 0.4};
        c.model.kind = ModelVariant::Kind::Full;
        c.model.sigma2 = {0.05, 0.03, 0.01};
        c.model.G = OpinionKernel{OpinionKernel::Kind::BoundedConfidence, 1.5};
        c.model.quad_order = 2;
        c.graphon = p == Preset::Test4Leaders ? GraphonSpec{GraphonKind::FatTailed, 0.25, 0.2, 2.0, 1e-3, 1.0}
                                              : GraphonSpec{GraphonKind::FatTailed, 0.05, 0.2, 0.5, 1e-3, 1.0};
        c.time.T = 35.0;
        c.rects = {{S, 0.7, 0.9, -0.9, -0.3, 1.0}, {S, 0.1, 0.3, 0.55, 0.85, 0.25}};
        break;
    case Preset::Custom:
        c.rects.clear();
        break;
    }
    return c;
}

void apply_key(ScenarioConfig& c, const std::string& key, const std::string& v)
{
    auto num = [&] { return to_double(key, v); };
    if (key == "model.kind") {
        if (v == "full") c.model.kind = ModelVariant::Kind::Full;
        else if (v == "simplified") c.model.kind = ModelVariant::Kind::Simplified;
        else throw ConfigError(key + ": expected full or simplified");
    } else if (key == "model.lambda") c.model.lambda = num();
    else if (key == "model.tau") c.model.tau = num();
    else if (key == "model.sigma2") c.model.sigma2 = {num(), num(), num()};
    else if (key == "model.sigma2_S") c.model.sigma2[S] = num();
    else if (key == "model.sigma2_I") c.model.sigma2[I] = num();
    else if (key == "model.sigma2_R") c.model.sigma2[R] = num();
    else if (key == "model.kernel") {
        if (v == "unity") c.model.G.kind = OpinionKernel::Kind::Unity;
        else if (v == "bounded") c.model.G.kind = OpinionKernel::Kind::BoundedConfidence;
        else throw ConfigError(key + ": expected unity or bounded");
    } else if (key == "model.delta") c.model.G.delta = num();
    else if (key == "numerics.quad_order") c.model.quad_order = to_int(key, v);
    else if (key == "epi.beta") c.epi.beta = num();
    else if (key == "epi.alpha") c.epi.alpha = num();
    else if (key == "epi.gamma") c.epi.gamma = num();
    else if (key == "graphon.kind") c.graphon.kind = graphon_kind_from_string(v);
    else if (key == "graphon.xi") c.graphon.xi = num();
    else if (key == "graphon.r") c.graphon.r = num();
    else if (key == "graphon.chi") c.graphon.chi = num();
    else if (key == "graphon.cutoff") c.graphon.cutoff = num();
    else if (key == "graphon.a") c.graphon.a = num();
    else if (key == "grid.nx") c.nx = to_int(key, v);
    else if (key == "grid.nw") c.nw = to_int(key, v);
    else if (key == "time.T") c.time.T = num();
    else if (key == "time.dt_max") c.time.dt_max = num();
    else if (key == "time.safety") c.time.safety = num();
    else if (key == "time.output_interval") c.time.output_interval = num();
    else if (key == "ic.rho_I") c.rho_I_in = num();
    else if (key == "ic.rho_R") c.rho_R_in = num();
    else if (key == "ic.rect") {
        std::istringstream in(v);
        std::string comp;
        RectangleIC r;
        if (!(in >> comp >> r.x0 >> r.x1 >> r.w0 >> r.w1 >> r.weight))
            throw ConfigError(key + ": expected 'J x0 x1 w0 w1 weight'");
        r.compartment = compartment_from(key, comp);
        c.rects.push_back(r);
    } else if (key == "ic.clear_rects") {
        if (to_bool(key, v)) c.rects.clear();
    } else if (key == "popularity.enabled") c.popularity.enabled = to_bool(key, v);
    else if (key == "popularity.mode") {
        if (v == "online") c.popularity.offline = false;
        else if (v == "offline") c.popularity.offline = true;
        else throw ConfigError(key + ": expected online or offline");
    } else if (key == "popularity.mu") c.popularity.params.mu = num();
    else if (key == "popularity.theta") c.popularity.params.theta = num();
    else if (key == "popularity.zeta2") c.popularity.params.zeta2 = num();
    else if (key == "popularity.tau_p") c.popularity.params.tau_p = num();
    else if (key == "popularity.w_hat") c.popularity.params.w_hat = num();
    else if (key == "popularity.flip") c.popularity.params.flip = to_bool(key, v);
    else if (key == "popularity.eps_tail") c.popularity.policy.eps_tail = num();
    else if (key == "popularity.L_min") c.popularity.policy.L_min = num();
    else if (key == "popularity.N_min") c.popularity.policy.N_min = to_int(key, v);
    else if (key == "popularity.N_max") c.popularity.policy.N_max = to_int(key, v);
    else if (key == "popularity.dv_target") c.popularity.policy.dv_target = num();
    else if (key == "popularity.v0_max") c.popularity.v0_max = num();
    else if (key == "popularity.safety") c.popularity.safety = num();
    else if (key == "output.dir") c.output.dir = v;
    else if (key == "output.snapshot_times") {
        c.output.snapshot_times.clear();
        if (v != "all")
            for (const auto& s : split_list(v)) c.output.snapshot_times.push_back(to_double(key, s));
    } else if (key == "output.diagnostics") {
        c.output.diagnostics = v == "none" ? std::vector<std::string>{} : split_list(v);
        static const std::vector<std::string> known{"l1", "entropy", "hellinger", "conservation", "sobolev", "waves"};
        for (const auto& d : c.output.diagnostics)
            if (std::find(known.begin(), known.end(), d) == known.end())
                throw ConfigError(key + ": unknown diagnostic '" + d + "'");
    } else throw ConfigError("unknown key '" + key + "'");
}

ScenarioConfig parse_config(const std::string& text, const std::string& preset_override)
{
    std::vector<std::pair<std::string, std::string>> entries;
    std::string preset_name = preset_override;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (value.empty()) throw ConfigError(key + ": missing value");
        if (key == "preset") {
            if (preset_override.empty()) preset_name = value;
        } else {
            entries.emplace_back(key, value);
        }
    }
    const bool has_rects = std::any_of(entries.begin(), entries.end(), [](const auto& e) { return e.first == "ic.rect"; });
    if (preset_name.empty() && !has_rects) throw ConfigError("missing preset or custom block");
    ScenarioConfig cfg = preset_config(preset_name.empty() ? Preset::Custom : preset_from_string(preset_name));
    // explicit rectangles replace the preset's initial datum
    if (has_rects) cfg.rects.clear();
    for (const auto& [k, v] : entries) apply_key(cfg, k, v);
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path, const std::string& preset_override)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), preset_override);
}

void validate(const ScenarioConfig& c)
{
    validate(c.model);
    validate(c.epi);
    validate(c.graphon);
    if (c.nx < 2) throw ConfigError("grid.nx must be >= 2");
    if (c.nw < 4) throw ConfigError("grid.nw must be >= 4");
    if (!(c.time.T > 0.0)) throw ConfigError("time.T must be > 0");
    if (!(c.time.dt_max > 0.0)) throw ConfigError("time.dt_max must be > 0");
    if (!(c.time.safety > 0.0 && c.time.safety <= 1.0)) throw ConfigError("time.safety must lie in (0,1]");
    if (!(c.time.output_interval >= 0.0)) throw ConfigError("time.output_interval must be >= 0");
    if (!(c.rho_I_in >= 0.0 && c.rho_R_in >= 0.0 && c.rho_I_in + c.rho_R_in < 1.0))
        throw ConfigError("ic.rho_I and ic.rho_R must be >= 0 with sum < 1");
    if (c.rects.empty()) throw ConfigError("missing preset or custom block");
    for (const auto& r : c.rects) {
        if (!(r.x0 >= 0.0 && r.x1 <= 1.0 && r.x0 <= r.x1 && r.w0 >= -1.0 && r.w1 <= 1.0 && r.w0 <= r.w1))
            throw ConfigError("ic.rect: bounds must satisfy 0 <= x0 <= x1 <= 1 and -1 <= w0 <= w1 <= 1");
        if (!(r.weight >= 0.0)) throw ConfigError("ic.rect: weight must be >= 0");
    }
    if (c.popularity.enabled) {
        validate(c.popularity.params);
        validate(c.popularity.policy);
        if (!(c.popularity.v0_max >= 0.0)) throw ConfigError("popularity.v0_max must be >= 0");
        if (!(c.popularity.safety > 0.0 && c.popularity.safety <= 1.0))
            throw ConfigError("popularity.safety must lie in (0,1]");
    }
    for (double t : c.output.snapshot_times)
        if (!(t >= 0.0 && t <= c.time.T)) throw ConfigError("output.snapshot_times must lie in [0, T]");
}

std::string echo_config(const ScenarioConfig& c)
{
    std::ostringstream os;
    auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
    kv("preset", to_string(c.preset));
    kv("model.kind", c.model.kind == ModelVariant::Kind::Full ? "full" : "simplified");
    kv("model.lambda", fmt(c.model.lambda));
    kv("model.tau", fmt(c.model.tau));
    kv("model.sigma2_S", fmt(c.model.sigma2[S]));
    kv("model.sigma2_I", fmt(c.model.sigma2[I]));
    kv("model.sigma2_R", fmt(c.model.sigma2[R]));
    kv("model.kernel", c.model.G.kind == OpinionKernel::Kind::Unity ? "unity" : "bounded");
    kv("model.delta", fmt(c.model.G.delta));
    kv("numerics.quad_order", std::to_string(c.model.quad_order));
    kv("epi.beta", fmt(c.epi.beta));
    kv("epi.alpha", fmt(c.epi.alpha));
    kv("epi.gamma", fmt(c.epi.gamma));
    kv("graphon.kind", to_string(c.graphon.kind));
    kv("graphon.xi", fmt(c.graphon.xi));
    kv("graphon.r", fmt(c.graphon.r));
    kv("graphon.chi", fmt(c.graphon.chi));
    kv("graphon.cutoff", fmt(c.graphon.cutoff));
    kv("graphon.a", fmt(c.graphon.a));
    kv("grid.nx", std::to_string(c.nx));
    kv("grid.nw", std::to_string(c.nw));
    kv("time.T", fmt(c.time.T));
    kv("time.dt_max", fmt(c.time.dt_max));
    kv("time.safety", fmt(c.time.safety));
    kv("time.output_interval", fmt(c.output_interval()));
    kv("ic.rho_I", fmt(c.rho_I_in));
    kv("ic.rho_R", fmt(c.rho_R_in));
    for (const auto& r : c.rects)
        kv("ic.rect", std::string(compartment_name(r.compartment)) + " " + fmt(r.x0) + " " + fmt(r.x1) + " " +
                          fmt(r.w0) + " " + fmt(r.w1) + " " + fmt(r.weight));
    kv("popularity.enabled", c.popularity.enabled ? "true" : "false");
    if (c.popularity.enabled) {
        const auto& p = c.popularity;
        kv("popularity.mode", p.offline ? "offline" : "online");
        kv("popularity.mu", fmt(p.params.mu));
        kv("popularity.theta", fmt(p.params.theta));
        kv("popularity.zeta2", fmt(p.params.zeta2));
        kv("popularity.tau_p", fmt(p.params.tau_p));
        kv("popularity.w_hat", fmt(p.params.w_hat));
        kv("popularity.flip", p.params.flip ? "true" : "false");
        kv("popularity.eps_tail", fmt(p.policy.eps_tail));
        kv("popularity.L_min", fmt(p.policy.L_min));
        kv("popularity.N_min", std::to_string(p.policy.N_min));
        kv("popularity.N_max", std::to_string(p.policy.N_max));
        kv("popularity.dv_target", fmt(p.policy.dv_target));
        kv("popularity.v0_max", fmt(p.v0_max));
        kv("popularity.safety", fmt(p.safety));
    }
    kv("output.dir", c.output.dir);
    std::string snaps, diags;
    for (double t : c.output.snapshot_times) snaps += (snaps.empty() ? "" : ",") + fmt(t);
    for (const auto& d : c.output.diagnostics) diags += (diags.empty() ? "" : ",") + d;
    kv("output.snapshot_times", snaps.empty() ? "all" : snaps);
    kv("output.diagnostics", diags.empty() ? "none" : diags);
    return os.str();
}

}  // namespace kinsir
