#include "kinsir/output.hpp"

#include "kinsir/errors.hpp"
#include "kinsir/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace kinsir {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
}

void close_checked(std::ofstream& out, const fs::path& p)
{
    out.close();
    if (!out) throw std::runtime_error("write failed for '" + p.string() + "'");
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

std::string fmt17(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string time_stamp(double t)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "t_%013.6f", t);
    return buf;
}

std::string format_f_series(const FSeries& s)
{
    std::ostringstream os;
    os << "t,F\n";
    for (std::size_t k = 0; k < s.t.size(); ++k) os << fmt17(s.t[k]) << ',' << fmt17(s.F[k]) << '\n';
    return os.str();
}

FSeries parse_f_series(const std::string& text)
{
    FSeries s;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("t,", 0) == 0) continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 2) throw ConfigError("F series: expected two columns in '" + line + "'");
        s.push(std::stod(cells[0]), std::stod(cells[1]));
    }
    if (s.t.empty()) throw ConfigError("F series: no data");
    return s;
}

FSeries read_f_series(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read F series '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_f_series(ss.str());
}

void write_snapshot(const std::string& path, const CompartmentField& field)
{
    auto out = open_out(path);
    const PhaseGrid& g = field.grid;
    out << "x,w,f_S,f_I,f_R\n";
    for (std::size_t i = 0; i < g.nx1(); ++i)
        for (std::size_t j = 0; j < g.nw1(); ++j)
            out << fmt17(g.x[i]) << ',' << fmt17(g.w[j]) << ',' << fmt17(field.at(S, i, j)) << ','
                << fmt17(field.at(I, i, j)) << ',' << fmt17(field.at(R, i, j)) << '\n';
    close_checked(out, path);
}

CompartmentField read_snapshot(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read snapshot '" + path + "'");
    std::string line;
    std::getline(in, line);
    if (line.rfind("x,w,f_S,f_I,f_R", 0) != 0) throw ConfigError("snapshot '" + path + "': unexpected header");
    std::vector<std::array<double, 5>> rows;
    std::set<double> xs, ws;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = split_csv(line);
        if (c.size() != 5) throw ConfigError("snapshot '" + path + "': expected five columns");
        std::array<double, 5> r{};
        for (int k = 0; k < 5; ++k) r[k] = std::stod(c[k]);
        xs.insert(r[0]);
        ws.insert(r[1]);
        rows.push_back(r);
    }
    if (xs.size() < 3 || ws.size() < 5 || rows.size() != xs.size() * ws.size())
        throw ConfigError("snapshot '" + path + "': not a full tensor grid");
    const PhaseGrid g(static_cast<int>(xs.size()) - 1, static_cast<int>(ws.size()) - 1);
    CompartmentField f(g);
    for (std::size_t n = 0; n < rows.size(); ++n)
        for (int J = 0; J < kCompartments; ++J) f.f[J][n] = rows[n][2 + J];
    return f;
}

void emit_csv(const RunArtifacts& art, const std::string& dir)
{
    const fs::path root(dir);
    std::error_code ec;
    fs::create_directories(root / "snapshots", ec);
    if (ec) throw std::runtime_error("cannot create '" + (root / "snapshots").string() + "': " + ec.message());

    {
        const auto p = root / "moments.csv";
        auto out = open_out(p);
        out << "t,rho_S,rho_I,rho_R,m_S,m_I,m_R,m,rho_ptilde,m_ptilde,R_eff,F\n";
        for (const auto& r : art.moments) {
            const Moments& m = r.mom;
            out << fmt17(r.t) << ',' << fmt17(m.rho[S]) << ',' << fmt17(m.rho[I]) << ',' << fmt17(m.rho[R]) << ','
                << fmt17(m.m[S]) << ',' << fmt17(m.m[I]) << ',' << fmt17(m.m[R]) << ',' << fmt17(m.m_total) << ','
                << fmt17(m.rho_ptilde) << ',' << fmt17(m.m_ptilde) << ',' << fmt17(r.R_eff) << ',' << fmt17(r.F)
                << '\n';
        }
        close_checked(out, p);
    }
    {
        const auto p = root / "f_series.csv";
        auto out = open_out(p);
        out << format_f_series(art.f_series);
        close_checked(out, p);
    }
    for (const auto& [t, field] : art.snapshots)
        write_snapshot((root / "snapshots" / (time_stamp(t) + ".csv")).string(), field);
    if (art.target) write_snapshot((root / "equilibrium.csv").string(), *art.target);

    if (art.has_popularity) {
        fs::create_directories(root / "pop_snapshots", ec);
        if (ec) throw std::runtime_error("cannot create '" + (root / "pop_snapshots").string() + "'");
        const auto p = root / "popularity.csv";
        auto out = open_out(p);
        out << "t,mass,m_p,e_p,F\n";
        for (const auto& r : art.pop_records)
            out << fmt17(r.t) << ',' << fmt17(r.mom.mass) << ',' << fmt17(r.mom.m_p) << ',' << fmt17(r.mom.e_p)
                << ',' << fmt17(r.F) << '\n';
        close_checked(out, p);
        for (std::size_t k = 0; k < art.pop_states.size() && k < art.pop_records.size(); ++k) {
            const auto sp = root / "pop_snapshots" / (time_stamp(art.pop_records[k].t) + ".csv");
            auto so = open_out(sp);
            so << "v,h\n";
            const auto& f = art.pop_states[k];
            for (std::size_t q = 0; q < f.h.size(); ++q) so << fmt17(f.grid.v[q]) << ',' << fmt17(f.h[q]) << '\n';
            close_checked(so, sp);
        }
    }

    if (!art.config.output.diagnostics.empty()) {
        const auto p = root / "diagnostics.csv";
        auto out = open_out(p);
        out << "t,metric,value\n";
        for (const auto& d : art.diagnostics) out << fmt17(d.t) << ',' << d.metric << ',' << fmt17(d.value) << '\n';
        close_checked(out, p);
    }

    const auto p = root / "manifest.txt";
    auto out = open_out(p);
    out << "# effective configuration\n" << echo_config(art.config);
    out << "# run\n";
    out << "grid.x_nodes = " << art.grid.nx1() << "\n";
    out << "grid.w_nodes = " << art.grid.nw1() << "\n";
    out << "steps = " << art.steps << "\n";
    out << "dt_min = " << fmt17(art.dt_min) << "\n";
    out << "dt_max_used = " << fmt17(art.dt_max) << "\n";
    out << "t_final = " << fmt17(art.moments.back().t) << "\n";
    out << "f_series_length = " << art.f_series.t.size() << "\n";
    out << "output_count = " << art.moments.size() << "\n";
    if (art.target) {
        out << "equilibrium = " << art.target_kind << "\n";
        out << "l1_excludes_endpoints = " << (art.exclude_endpoints ? "true" : "false") << "\n";
    }
    if (art.has_popularity) {
        out << "popularity.L = " << fmt17(art.pop_grid.L) << "\n";
        out << "popularity.N = " << art.pop_grid.N << "\n";
        out << "popularity.steps = " << art.pop_steps << "\n";
    }
    if (art.config.wants("waves")) {
        out << "waves = " << art.waves.size() << "\n";
        out << "R_eff_crossings = " << art.reff_crossings << "\n";
    }
    close_checked(out, p);
}

}  // namespace kinsir
