#pragma once

#include "kinsir/phase_grid.hpp"
#include "kinsir/popularity.hpp"

#include <string>

namespace kinsir {

struct RunArtifacts;

/// Shortest round-trip formatting (17 significant digits).
std::string fmt17(double v);

/// "t,F" CSV text and its inverse.
std::string format_f_series(const FSeries& s);
FSeries parse_f_series(const std::string& text);
FSeries read_f_series(const std::string& path);

/// Snapshot CSV with columns x,w,f_S,f_I,f_R.
void write_snapshot(const std::string& path, const CompartmentField& field);
CompartmentField read_snapshot(const std::string& path);

/// File stem for a snapshot time, e.g. t_000012.500000.
std::string time_stamp(double t);

/// moments.csv, f_series.csv, snapshots/, popularity.csv, pop_snapshots/, diagnostics.csv, manifest.txt.
void emit_csv(const RunArtifacts& art, const std::string& dir);

}  // namespace kinsir
