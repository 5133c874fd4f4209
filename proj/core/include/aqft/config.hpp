#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "aqft/algebra.hpp"

namespace aqft {

/// Batch-run configuration, read from a flat key = value file.
///
/// Recognised keys:
///   n_x, n_t          lattice extents
///   dx, dt, mass      spacings and mass
///   seed              RNG seed (unsigned 64-bit)
///   statistics        "bosonic" | "fermionic"
///   source            repeatable; "t x value" triple of the source J
///   window            "t_a t_b" slice window for the timeslice command
///   out               output directory
///   n_max             highest moment order (default 6)
///   samples           number of seeded random observables (default 8)
///   check_demo, check_moments, check_causality, check_timeslice
///                     on/off switches, default on
struct RunConfig {
  int n_x = 16;
  int n_t = 64;
  double dx = 1.0;
  double dt = 0.5;
  double mass = 1.0;
  std::uint64_t seed = 1;
  Statistics statistics = Statistics::bosonic;
  std::vector<std::tuple<int, int, double>> sources;
  int window_begin = -1;
  int window_end = -1;
  std::string out_dir = ".";
  int n_max = 6;
  int samples = 8;
  bool check_demo = true;
  bool check_moments = true;
  bool check_causality = true;
  bool check_timeslice = true;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Builds the lattice and validates the config against its invariants.
LatticeSpacetime make_lattice(const RunConfig& config);

/// Source section from the config triples; must respect the
/// compact-support margin.
Section make_source(const RunConfig& config, const LatticeSpacetime& lat);

}  // namespace aqft
