#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "afpp/atlas.hpp"
#include "afpp/integrator.hpp"
#include "afpp/optimal_control.hpp"

namespace afpp {

/// Shortest form is not used on purpose: 17 significant digits everywhere.
std::string format_double(double v);

void write_csv_row(std::ostream& os, const std::vector<double>& row);

/// Columns t, x, y.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

struct NullclineOptions {
  double x_min = 0.0;
  double x_max = 0.0;  // 0 means gamma
  int samples = 200;
  friend bool operator==(const NullclineOptions&, const NullclineOptions&) = default;
};

struct RunConfig {
  int version = 1;
  ModelParams params;
  SystemKind kind = SystemKind::AdditionalFood;

  // simulate
  State s0{0.5, 0.5};
  double t_end = 100.0;
  double sample_dt = 0.1;  // 0 records every accepted step
  Tolerances tol{};

  // sweep
  SweepGrid grid{};
  std::vector<State> initial;  // empty: `random_initial` draws from the seed
  int random_initial = 4;
  double random_x_max = 0.0;  // 0 means gamma
  double random_y_max = 5.0;

  // optctl
  OCProblem oc{};
  int n_nodes = 60;

  NullclineOptions nullclines{};

  std::uint64_t seed = 0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline constexpr int kConfigVersion = 1;

/// Throws ConfigError on malformed input, unknown keys or a wrong version.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

RunConfig load_config(const std::string& path);

/// Initial states of a sweep: the configured list, or seeded uniform draws
/// in (0, random_x_max] x (0, random_y_max].
std::vector<State> sweep_initial_states(const RunConfig& cfg);

}  // namespace afpp
