#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afpp/integrator.hpp"
#include "afpp/stability.hpp"

namespace afpp {

enum class CellOutcome { InteriorStable, AxialPreyStable, PreyEliminated, LimitCycle, Mixed };

std::string_view to_string(CellOutcome o);

struct ClassifiedEquilibrium {
  Equilibrium eq;
  StabilityClass cls;
};

/// Empty axes keep the base value.
struct SweepGrid {
  std::vector<double> alpha;
  std::vector<double> xi;
  std::vector<double> epsilon;

  std::size_t size() const;
  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct SweepOptions {
  SystemKind kind = SystemKind::AdditionalFood;
  OutcomeOptions outcome{};
  // A settled prey density below this counts as prey elimination.
  double prey_elimination_x = 1e-2;
  // Distance within which a simulated point is matched to an equilibrium.
  double match_tol = 1e-6;
  unsigned threads = 1;
};

struct AtlasCell {
  std::size_t index = 0;
  double alpha = 0.0, xi = 0.0, epsilon = 0.0;
  CellOutcome outcome = CellOutcome::Mixed;
  std::vector<ClassifiedEquilibrium> equilibria;
  std::vector<AsymptoticOutcome> simulated;  // one per initial state
  std::optional<std::string> error;
};

/// Classifies one parameter set: analytic equilibria plus simulated
/// attractors from each initial state. Errors are stored in the cell.
AtlasCell analyze_cell(const ModelParams& p, const std::vector<State>& initial, const SweepOptions& opt);

/// Cells in grid order (alpha slowest, epsilon fastest), computed on
/// opt.threads workers.
std::vector<AtlasCell> sweep(const ModelParams& base, const SweepGrid& grid, const std::vector<State>& initial,
                             const SweepOptions& opt = {});

}  // namespace afpp
