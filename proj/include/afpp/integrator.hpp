#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "afpp/model.hpp"

namespace afpp {

struct Tolerances {
  double abs = 1e-9;
  double rel = 1e-7;
  // Near an equilibrium the error estimate vanishes and the step would grow
  // until the explicit scheme goes unstable; this caps it.
  double max_step = 0.5;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

enum class TerminalReason { TimeExhausted, ConvergedToPoint, CycleDetected };

std::string_view to_string(TerminalReason r);

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  TerminalReason reason = TerminalReason::TimeExhausted;
  SystemKind kind = SystemKind::AdditionalFood;
};

using PlanarRhs = std::function<Vec2(const Vec2&)>;

/// Adaptive DP5(4) integration of an arbitrary planar field. Without sample
/// times every accepted step is recorded; otherwise only the (sorted)
/// samples, filled by cubic Hermite interpolation. Components that land in
/// [-1e-12, 0) are clamped to zero after each step. Throws IntegrationError
/// on step-size underflow (h < 1e-14) or non-finite state.
Trajectory integrate_field(const PlanarRhs& f, const Vec2& s0, double t_end, const Tolerances& tol = {},
                           const std::vector<double>& sample_times = {});

Trajectory integrate(const ModelParams& p, const State& s0, SystemKind kind, double t_end,
                     const Tolerances& tol = {}, const std::vector<double>& sample_times = {});

struct BoundednessCertificate {
  double K_choice = 0.0;
  double M = 0.0;
  double W0 = 0.0;
  double W_max = 0.0;
  double bound = 0.0;
};

/// Checks x, y >= -1e-12 at every sample and W = x + y/delta against
/// max(W(0), M/K) with K = m/2. Throws BoundednessViolation naming the first
/// offending sample.
BoundednessCertificate check_positivity_boundedness(const Trajectory& traj, const ModelParams& p);

enum class OutcomeKind { Point, LimitCycle, Undetermined };

std::string_view to_string(OutcomeKind k);

struct AsymptoticOutcome {
  OutcomeKind kind = OutcomeKind::Undetermined;
  TerminalReason reason = TerminalReason::TimeExhausted;
  State point;            // Point: final state; LimitCycle: state at the last peak
  double period = 0.0;    // LimitCycle only
  double amplitude = 0.0; // LimitCycle only, max x - min x over the last cycle
  double t_final = 0.0;
  std::vector<double> peaks;  // x maxima found, for diagnostics
};

struct OutcomeOptions {
  double t_end = 1e4;
  Tolerances tol{1e-12, 1e-11};
  double point_tol = 1e-9;
  double peak_rel_tol = 1e-6;
  double min_amplitude = 1e-4;
};

/// Integrates until the state settles on a point, the x maxima repeat, or
/// t_end is reached.
AsymptoticOutcome asymptotic_outcome(const ModelParams& p, const State& s0, SystemKind kind,
                                     const OutcomeOptions& opt = {});

}  // namespace afpp
