#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "afpp/integrator.hpp"
#include "afpp/model.hpp"

namespace afpp {

/// Quality controls alpha with xi fixed; Quantity controls xi with alpha fixed.
enum class ControlMode { Quality, Quantity };

std::string_view to_string(ControlMode m);

struct OCProblem {
  ControlMode mode = ControlMode::Quality;
  double u_min = 0.0;
  double u_max = 2.0;
  ModelParams params;  // the controlled entry is ignored
  State s0;
  State sf;
  double endpoint_tol = 1e-2;

  void validate() const;
  friend bool operator==(const OCProblem&, const OCProblem&) = default;
};

struct Costate {
  double p = 0.0;
  double q = 0.0;
};

/// params with the controlled entry set to u.
ModelParams with_control(const ModelParams& params, double u, ControlMode mode);

/// dt/ds = 1 + x^2 + alpha xi + eps y.
double time_scale(const ModelParams& params, const State& s, double u, ControlMode mode);

/// Dynamics in the rescaled time s.
Vec2 reparameterized_field(const ModelParams& params, const State& s, double u, ControlMode mode);

// lambda0 weights the running cost dt/ds. The default 0 gives the bilinear
// form p F1 + q F2 alone; lambda0 = 1 is the normal time-optimal case.
double hamiltonian(const ModelParams& params, const State& s, const Costate& c, double u, ControlMode mode,
                   double lambda0 = 0.0);

/// (dp/ds, dq/ds) = -grad_(x,y) of the hamiltonian.
Vec2 costate_rhs(const ModelParams& params, const State& s, const Costate& c, double u, ControlMode mode,
                 double lambda0 = 0.0);

/// d hamiltonian / du. The hamiltonian is affine in u, so this does not
/// depend on u (u is read from params only through the other entry).
double switching_function(const ModelParams& params, const State& s, const Costate& c, ControlMode mode,
                          double lambda0 = 0.0);

/// y = 2 delta x (1 - x/gamma)^2 / (m (1 - m)). nullopt for m > 1 where the
/// curve leaves the positive quadrant. Throws DomainError at m = 1 or for x
/// outside [0, gamma].
std::optional<double> singular_arc_quality(const ModelParams& params, double x);

struct ReparameterizedRun {
  std::vector<double> s;  // rescaled time
  std::vector<double> t;  // accumulated physical time
  std::vector<State> states;
};

/// Integrates the rescaled dynamics together with t(s) for a constant control.
ReparameterizedRun integrate_reparameterized(const ModelParams& params, const State& s0, double u, ControlMode mode,
                                             double s_end, const Tolerances& tol = {});

struct OCDiagnostics {
  int restart = -1;  // index of the restart that produced the solution
  int outer_iterations = 0;
  int inner_iterations = 0;
  bool converged = false;
  double constraint = 0.0;          // (|x(T) - sf|^2 - r^2) / (2r) at the internal radius
  double projected_gradient = 0.0;  // of the final augmented Lagrangian
  double endpoint_miss = 0.0;       // re-simulated with the tight integrator
  double max_defect = 0.0;          // largest per-interval mismatch on re-simulation
  double multiplier = 0.0;          // endpoint-ball multiplier
};

struct OCSolution {
  double T = 0.0;
  std::vector<double> node_times;  // n_nodes + 1
  std::vector<State> states;       // at node_times
  std::vector<double> controls;    // one per interval
  std::vector<Costate> costates;   // at node_times, normal case
  std::vector<double> switching;   // interval averages, normal case
  std::vector<double> switch_times;
  Costate endpoint_costate;
  OCDiagnostics diag;
};

class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, OCSolution best) : std::runtime_error(what), best_(std::move(best)) {}
  const OCSolution& best() const { return best_; }

 private:
  OCSolution best_;
};

class NonConvergence : public OptimizationError {
  using OptimizationError::OptimizationError;
};

class InfeasibleEndpoint : public OptimizationError {
  using OptimizationError::OptimizationError;
};

struct SolveOptions {
  unsigned threads = 1;
  int max_outer = 60;
  int max_inner = 400;
  double inner_tol = 1e-8;
  double kkt_tol = 1e-5;  // projected-gradient bound for convergence
  // Extra restart, resampled onto the node grid, tried after the constant ones.
  std::optional<std::pair<double, std::vector<double>>> warm_start;
};

/// Single shooting with piecewise-constant control and free final time.
/// Throws InvalidParameter for n_nodes < 20, InfeasibleEndpoint when no
/// restart reaches the endpoint ball and NonConvergence when the best
/// feasible restart did not satisfy the stationarity test.
OCSolution solve(const OCProblem& oc, int n_nodes = 60, const SolveOptions& opt = {});

struct PMPReport {
  double bang_fraction = 0.0;
  double sign_consistency = 0.0;  // normal case
  std::size_t sign_nodes = 0;     // nodes with |sigma| > 1e-3
  double sign_consistency_abnormal = 0.0;
  std::size_t sign_nodes_abnormal = 0;
  std::vector<double> switch_times;
  std::vector<std::pair<double, double>> singular_windows;
  std::vector<double> singular_curve_crossings;  // Quality mode with m < 1
  double hamiltonian_min = 0.0;
  double hamiltonian_max = 0.0;
};

PMPReport verify_pmp(const OCSolution& sol, const OCProblem& oc);

/// Costates at the node times and interval-averaged switching function
/// from a backward pass started at the endpoint costate.
std::pair<std::vector<Costate>, std::vector<double>> costate_pass(const OCSolution& sol, const OCProblem& oc,
                                                                  double lambda0);

}  // namespace afpp
