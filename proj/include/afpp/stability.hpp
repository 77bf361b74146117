#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "afpp/equilibria.hpp"

namespace afpp {

enum class StabilityKind { StableNode, StableFocus, UnstableNode, UnstableFocus, Saddle, NonHyperbolic };

std::string_view to_string(StabilityKind kind);

struct StabilityClass {
  StabilityKind kind = StabilityKind::NonHyperbolic;
  std::array<std::complex<double>, 2> eigenvalues{};

  bool stable() const { return kind == StabilityKind::StableNode || kind == StabilityKind::StableFocus; }
  bool unstable_spiral_or_node() const {
    return kind == StabilityKind::UnstableNode || kind == StabilityKind::UnstableFocus;
  }
  double max_real() const { return std::max(eigenvalues[0].real(), eigenvalues[1].real()); }
};

/// Eigenvalues from the characteristic polynomial l^2 - tr l + det.
std::array<std::complex<double>, 2> eigenvalues_2x2(const Mat2& J);

/// Classification by eigenvalue signs. Any |Re| below 1e-9 is
/// NonHyperbolic; |Im| above 1e-9 makes a focus.
StabilityClass classify_matrix(const Mat2& J);

StabilityClass classify(const ModelParams& p, const Equilibrium& e, SystemKind kind);

/// Conclusion drawn by a stability claim about the interior equilibrium.
enum class Prediction { Stable, Unstable, Saddle, Silent };

std::string_view to_string(Prediction p);

/// True when the classification agrees with a (non-silent) prediction.
bool agrees(Prediction p, const StabilityClass& c);

struct TheoremClaim {
  std::string name;
  bool hypotheses_hold = false;
  Prediction conclusion = Prediction::Silent;
  // False for claims whose conclusion does not follow from their hypotheses
  // in general; they are evaluated and reported but never decide.
  bool definite = true;
};

struct TheoremReport {
  std::vector<TheoremClaim> claims;
  Prediction prediction = Prediction::Silent;
  std::vector<std::string> fired;  // definite claims whose hypotheses hold

  bool delta_exceeds_2m = false;
  double food_margin = 0.0;  // delta xi - m (1 + alpha xi)

  // Initial system: 2m x^2 - ((2m - delta) gamma + m eps delta) x + m eps delta gamma
  std::array<double, 3> trace_quadratic{};
  double trace_quadratic_discriminant = 0.0;
  std::vector<double> trace_quadratic_roots;

  // Additional-food system.
  double interference_factor = 0.0;       // 1 + (alpha - 1) xi
  std::optional<double> epsilon_bound;    // (-2/y)(1 - x/gamma)(1 + (alpha-1) xi) when positive
  bool in_omega = false;
  std::array<double, 4> trace_cubic{};    // coefficients of the trace numerator
  std::vector<double> trace_cubic_roots;  // all real roots, ascending
  double trace_numerator = 0.0;           // trace cubic at x*
  double determinant_numerator = 0.0;
};

/// Evaluates the interior-equilibrium stability lemma and theorems for the
/// given system. Throws InvalidParameter unless e is Interior.
TheoremReport theorem_predicates(const ModelParams& p, const Equilibrium& e, SystemKind kind);

enum class RegionLabel { I, II, III, IV };

std::string_view to_string(RegionLabel r);

/// Region of the initial-system parameter space (xi and alpha ignored).
RegionLabel region_of(const ModelParams& p);

/// Trace of the initial-system Jacobian at its interior equilibrium, or
/// nullopt when the interior equilibrium does not exist.
std::optional<double> initial_interior_trace(double gamma, double epsilon, double delta, double m);

/// Gamma in the bracket where the interior trace vanishes. Returns nullopt
/// when delta > 2m. Throws NoSignChange when the bracket does not straddle
/// a sign change.
std::optional<double> find_hopf_gamma(double epsilon, double delta, double m, std::pair<double, double> bracket);

/// xi on delta xi - m (1 + alpha xi) = 0; nullopt unless delta - m alpha > 0.
std::optional<double> pec_xi(const ModelParams& base, double alpha);

/// xi on delta xi - m (1 + alpha xi) = -(delta - m) gamma^2; nullopt when
/// that xi is not positive.
std::optional<double> tbc_xi(const ModelParams& base, double alpha);

}  // namespace afpp
