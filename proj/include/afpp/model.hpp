#pragma once

#include <Eigen/Dense>

#include "afpp/errors.hpp"

namespace afpp {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

using Vec2 = Vector2<double>;
using Mat2 = Matrix2<double>;

/// Handling times and encounter rates of a single forager.
struct ForagingParams {
  double h_N = 1.0;  // handling time per prey item
  double h_A = 1.0;  // handling time per unit additional food
  double h_P = 1.0;  // time lost per predator-predator encounter
  double e_N = 1.0;  // search rate per unit squared prey density
  double e_A = 1.0;  // search rate per unit additional food
  double e_P = 1.0;  // predator encounter rate constant

  void validate() const;
};

struct FunctionalResponse {
  double g;  // prey consumption rate
  double h;  // additional-food consumption rate
};

/// Sigmoidal (type-III) consumption of prey and additional food with
/// predator interference in the shared denominator.
FunctionalResponse holling3_rates(const ForagingParams& fp, double N, double P, double A);

struct DimensionalParams {
  double r = 1.0;       // prey intrinsic growth rate
  double K = 1.0;       // prey carrying capacity
  double a = 1.0;       // half-saturation density
  double c = 1.0;       // maximum predation rate
  double delta1 = 1.5;  // maximum predator growth rate
  double m1 = 0.5;      // predator mortality
  double eta = 0.0;     // effectual-food coefficient
  double A = 0.0;       // additional food biomass
  double eps1 = 0.0;    // mutual-interference strength

  void validate() const;
};

struct ModelParams {
  double gamma = 1.0;
  double xi = 0.0;
  double alpha = 0.0;
  double epsilon = 0.5;
  double delta = 8.0;
  double m = 6.0;

  /// Throws InvalidParameter unless gamma > 0, xi >= 0, alpha >= 0,
  /// epsilon > 0 and delta > m > 0.
  void validate() const;

  /// Quality/quantity coupling that appears in every denominator.
  double alpha_xi() const { return alpha * xi; }

  /// delta*xi - m*(1 + alpha*xi); its sign decides whether the prey-free
  /// equilibrium exists.
  double food_margin() const { return delta * xi - m * (1.0 + alpha * xi); }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct State {
  double x = 0.0;
  double y = 0.0;

  Vec2 vec() const { return {x, y}; }
  static State from(const Vec2& v) { return {v.x(), v.y()}; }

  /// Throws DomainError for a negative component.
  void validate() const;

  friend bool operator==(const State&, const State&) = default;
};

enum class SystemKind { Initial, AdditionalFood };

/// Nondimensional parameters from the dimensional model. Alpha is the food
/// quality ratio and is passed through unchanged.
ModelParams nondimensionalize(const DimensionalParams& dp, double alpha = 0.0);

/// Parameters actually seen by the vector field; Initial zeroes xi.
inline ModelParams effective(const ModelParams& p, SystemKind kind) {
  if (kind == SystemKind::Initial) {
    ModelParams q = p;
    q.xi = 0.0;
    return q;
  }
  return p;
}

/// Right-hand side without domain checks. Used on integrator stages where
/// roundoff may push a component a hair below zero.
template <typename Scalar>
Vector2<Scalar> field(const ModelParams& params, const Vector2<Scalar>& s, SystemKind kind) {
  const ModelParams p = effective(params, kind);
  const Scalar x = s(0);
  const Scalar y = s(1);
  const Scalar gamma(p.gamma), xi(p.xi), eps(p.epsilon), delta(p.delta), m(p.m);
  const Scalar axi = Scalar(p.alpha) * xi;
  const Scalar denom = Scalar(1) + x * x + axi + eps * y;
  Vector2<Scalar> out;
  out(0) = x * (Scalar(1) - x / gamma) - x * x * y / denom;
  out(1) = delta * (x * x + xi) * y / denom - m * y;
  return out;
}

/// Analytic Jacobian of `field`.
template <typename Scalar>
Matrix2<Scalar> field_jacobian(const ModelParams& params, const Vector2<Scalar>& s, SystemKind kind) {
  const ModelParams p = effective(params, kind);
  const Scalar x = s(0);
  const Scalar y = s(1);
  const Scalar gamma(p.gamma), xi(p.xi), alpha(p.alpha), eps(p.epsilon), delta(p.delta), m(p.m);
  const Scalar axi = alpha * xi;
  const Scalar denom = Scalar(1) + x * x + axi + eps * y;
  const Scalar d2 = denom * denom;
  Matrix2<Scalar> J;
  J(0, 0) = Scalar(1) - Scalar(2) * x / gamma - Scalar(2) * x * y * (Scalar(1) + axi + eps * y) / d2;
  J(0, 1) = -x * x * (Scalar(1) + x * x + axi) / d2;
  J(1, 0) = Scalar(2) * delta * x * y * (Scalar(1) + (alpha - Scalar(1)) * xi + eps * y) / d2;
  J(1, 1) = delta * (x * x + xi) * (Scalar(1) + x * x + axi) / d2 - m;
  return J;
}

/// (dx/dt, dy/dt). Throws DomainError for negative densities.
Vec2 vector_field(const ModelParams& p, const State& s, SystemKind kind);

Mat2 jacobian(const ModelParams& p, const State& s, SystemKind kind);

/// Dimensional right-hand side (dN/dT, dP/dT) for the quality ratio alpha.
Vec2 dimensional_field(const DimensionalParams& dp, double alpha, const Vec2& NP);

/// x = N/a, y = c P/(a r).
State to_nondimensional_state(const DimensionalParams& dp, const Vec2& NP);

}  // namespace afpp
