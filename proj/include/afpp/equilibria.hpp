#pragma once

#include <string_view>
#include <vector>

#include "afpp/model.hpp"

namespace afpp {

/// Real roots of a x^3 + b x^2 + c x + d, ascending, with near-coincident
/// roots (within 1e-8) collapsed. Throws DegenerateCoefficient when a == 0.
std::vector<double> solve_cubic(double a, double b, double c, double d);

/// Real roots of a x^2 + b x + c (a != 0), ascending. A double root is
/// reported once.
std::vector<double> solve_quadratic(double a, double b, double c);

enum class EquilibriumKind { Trivial, AxialPrey, AxialPredator, Interior };

std::string_view to_string(EquilibriumKind kind);

struct Equilibrium {
  State point;
  EquilibriumKind kind = EquilibriumKind::Trivial;
  double residual = 0.0;  // max |vector_field| at point
};

/// E0, E1, the prey-free E2 when it exists, and every interior point, in
/// that order; interior points sorted by x.
std::vector<Equilibrium> equilibria_all(const ModelParams& p, SystemKind kind);

/// Interior prey coordinate of the initial system from its closed form.
double initial_interior_x(double gamma, double epsilon, double delta, double m);

/// Vertical asymptote of the prey nullcline.
double prey_nullcline_pole(const ModelParams& p);

/// Throws DomainError within 1e-12 of the pole.
double prey_nullcline(const ModelParams& p, double x);

double predator_nullcline(const ModelParams& p, double x);

enum class NullclineShapeKind { Monotone, CrestTrough };

struct NullclineShape {
  NullclineShapeKind kind;
  double threshold;  // 4 eps + sqrt(16 eps^2 + 27 (1 + alpha xi))
};

NullclineShape nullcline_shape(const ModelParams& p);

/// delta xi - m (1 + alpha xi) > -gamma^2 (delta - m)
bool interior_existence_condition(const ModelParams& p);

double residual_at(const ModelParams& p, const State& s, SystemKind kind);

}  // namespace afpp
