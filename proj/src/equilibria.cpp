#include "afpp/equilibria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace afpp {

namespace {

constexpr double kRootMergeTol = 1e-8;

double eval_cubic(double a, double b, double c, double d, double x) { return ((a * x + b) * x + c) * x + d; }

double polish_cubic(double a, double b, double c, double d, double x) {
  for (int it = 0; it < 8; ++it) {
    const double f = eval_cubic(a, b, c, d, x);
    const double df = (3.0 * a * x + 2.0 * b) * x + c;
    if (f == 0.0 || df == 0.0) break;
    const double next = x - f / df;
    if (!std::isfinite(next) || std::abs(eval_cubic(a, b, c, d, next)) >= std::abs(f)) break;
    x = next;
  }
  return x;
}

std::vector<double> merge_sorted(std::vector<double> roots) {
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back()) <= kRootMergeTol * std::max(1.0, std::abs(r))) continue;
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<double> solve_quadratic(double a, double b, double c) {
  if (a == 0.0) throw DegenerateCoefficient("leading coefficient of quadratic is zero");
  const double disc = b * b - 4.0 * a * c;
  const double tiny = 1e-14 * (b * b + std::abs(4.0 * a * c));
  if (disc < -tiny) return {};
  if (disc <= tiny) return {-b / (2.0 * a)};
  // Avoid cancellation between -b and the root of the discriminant.
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> roots;
  roots.push_back(q / a);
  if (q != 0.0) roots.push_back(c / q);
  else roots.push_back(0.0);
  return merge_sorted(std::move(roots));
}

std::vector<double> solve_cubic(double a, double b, double c, double d) {
  if (a == 0.0) throw DegenerateCoefficient("leading coefficient of cubic is zero");
  if (d == 0.0) {
    std::vector<double> roots = solve_quadratic(a, b, c);
    roots.push_back(0.0);
    return merge_sorted(std::move(roots));
  }

  const double B = b / a, C = c / a, D = d / a;
  const double Q = (B * B - 3.0 * C) / 9.0;
  const double R = (B * (2.0 * B * B - 9.0 * C) + 27.0 * D) / 54.0;
  const double Q3 = Q * Q * Q;

  // One real root, taken as the largest in magnitude so deflation is stable.
  double lead;
  if (R * R < Q3) {
    const double theta = std::acos(std::clamp(R / std::sqrt(Q3), -1.0, 1.0));
    const double s = -2.0 * std::sqrt(Q);
    const std::array<double, 3> t = {s * std::cos(theta / 3.0) - B / 3.0,
                                     s * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - B / 3.0,
                                     s * std::cos((theta - 2.0 * std::numbers::pi) / 3.0) - B / 3.0};
    lead = *std::max_element(t.begin(), t.end(), [](double u, double v) { return std::abs(u) < std::abs(v); });
  } else {
    const double A = -std::copysign(std::cbrt(std::abs(R) + std::sqrt(R * R - Q3)), R);
    const double Bc = (A == 0.0) ? 0.0 : Q / A;
    lead = (A + Bc) - B / 3.0;
  }
  lead = polish_cubic(a, b, c, d, lead);

  // Synthetic division by (x - lead).
  const double q1 = b + a * lead;
  const double q0 = c + q1 * lead;
  std::vector<double> roots = solve_quadratic(a, q1, q0);
  for (double& r : roots) r = polish_cubic(a, b, c, d, r);
  roots.push_back(lead);
  return merge_sorted(std::move(roots));
}

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Trivial: return "trivial";
    case EquilibriumKind::AxialPrey: return "axial_prey";
    case EquilibriumKind::AxialPredator: return "axial_predator";
    case EquilibriumKind::Interior: return "interior";
  }
  return "unknown";
}

double residual_at(const ModelParams& p, const State& s, SystemKind kind) {
  return field<double>(p, s.vec(), kind).cwiseAbs().maxCoeff();
}

double initial_interior_x(double gamma, double epsilon, double delta, double m) {
  const double lead = (delta - m) * gamma + delta * epsilon;
  const double egd = epsilon * gamma * delta;
  return (egd + std::sqrt(egd * egd + 4.0 * m * gamma * lead)) / (2.0 * lead);
}

std::vector<Equilibrium> equilibria_all(const ModelParams& params, SystemKind kind) {
  params.validate();
  const ModelParams p = effective(params, kind);
  std::vector<Equilibrium> out;
  auto push = [&](State s, EquilibriumKind k) { out.push_back({s, k, residual_at(p, s, kind)}); };

  push({0.0, 0.0}, EquilibriumKind::Trivial);
  push({p.gamma, 0.0}, EquilibriumKind::AxialPrey);

  const double margin = p.food_margin();
  if (kind == SystemKind::AdditionalFood && margin > 0.0)
    push({0.0, margin / (p.m * p.epsilon)}, EquilibriumKind::AxialPredator);

  const double g = p.gamma, e = p.epsilon, dl = p.delta, m = p.m;
  if (p.xi == 0.0) {
    const double x = initial_interior_x(g, e, dl, m);
    const double y = ((dl - m) * x * x - m) / (m * e);
    if (x > 0.0 && y > 0.0) push({x, y}, EquilibriumKind::Interior);
    return out;
  }

  const double lead = g * (dl - m) + e * dl;
  const std::vector<double> roots =
      solve_cubic(lead, -e * dl * g, e * dl * p.xi + g * margin, -e * dl * g * p.xi);
  for (double x : roots) {
    if (!(x > 0.0)) continue;
    const double y = predator_nullcline(p, x);
    if (y > 0.0) push({x, y}, EquilibriumKind::Interior);
  }
  return out;
}

double prey_nullcline_pole(const ModelParams& p) { return p.epsilon / (1.0 + p.epsilon / p.gamma); }

double prey_nullcline(const ModelParams& p, double x) {
  const double pole = prey_nullcline_pole(p);
  if (std::abs(x - pole) < 1e-12) throw DomainError("prey nullcline evaluated at its asymptote");
  return (1.0 - x / p.gamma) * (1.0 + x * x + p.alpha_xi()) / ((1.0 + p.epsilon / p.gamma) * x - p.epsilon);
}

double predator_nullcline(const ModelParams& p, double x) {
  return ((p.delta - p.m) * x * x + p.food_margin()) / (p.m * p.epsilon);
}

NullclineShape nullcline_shape(const ModelParams& p) {
  const double e = p.epsilon;
  const double threshold = 4.0 * e + std::sqrt(16.0 * e * e + 27.0 * (1.0 + p.alpha_xi()));
  return {p.gamma > threshold ? NullclineShapeKind::CrestTrough : NullclineShapeKind::Monotone, threshold};
}

bool interior_existence_condition(const ModelParams& p) {
  return p.food_margin() > -p.gamma * p.gamma * (p.delta - p.m);
}

}  // namespace afpp
