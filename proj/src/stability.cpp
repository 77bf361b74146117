#include "afpp/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace afpp {

namespace {

constexpr double kHyperbolicTol = 1e-9;

bool strictly_between(double lo, double v, double hi) { return lo < v && v < hi; }

}  // namespace

std::string_view to_string(StabilityKind kind) {
  switch (kind) {
    case StabilityKind::StableNode: return "stable_node";
    case StabilityKind::StableFocus: return "stable_focus";
    case StabilityKind::UnstableNode: return "unstable_node";
    case StabilityKind::UnstableFocus: return "unstable_focus";
    case StabilityKind::Saddle: return "saddle";
    case StabilityKind::NonHyperbolic: return "non_hyperbolic";
  }
  return "unknown";
}

std::string_view to_string(Prediction p) {
  switch (p) {
    case Prediction::Stable: return "stable";
    case Prediction::Unstable: return "unstable";
    case Prediction::Saddle: return "saddle";
    case Prediction::Silent: return "silent";
  }
  return "unknown";
}

std::string_view to_string(RegionLabel r) {
  switch (r) {
    case RegionLabel::I: return "I";
    case RegionLabel::II: return "II";
    case RegionLabel::III: return "III";
    case RegionLabel::IV: return "IV";
  }
  return "?";
}

std::array<std::complex<double>, 2> eigenvalues_2x2(const Mat2& J) {
  const double tr = J.trace();
  const double det = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
  const double half = 0.5 * tr;
  // Off-diagonal form of the discriminant keeps triangular matrices exact.
  const double diff = 0.5 * (J(0, 0) - J(1, 1));
  const double disc = diff * diff + J(0, 1) * J(1, 0);
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    const double big = half + std::copysign(root, half == 0.0 ? 1.0 : half);
    const double small = (big != 0.0) ? det / big : half - std::copysign(root, half == 0.0 ? 1.0 : half);
    std::array<std::complex<double>, 2> ev{std::complex<double>(small), std::complex<double>(big)};
    if (ev[0].real() > ev[1].real()) std::swap(ev[0], ev[1]);
    return ev;
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half, -im), std::complex<double>(half, im)};
}

StabilityClass classify_matrix(const Mat2& J) {
  StabilityClass out;
  out.eigenvalues = eigenvalues_2x2(J);
  const double r0 = out.eigenvalues[0].real();
  const double r1 = out.eigenvalues[1].real();
  const bool focus = std::abs(out.eigenvalues[0].imag()) > kHyperbolicTol;
  if (std::min(std::abs(r0), std::abs(r1)) < kHyperbolicTol) {
    out.kind = StabilityKind::NonHyperbolic;
  } else if ((r0 < 0.0) != (r1 < 0.0)) {
    out.kind = StabilityKind::Saddle;
  } else if (r0 < 0.0) {
    out.kind = focus ? StabilityKind::StableFocus : StabilityKind::StableNode;
  } else {
    out.kind = focus ? StabilityKind::UnstableFocus : StabilityKind::UnstableNode;
  }
  return out;
}

StabilityClass classify(const ModelParams& p, const Equilibrium& e, SystemKind kind) {
  return classify_matrix(field_jacobian<double>(p, e.point.vec(), kind));
}

bool agrees(Prediction p, const StabilityClass& c) {
  switch (p) {
    case Prediction::Stable: return c.stable();
    case Prediction::Unstable: return c.unstable_spiral_or_node();
    case Prediction::Saddle: return c.kind == StabilityKind::Saddle;
    case Prediction::Silent: return true;
  }
  return false;
}

TheoremReport theorem_predicates(const ModelParams& params, const Equilibrium& e, SystemKind kind) {
  if (e.kind != EquilibriumKind::Interior) throw InvalidParameter("theorem predicates apply to interior equilibria");
  const ModelParams p = effective(params, kind);
  const double g = p.gamma, xi = p.xi, al = p.alpha, eps = p.epsilon, dl = p.delta, m = p.m;
  const double x = e.point.x, y = e.point.y;

  TheoremReport rep;
  rep.delta_exceeds_2m = dl > 2.0 * m;
  rep.food_margin = p.food_margin();
  const bool weak_growth = m < dl && dl < 2.0 * m;

  auto add = [&](std::string name, bool hyp, Prediction concl, bool definite) {
    rep.claims.push_back({std::move(name), hyp, concl, definite});
  };

  if (kind == SystemKind::Initial) {
    const double qa = 2.0 * m;
    const double qb = -((2.0 * m - dl) * g + m * eps * dl);
    const double qc = m * eps * dl * g;
    rep.trace_quadratic = {qa, qb, qc};
    rep.trace_quadratic_discriminant = qb * qb - 4.0 * qa * qc;
    if (rep.trace_quadratic_discriminant > 0.0) rep.trace_quadratic_roots = solve_quadratic(qa, qb, qc);
    const bool between = rep.trace_quadratic_roots.size() == 2 &&
                         strictly_between(rep.trace_quadratic_roots[0], x, rep.trace_quadratic_roots[1]);

    add("lemma_delta_gt_2m", rep.delta_exceeds_2m, Prediction::Stable, true);
    add("initial_b_i", weak_growth && rep.trace_quadratic_discriminant > 0.0 && between, Prediction::Unstable, true);
    add("initial_b_ii", weak_growth && !(rep.trace_quadratic_discriminant > 0.0 && between), Prediction::Stable, true);
  } else {
    const double K = 1.0 + (al - 1.0) * xi;
    rep.interference_factor = K;
    const double bound = -2.0 / y * (1.0 - x / g) * K;
    if (bound > 0.0) rep.epsilon_bound = bound;
    rep.in_omega = K > 0.0 || (K < 0.0 && bound > 0.0 && bound < eps);

    rep.determinant_numerator = eps * dl * y * (x * x + xi) + 2.0 * dl * (1.0 - x / g) * K * x * x;

    const double ca = -2.0 / g;
    const double cb = 2.0 - dl / m - (dl - m);
    const double cd = -dl * xi / m - rep.food_margin;
    rep.trace_cubic = {ca, cb, 0.0, cd};
    rep.trace_cubic_roots = solve_cubic(ca, cb, 0.0, cd);
    rep.trace_numerator = ((ca * x + cb) * x) * x + cd;

    // Sign of the trace numerator from the root configuration: negative to
    // the right of every root, flipping at each simple root.
    const auto above = std::count_if(rep.trace_cubic_roots.begin(), rep.trace_cubic_roots.end(),
                                     [x](double r) { return r > x; });
    const bool trace_positive = (above % 2) == 1;

    std::vector<double> positive;
    for (double r : rep.trace_cubic_roots)
      if (r > 0.0) positive.push_back(r);
    const bool two_positive = positive.size() == 2;
    const bool inside = two_positive && 0.0 < positive[0] && positive[0] < x && x < positive[1] && positive[1] < g / 2.0;

    const double margin = rep.food_margin;
    const bool b_i = rep.in_omega && weak_growth && margin > 0.0 && dl < (2.0 + m) / (1.0 + 1.0 / m) && inside;

    add("lemma_delta_gt_2m", rep.delta_exceeds_2m, Prediction::Stable, false);
    add("af_a", rep.in_omega && rep.delta_exceeds_2m, Prediction::Stable, true);
    add("af_b_i", b_i, Prediction::Unstable, true);
    add("af_b_ii", rep.in_omega && weak_growth && !b_i && margin > 0.0, Prediction::Stable, true);
    add("af_b_ii_nonpositive_margin", rep.in_omega && weak_growth && !b_i && margin <= 0.0, Prediction::Stable, false);
    add("af_c", K < 0.0 && 0.0 < eps && rep.epsilon_bound && eps < *rep.epsilon_bound, Prediction::Saddle, false);
    add("trace_cubic_root_test", rep.in_omega, trace_positive ? Prediction::Unstable : Prediction::Stable, true);
  }

  for (const auto& c : rep.claims) {
    if (!c.definite || !c.hypotheses_hold) continue;
    rep.fired.push_back(c.name);
    if (rep.prediction == Prediction::Silent) rep.prediction = c.conclusion;
  }
  return rep;
}

std::optional<double> initial_interior_trace(double gamma, double epsilon, double delta, double m) {
  const double x = initial_interior_x(gamma, epsilon, delta, m);
  const double y = ((delta - m) * x * x - m) / (m * epsilon);
  if (!(x > 0.0 && y > 0.0)) return std::nullopt;
  ModelParams p;
  p.gamma = gamma;
  p.epsilon = epsilon;
  p.delta = delta;
  p.m = m;
  return field_jacobian<double>(p, Vec2(x, y), SystemKind::Initial).trace();
}

RegionLabel region_of(const ModelParams& p) {
  if (!(p.delta > p.m) || !(p.m > 0.0)) throw InvalidParameter("region_of requires delta > m > 0");
  if (!(p.gamma > 0.0) || !(p.epsilon > 0.0)) throw InvalidParameter("region_of requires positive gamma and epsilon");
  const double g = p.gamma, e = p.epsilon;
  if (g <= initial_interior_x(g, e, p.delta, p.m)) return RegionLabel::I;
  if (g <= 4.0 * e + std::sqrt(16.0 * e * e + 27.0)) return RegionLabel::II;
  const auto tr = initial_interior_trace(g, e, p.delta, p.m);
  if (tr && *tr < 0.0) return RegionLabel::III;
  return RegionLabel::IV;
}

std::optional<double> find_hopf_gamma(double epsilon, double delta, double m, std::pair<double, double> bracket) {
  if (!(delta > m) || !(m > 0.0)) throw InvalidParameter("find_hopf_gamma requires delta > m > 0");
  if (delta > 2.0 * m) return std::nullopt;
  auto [lo, hi] = bracket;
  if (lo > hi) std::swap(lo, hi);
  const auto t_lo = initial_interior_trace(lo, epsilon, delta, m);
  const auto t_hi = initial_interior_trace(hi, epsilon, delta, m);
  if (!t_lo || !t_hi) throw NoSignChange("interior equilibrium missing at a bracket endpoint");
  if ((*t_lo < 0.0) == (*t_hi < 0.0)) throw NoSignChange("trace has the same sign at both bracket endpoints");
  const bool lo_negative = *t_lo < 0.0;
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto t = initial_interior_trace(mid, epsilon, delta, m);
    if (!t) throw NoSignChange("interior equilibrium vanished inside the bracket");
    if (*t == 0.0) return mid;
    if ((*t < 0.0) == lo_negative) lo = mid;
    else hi = mid;
  }
  const double a = std::abs(*initial_interior_trace(lo, epsilon, delta, m));
  const double b = std::abs(*initial_interior_trace(hi, epsilon, delta, m));
  return a <= b ? lo : hi;
}

std::optional<double> pec_xi(const ModelParams& base, double alpha) {
  const double denom = base.delta - base.m * alpha;
  if (!(denom > 0.0)) return std::nullopt;
  return base.m / denom;
}

std::optional<double> tbc_xi(const ModelParams& base, double alpha) {
  const double denom = base.delta - base.m * alpha;
  if (denom == 0.0) return std::nullopt;
  const double xi = (base.m - (base.delta - base.m) * base.gamma * base.gamma) / denom;
  if (!(xi > 0.0)) return std::nullopt;
  return xi;
}

}  // namespace afpp
