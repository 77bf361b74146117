#include "afpp/optimal_control.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <thread>
#include <tuple>

#include "afpp/dopri.hpp"

namespace afpp {

std::string_view to_string(ControlMode m) { return m == ControlMode::Quality ? "quality" : "quantity"; }

void OCProblem::validate() const {
  if (!(u_min < u_max)) throw InvalidParameter("control bounds must satisfy u_min < u_max");
  if (!(u_min >= 0.0)) throw InvalidParameter("control lower bound must be nonnegative");
  if (!(endpoint_tol > 0.0)) throw InvalidParameter("endpoint tolerance must be positive");
  with_control(params, u_min, mode).validate();
  s0.validate();
  sf.validate();
}

ModelParams with_control(const ModelParams& params, double u, ControlMode mode) {
  ModelParams p = params;
  (mode == ControlMode::Quality ? p.alpha : p.xi) = u;
  return p;
}

double time_scale(const ModelParams& params, const State& s, double u, ControlMode mode) {
  const ModelParams p = with_control(params, u, mode);
  return 1.0 + s.x * s.x + p.alpha_xi() + p.epsilon * s.y;
}

Vec2 reparameterized_field(const ModelParams& params, const State& s, double u, ControlMode mode) {
  const ModelParams p = with_control(params, u, mode);
  const double x = s.x, y = s.y;
  const double D = 1.0 + x * x + p.alpha_xi() + p.epsilon * y;
  return {x * (1.0 - x / p.gamma) * D - x * x * y, p.delta * (x * x + p.xi) * y - D * p.m * y};
}

double hamiltonian(const ModelParams& params, const State& s, const Costate& c, double u, ControlMode mode,
                   double lambda0) {
  const Vec2 F = reparameterized_field(params, s, u, mode);
  return lambda0 * time_scale(params, s, u, mode) + c.p * F(0) + c.q * F(1);
}

Vec2 costate_rhs(const ModelParams& params, const State& s, const Costate& c, double u, ControlMode mode,
                 double lambda0) {
  const ModelParams p = with_control(params, u, mode);
  const double x = s.x, y = s.y, g = p.gamma, eps = p.epsilon, dl = p.delta, m = p.m;
  const double D = 1.0 + x * x + p.alpha_xi() + eps * y;
  const double logistic = x * (1.0 - x / g);
  const double dp = c.p * (2.0 * x * y - 2.0 * x * logistic - D * (1.0 - 2.0 * x / g)) + 2.0 * c.q * x * y * (m - dl) -
                    lambda0 * 2.0 * x;
  const double dq = c.p * (x * x - eps * logistic) +
                    c.q * (2.0 * m * eps * y + m * (1.0 + x * x + p.alpha_xi()) - dl * (x * x + p.xi)) -
                    lambda0 * eps;
  return {dp, dq};
}

double switching_function(const ModelParams& params, const State& s, const Costate& c, ControlMode mode,
                          double lambda0) {
  const double x = s.x, y = s.y;
  const double logistic = x * (1.0 - x / params.gamma);
  if (mode == ControlMode::Quality) {
    const double xi = params.xi;
    return lambda0 * xi + c.p * logistic * xi - c.q * xi * params.m * y;
  }
  const double al = params.alpha;
  return lambda0 * al + c.p * al * logistic + c.q * (params.delta - al * params.m) * y;
}

std::optional<double> singular_arc_quality(const ModelParams& params, double x) {
  const double m = params.m;
  if (m == 1.0) throw DomainError("singular arc undefined at m = 1");
  if (x < 0.0 || x > params.gamma) throw DomainError("singular arc requires 0 <= x <= gamma");
  if (m > 1.0) return std::nullopt;
  const double w = 1.0 - x / params.gamma;
  return 2.0 * params.delta / (m * (1.0 - m)) * x * w * w;
}

ReparameterizedRun integrate_reparameterized(const ModelParams& params, const State& s0, double u, ControlMode mode,
                                             double s_end, const Tolerances& tol) {
  using Vec3 = Eigen::Vector3d;
  s0.validate();
  auto f = [&](const Vec3& z) {
    const State s{z(0), z(1)};
    const Vec2 F = reparameterized_field(params, s, u, mode);
    return Vec3(F(0), F(1), time_scale(params, s, u, mode));
  };
  AdaptiveDopri<Vec3, decltype(f)> st(f, Vec3(s0.x, s0.y, 0.0), tol.abs, tol.rel);
  st.set_max_step(tol.max_step);
  ReparameterizedRun run;
  auto record = [&] {
    run.s.push_back(st.t());
    run.t.push_back(st.y()(2));
    run.states.push_back({st.y()(0), st.y()(1)});
  };
  record();
  while (st.t() < s_end) {
    if (!st.step(s_end)) throw IntegrationError("step size underflow in rescaled time");
    record();
  }
  return run;
}

namespace {

using Aug = Eigen::Matrix<double, 8, 1>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Vec = Eigen::VectorXd;

// Partial of the physical-time field with respect to the control.
Vec2 control_partial(const ModelParams& p, const Vec2& s, ControlMode mode) {
  const double x = s(0), y = s(1);
  const double D = 1.0 + x * x + p.alpha_xi() + p.epsilon * y;
  const double D2 = D * D;
  const double dD = mode == ControlMode::Quality ? p.xi : p.alpha;
  Vec2 out(x * x * y * dD / D2, -p.delta * (x * x + p.xi) * y * dD / D2);
  if (mode == ControlMode::Quantity) out(1) += p.delta * y / D;
  return out;
}

int substeps(int n_nodes) { return std::max(8, static_cast<int>(std::ceil(2400.0 / n_nodes))); }

struct Shot {
  std::vector<Vec2> x;      // n + 1 node states
  std::vector<Mat2> phi;    // d x_{k+1} / d x_k
  std::vector<Vec2> su;     // d x_{k+1} / d u_k
  std::vector<Vec2> ftau;   // d x_{k+1} / d tau
};

Shot shoot(const OCProblem& oc, const Vec& u, double T, bool sensitivities) {
  const int n = static_cast<int>(u.size());
  const int M = substeps(n);
  const double tau = T / n;
  Shot shot;
  shot.x.reserve(n + 1);
  shot.x.push_back(oc.s0.vec());
  for (int k = 0; k < n; ++k) {
    const ModelParams pu = with_control(oc.params, u(k), oc.mode);
    if (!sensitivities) {
      auto f = [&](const Vec2& s) { return field<double>(pu, s, SystemKind::AdditionalFood); };
      shot.x.push_back(dopri_fixed(f, shot.x.back(), tau, M));
      continue;
    }
    auto f = [&](const Aug& z) {
      const Vec2 s = z.head<2>();
      const Mat2 J = field_jacobian<double>(pu, s, SystemKind::AdditionalFood);
      const Eigen::Map<const Mat2> Phi(z.data() + 2);
      Aug out;
      out.head<2>() = field<double>(pu, s, SystemKind::AdditionalFood);
      Eigen::Map<Mat2>(out.data() + 2) = J * Phi;
      out.tail<2>() = J * z.tail<2>() + control_partial(pu, s, oc.mode);
      return out;
    };
    Aug z = Aug::Zero();
    z.head<2>() = shot.x.back();
    z(2) = 1.0;
    z(5) = 1.0;
    z = dopri_fixed(f, z, tau, M);
    shot.x.push_back(z.head<2>());
    shot.phi.push_back(Eigen::Map<const Mat2>(z.data() + 2));
    shot.su.push_back(z.tail<2>());
    shot.ftau.push_back(field<double>(pu, shot.x.back(), SystemKind::AdditionalFood));
  }
  return shot;
}

// (|x - c|^2 - r^2) / (2r): smooth, and close to the signed distance to the
// sphere near it, which keeps the multiplier O(1).
struct Ball {
  Vec2 center;
  double r;
  double g(const Vec2& x) const { return ((x - center).squaredNorm() - r * r) / (2.0 * r); }
  Vec2 grad(const Vec2& x) const { return (x - center) / r; }
};

// Gradient of w . x_N with respect to (u, T).
Vec pullback(const Shot& shot, const Vec2& w_end) {
  const int n = static_cast<int>(shot.phi.size());
  Vec grad(n + 1);
  grad(n) = 0.0;
  Vec2 w = w_end;
  for (int k = n - 1; k >= 0; --k) {
    grad(k) = w.dot(shot.su[k]);
    grad(n) += w.dot(shot.ftau[k]) / n;
    w = shot.phi[k].transpose() * w;
  }
  return grad;
}

struct InnerResult {
  Vec z;
  double f = 0.0;
  double pg = 0.0;
  int iterations = 0;
  bool converged = false;
};

Vec project(const Vec& z, const Vec& lo, const Vec& hi) { return z.cwiseMax(lo).cwiseMin(hi); }

double projected_gradient_norm(const Vec& z, const Vec& g, const Vec& lo, const Vec& hi) {
  return (project(z - g, lo, hi) - z).lpNorm<Eigen::Infinity>();
}

// Projected L-BFGS with an Armijo search along the projection arc.
InnerResult projected_lbfgs(const std::function<double(const Vec&, Vec&)>& fg, Vec z, const Vec& lo, const Vec& hi,
                            double tol, int max_iter, double max_step) {
  constexpr int kMemory = 10;
  std::deque<std::pair<Vec, Vec>> mem;
  z = project(z, lo, hi);
  Vec g(z.size());
  double f = fg(z, g);
  InnerResult res;
  for (int it = 0; it < max_iter; ++it) {
    res.pg = projected_gradient_norm(z, g, lo, hi);
    if (res.pg <= tol) {
      res.converged = true;
      break;
    }
    Vec free = Vec::Ones(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double gap = 1e-12 * (1.0 + std::abs(z(i)));
      if ((z(i) <= lo(i) + gap && g(i) > 0.0) || (z(i) >= hi(i) - gap && g(i) < 0.0)) free(i) = 0.0;
    }
    Vec q = g.cwiseProduct(free);
    std::vector<double> alpha(mem.size());
    for (int i = static_cast<int>(mem.size()) - 1; i >= 0; --i) {
      const auto& [s, y] = mem[i];
      alpha[i] = s.dot(q) / s.dot(y);
      q -= alpha[i] * y;
    }
    if (!mem.empty()) {
      const auto& [s, y] = mem.back();
      q *= s.dot(y) / y.squaredNorm();
    } else {
      q /= std::max(1.0, q.lpNorm<Eigen::Infinity>());
    }
    for (std::size_t i = 0; i < mem.size(); ++i) {
      const auto& [s, y] = mem[i];
      const double beta = y.dot(q) / s.dot(y);
      q += (alpha[i] - beta) * s;
    }
    Vec d = -q.cwiseProduct(free);
    if (!d.allFinite() || d.dot(g) >= 0.0) {
      mem.clear();
      d = -g.cwiseProduct(free);
      d /= std::max(1.0, d.lpNorm<Eigen::Infinity>());
    }
    double t = std::min(1.0, max_step / std::max(d.lpNorm<Eigen::Infinity>(), 1e-300));

    bool accepted = false;
    Vec z_new, g_new(z.size());
    double f_new = f;
    for (int ls = 0; ls < 50; ++ls, t *= 0.5) {
      z_new = project(z + t * d, lo, hi);
      f_new = fg(z_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * g.dot(z_new - z)) {
        accepted = true;
        break;
      }
    }
    res.iterations = it + 1;
    if (!accepted) {
      if (mem.empty()) break;
      mem.clear();
      continue;
    }
    const Vec s = z_new - z, y = g_new - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      mem.emplace_back(s, y);
      if (mem.size() > kMemory) mem.pop_front();
    }
    const double df = f - f_new;
    z = z_new;
    g = g_new;
    f = f_new;
    if (df <= 1e-15 * (1.0 + std::abs(f)) && s.lpNorm<Eigen::Infinity>() <= 1e-13) break;
  }
  res.pg = projected_gradient_norm(z, g, lo, hi);
  res.converged = res.converged || res.pg <= tol;
  res.z = z;
  res.f = f;
  return res;
}

struct RestartResult {
  Vec z;
  OCDiagnostics diag;
  double miss = std::numeric_limits<double>::infinity();
};

double closest_approach_time(const OCProblem& oc, double u) {
  const ModelParams pu = with_control(oc.params, u, oc.mode);
  std::vector<double> samples;
  for (int i = 0; i <= 6000; ++i) samples.push_back(0.01 * i);
  double best_t = 1.0, best_d = std::numeric_limits<double>::infinity();
  try {
    const Trajectory tr = integrate(pu, oc.s0, SystemKind::AdditionalFood, 60.0, {}, samples);
    for (std::size_t i = 1; i < tr.times.size(); ++i) {
      const double d = (tr.states[i].vec() - oc.sf.vec()).norm();
      if (d < best_d) {
        best_d = d;
        best_t = tr.times[i];
      }
    }
  } catch (const IntegrationError&) {
  }
  return best_t;
}

RestartResult run_restart(const OCProblem& oc, Vec z0, const SolveOptions& opt) {
  const int n = static_cast<int>(z0.size()) - 1;
  const Ball ball{oc.sf.vec(), 0.999 * oc.endpoint_tol};
  Vec lo = Vec::Constant(n + 1, oc.u_min), hi = Vec::Constant(n + 1, oc.u_max);
  lo(n) = 0.0;
  hi(n) = std::numeric_limits<double>::infinity();

  double lambda = 0.0, mu = 10.0;
  auto fg = [&](const Vec& z, Vec& grad) {
    const Shot shot = shoot(oc, z.head(n), z(n), true);
    const Vec2& xN = shot.x.back();
    if (!xN.allFinite()) return std::numeric_limits<double>::infinity();
    const double g = ball.g(xN);
    const double w = std::max(0.0, lambda + mu * g);
    grad = pullback(shot, w * ball.grad(xN));
    grad(n) += 1.0;
    return z(n) + (w * w - lambda * lambda) / (2.0 * mu);
  };

  RestartResult rr;
  Vec z = z0;
  double prev_viol = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    const InnerResult in = projected_lbfgs(fg, z, lo, hi, opt.inner_tol, opt.max_inner, 1.0);
    z = in.z;
    rr.diag.outer_iterations = outer + 1;
    rr.diag.inner_iterations += in.iterations;
    rr.diag.projected_gradient = in.pg;
    const double g = ball.g(shoot(oc, z.head(n), z(n), false).x.back());
    rr.diag.constraint = g;
    const double lambda_new = std::max(0.0, lambda + mu * g);
    const double viol = std::max(g, -lambda / mu);
    // Near the solution the inner stopping test sits at roundoff, so the
    // outer test uses scaled KKT residuals rather than the inner flag.
    if (in.pg <= opt.kkt_tol && viol <= 1e-8 && std::abs(lambda_new - lambda) <= 1e-4 * (1.0 + lambda)) {
      lambda = lambda_new;
      rr.diag.converged = true;
      break;
    }
    if (viol > 1e-8 && viol > 0.25 * prev_viol) mu = std::min(mu * 10.0, 1e8);
    prev_viol = viol;
    lambda = lambda_new;
  }
  rr.diag.multiplier = lambda;
  rr.z = z;
  return rr;
}

// Forward re-simulation with the adaptive integrator at tight tolerance.
void resimulate(const OCProblem& oc, OCSolution& sol) {
  const Tolerances tight{1e-13, 1e-12};
  const int n = static_cast<int>(sol.controls.size());
  double max_defect = 0.0;
  State s = oc.s0;
  for (int k = 0; k < n; ++k) {
    const double tau = sol.node_times[k + 1] - sol.node_times[k];
    if (tau <= 0.0) continue;
    const ModelParams pu = with_control(oc.params, sol.controls[k], oc.mode);
    const State from_node = integrate(pu, sol.states[k], SystemKind::AdditionalFood, tau, tight).states.back();
    max_defect = std::max(max_defect, (from_node.vec() - sol.states[k + 1].vec()).norm());
    s = integrate(pu, s, SystemKind::AdditionalFood, tau, tight).states.back();
  }
  sol.diag.max_defect = max_defect;
  sol.diag.endpoint_miss = (s.vec() - oc.sf.vec()).norm();
}

std::vector<double> control_switch_times(const OCProblem& oc, const OCSolution& sol) {
  const double band = 1e-3;
  auto cls = [&](double u) { return u >= oc.u_max - band ? 1 : (u <= oc.u_min + band ? -1 : 0); };
  std::vector<double> out;
  const int n = static_cast<int>(sol.controls.size());
  int last = -2;
  double last_u = 0.0;
  for (int k = 0; k < n; ++k) {
    const int c = cls(sol.controls[k]);
    if (c == 0) continue;
    if (last != -2 && c != last) {
      // One partial interval between two bang arcs: place the switch where
      // its average matches the constant it replaced.
      int first_partial = k - 1;
      while (first_partial >= 0 && cls(sol.controls[first_partial]) == 0) --first_partial;
      ++first_partial;
      double ts = sol.node_times[k];
      if (first_partial == k - 1) {
        const double frac = (sol.controls[k - 1] - sol.controls[k]) / (last_u - sol.controls[k]);
        ts = sol.node_times[k - 1] + std::clamp(frac, 0.0, 1.0) * (sol.node_times[k] - sol.node_times[k - 1]);
      } else if (first_partial < k - 1) {
        ts = 0.5 * (sol.node_times[first_partial] + sol.node_times[k]);
      }
      out.push_back(ts);
    }
    last = c;
    last_u = sol.controls[k];
  }
  return out;
}

OCSolution assemble(const OCProblem& oc, const Vec& z, const OCDiagnostics& diag, int restart) {
  const int n = static_cast<int>(z.size()) - 1;
  const double T = z(n);
  OCSolution sol;
  sol.T = T;
  sol.diag = diag;
  sol.diag.restart = restart;
  const Shot shot = shoot(oc, z.head(n), T, true);
  for (int k = 0; k <= n; ++k) {
    sol.node_times.push_back(T * k / n);
    sol.states.push_back(State::from(shot.x[k]));
  }
  sol.controls.assign(z.data(), z.data() + n);

  const Ball ball{oc.sf.vec(), 0.999 * oc.endpoint_tol};
  const Vec2 dg = ball.grad(shot.x.back());
  // Multiplier from stationarity in T, which pins the normal scaling.
  const double dT = pullback(shot, dg)(n);
  double nu = dT < 0.0 ? -1.0 / dT : diag.multiplier;
  sol.diag.multiplier = nu;
  sol.endpoint_costate = {nu * dg(0), nu * dg(1)};
  resimulate(oc, sol);
  std::tie(sol.costates, sol.switching) = costate_pass(sol, oc, 1.0);
  sol.switch_times = control_switch_times(oc, sol);
  return sol;
}

Vec resample(const std::vector<double>& u, int n) {
  Vec out(n);
  const int m = static_cast<int>(u.size());
  for (int k = 0; k < n; ++k) {
    const double mid = (k + 0.5) / n;
    out(k) = u[std::min(m - 1, static_cast<int>(mid * m))];
  }
  return out;
}

}  // namespace

std::pair<std::vector<Costate>, std::vector<double>> costate_pass(const OCSolution& sol, const OCProblem& oc,
                                                                  double lambda0) {
  const int n = static_cast<int>(sol.controls.size());
  std::vector<Costate> costates(n + 1);
  std::vector<double> sigma(n, 0.0);
  costates[n] = sol.endpoint_costate;
  if (n == 0) return {costates, sigma};
  const int M = substeps(n);
  for (int k = n - 1; k >= 0; --k) {
    const double u = sol.controls[k];
    const ModelParams pu = with_control(oc.params, u, oc.mode);
    // Physical-time adjoint: the rescaled-time costate equation over dt/ds.
    auto f = [&](const Vec4& z) {
      const State s{z(0), z(1)};
      const Costate c{z(2), z(3)};
      const Vec2 dc = costate_rhs(pu, s, c, u, oc.mode, lambda0) / time_scale(pu, s, u, oc.mode);
      Vec4 out;
      out.head<2>() = field<double>(pu, z.head<2>(), SystemKind::AdditionalFood);
      out.tail<2>() = dc;
      return out;
    };
    const double tau = sol.node_times[k + 1] - sol.node_times[k];
    Vec4 z;
    z << sol.states[k + 1].x, sol.states[k + 1].y, costates[k + 1].p, costates[k + 1].q;
    auto sig = [&](const Vec4& w) {
      return switching_function(pu, {w(0), w(1)}, {w(2), w(3)}, oc.mode, lambda0);
    };
    double acc = 0.5 * sig(z);
    Vec4 err, k7;
    Vec4 k1 = f(z);
    for (int i = 0; i < M; ++i) {
      z = dopri_step(f, z, k1, -tau / M, err, k7);
      k1 = k7;
      acc += (i + 1 < M ? 1.0 : 0.5) * sig(z);
    }
    sigma[k] = acc / M;
    costates[k] = {z(2), z(3)};
  }
  return {costates, sigma};
}

OCSolution solve(const OCProblem& oc, int n_nodes, const SolveOptions& opt) {
  oc.validate();
  if (n_nodes < 20) throw InvalidParameter("n_nodes must be at least 20");

  if ((oc.s0.vec() - oc.sf.vec()).norm() <= 0.999 * oc.endpoint_tol) {
    OCSolution sol;
    sol.node_times.assign(n_nodes + 1, 0.0);
    sol.states.assign(n_nodes + 1, oc.s0);
    sol.controls.assign(n_nodes, oc.u_min);
    sol.costates.assign(n_nodes + 1, Costate{});
    sol.switching.assign(n_nodes, 0.0);
    sol.diag.converged = true;
    sol.diag.restart = 0;
    sol.diag.endpoint_miss = (oc.s0.vec() - oc.sf.vec()).norm();
    return sol;
  }

  std::vector<Vec> starts;
  for (double u : {oc.u_min, oc.u_max, 0.5 * (oc.u_min + oc.u_max)}) {
    Vec z(n_nodes + 1);
    z.head(n_nodes).setConstant(u);
    z(n_nodes) = closest_approach_time(oc, u);
    starts.push_back(z);
  }
  if (opt.warm_start) {
    Vec z(n_nodes + 1);
    z.head(n_nodes) = resample(opt.warm_start->second, n_nodes);
    z(n_nodes) = opt.warm_start->first;
    starts.push_back(z);
  }

  std::vector<RestartResult> results(starts.size());
  std::vector<OCSolution> sols(starts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < starts.size();) {
      results[i] = run_restart(oc, starts[i], opt);
      sols[i] = assemble(oc, results[i].z, results[i].diag, static_cast<int>(i));
    }
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(starts.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  int best = -1, closest = 0;
  for (int i = 0; i < static_cast<int>(sols.size()); ++i) {
    if (sols[i].diag.endpoint_miss < sols[closest].diag.endpoint_miss) closest = i;
    if (sols[i].diag.endpoint_miss > oc.endpoint_tol) continue;
    if (best < 0 || sols[i].T < sols[best].T) best = i;
  }
  if (best < 0) throw InfeasibleEndpoint("no restart reached the endpoint tolerance", sols[closest]);
  if (!sols[best].diag.converged) throw NonConvergence("best feasible restart did not converge", sols[best]);
  return sols[best];
}

PMPReport verify_pmp(const OCSolution& sol, const OCProblem& oc) {
  PMPReport rep;
  const int n = static_cast<int>(sol.controls.size());
  if (n == 0) return rep;
  const double band = 1e-3;
  auto at_max = [&](double u) { return u >= oc.u_max - band; };
  auto at_min = [&](double u) { return u <= oc.u_min + band; };

  int bang = 0;
  for (double u : sol.controls) bang += at_max(u) || at_min(u);
  rep.bang_fraction = static_cast<double>(bang) / n;

  auto consistency = [&](const std::vector<double>& sigma, std::size_t& counted) {
    int ok = 0;
    counted = 0;
    for (int k = 0; k < n; ++k) {
      if (std::abs(sigma[k]) <= 1e-3) continue;
      ++counted;
      ok += sigma[k] < 0.0 ? at_max(sol.controls[k]) : at_min(sol.controls[k]);
    }
    return counted ? static_cast<double>(ok) / counted : 1.0;
  };
  const auto normal = costate_pass(sol, oc, 1.0);
  const auto abnormal = costate_pass(sol, oc, 0.0);
  rep.sign_consistency = consistency(normal.second, rep.sign_nodes);
  rep.sign_consistency_abnormal = consistency(abnormal.second, rep.sign_nodes_abnormal);

  const auto& sigma = normal.second;
  auto mid = [&](int k) { return 0.5 * (sol.node_times[k] + sol.node_times[k + 1]); };
  for (int k = 0; k + 1 < n; ++k) {
    if ((sigma[k] < 0.0) != (sigma[k + 1] < 0.0) && sigma[k] != sigma[k + 1]) {
      const double w = sigma[k] / (sigma[k] - sigma[k + 1]);
      rep.switch_times.push_back(mid(k) + w * (mid(k + 1) - mid(k)));
    }
  }
  for (int k = 0; k < n;) {
    if (std::abs(sigma[k]) >= 1e-6) {
      ++k;
      continue;
    }
    int j = k;
    while (j < n && std::abs(sigma[j]) < 1e-6) ++j;
    if (j - k >= 3) rep.singular_windows.emplace_back(sol.node_times[k], sol.node_times[j]);
    k = j;
  }

  if (oc.mode == ControlMode::Quality && oc.params.m < 1.0) {
    auto gap = [&](int k) -> std::optional<double> {
      const State& s = sol.states[k];
      if (s.x < 0.0 || s.x > oc.params.gamma) return std::nullopt;
      return s.y - *singular_arc_quality(oc.params, s.x);
    };
    for (int k = 0; k < n; ++k) {
      const auto a = gap(k), b = gap(k + 1);
      if (a && b && (*a < 0.0) != (*b < 0.0)) {
        const double w = *a / (*a - *b);
        rep.singular_curve_crossings.push_back(sol.node_times[k] + w * (sol.node_times[k + 1] - sol.node_times[k]));
      }
    }
  }

  rep.hamiltonian_min = std::numeric_limits<double>::infinity();
  rep.hamiltonian_max = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    for (int side = 0; side < 2; ++side) {
      const double h = hamiltonian(oc.params, sol.states[k + side], normal.first[k + side], sol.controls[k], oc.mode, 1.0);
      rep.hamiltonian_min = std::min(rep.hamiltonian_min, h);
      rep.hamiltonian_max = std::max(rep.hamiltonian_max, h);
    }
  }
  return rep;
}

}  // namespace afpp
