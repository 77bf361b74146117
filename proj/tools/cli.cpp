#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include "afpp/atlas.hpp"
#include "afpp/io.hpp"
#include "afpp/optimal_control.hpp"
#include "json.hpp"

namespace afpp::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

RunConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  RunConfig cfg = load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

std::ofstream open_out(const Options& o, const std::string& name) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  std::ofstream os(fs::path(o.out) / name, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + (fs::path(o.out) / name).string());
  return os;
}

void write_json(const Options& o, const std::string& name, const ordered_json& j) {
  auto os = open_out(o, name);
  os << j.dump(2) << '\n';
}

// JSON numbers with the same 17-digit text as the CSV files; non-finite -> null.
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return ordered_json::parse(format_double(v));
}

ordered_json state_j(const State& s) { return ordered_json::array({num(s.x), num(s.y)}); }

ordered_json opt_num(const std::optional<double>& v) { return v ? num(*v) : ordered_json(nullptr); }

ordered_json nums(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double d : v) a.push_back(num(d));
  return a;
}

std::vector<double> sample_grid(double t_end, double dt) {
  if (dt <= 0.0) return {};
  std::vector<double> t;
  for (long k = 0; k * dt < t_end; ++k) t.push_back(k * dt);
  t.push_back(t_end);
  return t;
}

int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidParameter& e) {
    log << "invalid parameter: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    log << "domain error: " << e.what() << '\n';
    return kConfig;
  } catch (const IntegrationError& e) {
    log << "integration error: " << e.what() << '\n';
    return kIntegration;
  } catch (const BoundednessViolation& e) {
    log << "boundedness violation: " << e.what() << '\n';
    return kIntegration;
  }
}

ordered_json theorem_j(const TheoremReport& r) {
  ordered_json claims = ordered_json::array();
  for (const auto& c : r.claims)
    claims.push_back({{"name", c.name},
                      {"hypotheses_hold", c.hypotheses_hold},
                      {"conclusion", std::string(to_string(c.conclusion))},
                      {"definite", c.definite}});
  ordered_json j = {{"prediction", std::string(to_string(r.prediction))}, {"fired", r.fired}, {"claims", claims}};
  j["delta_exceeds_2m"] = r.delta_exceeds_2m;
  j["food_margin"] = num(r.food_margin);
  if (r.trace_quadratic[0] != 0.0) {
    j["trace_quadratic"] = nums({r.trace_quadratic.begin(), r.trace_quadratic.end()});
    j["trace_quadratic_discriminant"] = num(r.trace_quadratic_discriminant);
    j["trace_quadratic_roots"] = nums(r.trace_quadratic_roots);
  } else {
    j["interference_factor"] = num(r.interference_factor);
    j["epsilon_bound"] = opt_num(r.epsilon_bound);
    j["in_omega"] = r.in_omega;
    j["trace_cubic"] = nums({r.trace_cubic.begin(), r.trace_cubic.end()});
    j["trace_cubic_roots"] = nums(r.trace_cubic_roots);
    j["trace_numerator"] = num(r.trace_numerator);
    j["determinant_numerator"] = num(r.determinant_numerator);
  }
  return j;
}

}  // namespace

int simulate(const Options& o, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = load(o);
    const Trajectory traj = integrate(cfg.params, cfg.s0, cfg.kind, cfg.t_end, cfg.tol, sample_grid(cfg.t_end, cfg.sample_dt));
    const BoundednessCertificate cert = check_positivity_boundedness(traj, cfg.params);
    const AsymptoticOutcome out = asymptotic_outcome(cfg.params, cfg.s0, cfg.kind);
    {
      auto os = open_out(o, "trajectory.csv");
      write_trajectory_csv(os, traj);
    }
    ordered_json j;
    j["kind"] = cfg.kind == SystemKind::Initial ? "initial" : "additional_food";
    j["t_end"] = num(cfg.t_end);
    j["samples"] = traj.times.size();
    j["accepted_steps"] = traj.accepted;
    j["rejected_steps"] = traj.rejected;
    j["final_state"] = state_j(traj.states.back());
    j["drift"] = num((traj.states.back().vec() - cfg.s0.vec()).norm());
    j["terminal_reason"] = std::string(to_string(out.reason));
    j["attractor"] = {{"kind", std::string(to_string(out.kind))},
                      {"point", state_j(out.point)},
                      {"period", num(out.period)},
                      {"amplitude", num(out.amplitude)},
                      {"t_final", num(out.t_final)}};
    j["boundedness"] = {{"K", num(cert.K_choice)},
                        {"M", num(cert.M)},
                        {"W0", num(cert.W0)},
                        {"W_max", num(cert.W_max)},
                        {"bound", num(cert.bound)}};
    write_json(o, "summary.json", j);
    log << "attractor: " << to_string(out.kind) << '\n';
    return kOk;
  });
}

int analyze(const Options& o, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = load(o);
    const ModelParams& p = cfg.params;
    ordered_json eqs = ordered_json::array();
    for (const auto& e : equilibria_all(p, cfg.kind)) {
      const StabilityClass c = classify(p, e, cfg.kind);
      ordered_json ej = {{"kind", std::string(to_string(e.kind))},
                         {"point", state_j(e.point)},
                         {"residual", num(e.residual)},
                         {"eigenvalues",
                          {{num(c.eigenvalues[0].real()), num(c.eigenvalues[0].imag())},
                           {num(c.eigenvalues[1].real()), num(c.eigenvalues[1].imag())}}},
                         {"class", std::string(to_string(c.kind))}};
      if (e.kind == EquilibriumKind::Interior) ej["theorem"] = theorem_j(theorem_predicates(p, e, cfg.kind));
      eqs.push_back(ej);
    }
    const NullclineShape shape = nullcline_shape(effective(p, cfg.kind));
    ordered_json j;
    j["kind"] = cfg.kind == SystemKind::Initial ? "initial" : "additional_food";
    j["equilibria"] = eqs;
    j["region"] = std::string(to_string(region_of(p)));
    j["nullcline_shape"] = {{"kind", shape.kind == NullclineShapeKind::Monotone ? "monotone" : "crest_trough"},
                            {"threshold", num(shape.threshold)}};
    j["interior_existence_condition"] = interior_existence_condition(effective(p, cfg.kind));
    j["pec_xi"] = opt_num(pec_xi(p, p.alpha));
    j["tbc_xi"] = opt_num(tbc_xi(p, p.alpha));
    write_json(o, "analysis.json", j);
    log << "region: " << to_string(region_of(p)) << ", equilibria: " << eqs.size() << '\n';
    return kOk;
  });
}

int sweep(const Options& o, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = load(o);
    SweepOptions so;
    so.kind = cfg.kind;
    so.threads = o.threads;
    const auto cells = afpp::sweep(cfg.params, cfg.grid, sweep_initial_states(cfg), so);
    auto os = open_out(o, "atlas.csv");
    os << "index,alpha,xi,epsilon,outcome,n_equilibria,n_stable,re_E0,re_E1,re_E2,re_interior,error\n";
    std::size_t failed = 0;
    for (const auto& c : cells) {
      double re[4] = {NAN, NAN, NAN, NAN};
      int stable = 0;
      for (const auto& ce : c.equilibria) {
        const int slot = static_cast<int>(ce.eq.kind);
        // Leading real part; for several interior points the largest.
        if (std::isnan(re[slot]) || ce.cls.max_real() > re[slot]) re[slot] = ce.cls.max_real();
        stable += ce.cls.stable();
      }
      os << c.index << ',' << format_double(c.alpha) << ',' << format_double(c.xi) << ',' << format_double(c.epsilon)
         << ',' << to_string(c.outcome) << ',' << c.equilibria.size() << ',' << stable;
      for (double r : re) os << ',' << (std::isnan(r) ? std::string() : format_double(r));
      std::string err = c.error.value_or("");
      for (char& ch : err)
        if (ch == ',' || ch == '\n') ch = ';';
      os << ',' << err << '\n';
      failed += c.error.has_value();
    }
    log << cells.size() << " cells, " << failed << " failed\n";
    return (failed == cells.size() && !cells.empty()) ? kIntegration : kOk;
  });
}

int optctl(const Options& o, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = load(o);
    SolveOptions so;
    so.threads = o.threads;
    OCSolution sol;
    int code = kOk;
    std::string status = "converged";
    try {
      sol = solve(cfg.oc, cfg.n_nodes, so);
    } catch (const InfeasibleEndpoint& e) {
      sol = e.best();
      code = kOptimization;
      status = "infeasible_endpoint";
      log << "optimization failed: " << e.what() << '\n';
    } catch (const NonConvergence& e) {
      sol = e.best();
      code = kOptimization;
      status = "not_converged";
      log << "optimization failed: " << e.what() << '\n';
    }
    const PMPReport rep = verify_pmp(sol, cfg.oc);
    {
      auto os = open_out(o, "solution.csv");
      os << "t,x,y,u\n";
      for (std::size_t k = 0; k < sol.node_times.size(); ++k) {
        const double u = sol.controls.empty() ? cfg.oc.u_min : sol.controls[std::min(k, sol.controls.size() - 1)];
        write_csv_row(os, {sol.node_times[k], sol.states[k].x, sol.states[k].y, u});
      }
    }
    ordered_json windows = ordered_json::array();
    for (const auto& [a, b] : rep.singular_windows) windows.push_back({num(a), num(b)});
    ordered_json j;
    j["status"] = status;
    j["mode"] = std::string(to_string(cfg.oc.mode));
    j["n_nodes"] = sol.controls.size();
    j["T"] = num(sol.T);
    j["final_state"] = sol.states.empty() ? ordered_json(nullptr) : state_j(sol.states.back());
    j["endpoint_miss"] = num(sol.diag.endpoint_miss);
    j["max_defect"] = num(sol.diag.max_defect);
    j["control_switch_times"] = nums(sol.switch_times);
    j["switch_times"] = nums(rep.switch_times);
    j["bang_fraction"] = num(rep.bang_fraction);
    j["sign_consistency"] = num(rep.sign_consistency);
    j["sign_nodes"] = rep.sign_nodes;
    j["sign_consistency_abnormal"] = num(rep.sign_consistency_abnormal);
    j["singular_windows"] = windows;
    j["singular_curve_crossings"] = nums(rep.singular_curve_crossings);
    j["hamiltonian_range"] = {num(rep.hamiltonian_min), num(rep.hamiltonian_max)};
    j["endpoint_costate"] = {num(sol.endpoint_costate.p), num(sol.endpoint_costate.q)};
    j["solver"] = {{"restart", sol.diag.restart},
                   {"outer_iterations", sol.diag.outer_iterations},
                   {"inner_iterations", sol.diag.inner_iterations},
                   {"converged", sol.diag.converged},
                   {"constraint", num(sol.diag.constraint)},
                   {"projected_gradient", num(sol.diag.projected_gradient)},
                   {"multiplier", num(sol.diag.multiplier)}};
    write_json(o, "pmp_report.json", j);
    log << "T = " << format_double(sol.T) << ", bang fraction " << rep.bang_fraction << '\n';
    return code;
  });
}

int nullclines(const Options& o, std::ostream& log) {
  return guarded(log, [&] {
    const RunConfig cfg = load(o);
    const ModelParams p = effective(cfg.params, cfg.kind);
    const NullclineOptions& n = cfg.nullclines;
    if (n.samples < 2) throw ConfigError("nullclines.samples must be at least 2");
    const double hi = n.x_max > 0.0 ? n.x_max : p.gamma;
    if (!(hi > n.x_min)) throw ConfigError("nullclines.x_max must exceed x_min");
    auto os = open_out(o, "nullclines.csv");
    os << "x,prey_y,predator_y\n";
    for (int i = 0; i < n.samples; ++i) {
      const double x = n.x_min + (hi - n.x_min) * i / (n.samples - 1);
      std::string prey;
      try {
        prey = format_double(prey_nullcline(p, x));
      } catch (const DomainError&) {
      }
      os << format_double(x) << ',' << prey << ',' << format_double(predator_nullcline(p, x)) << '\n';
    }
    log << "wrote " << n.samples << " nullcline samples\n";
    return kOk;
  });
}

int run(const std::string& command, const Options& o, std::ostream& log) {
  if (command == "simulate") return simulate(o, log);
  if (command == "analyze") return analyze(o, log);
  if (command == "sweep") return sweep(o, log);
  if (command == "optctl") return optctl(o, log);
  if (command == "nullclines") return nullclines(o, log);
  log << "unknown command " << command << '\n';
  return kConfig;
}

}  // namespace afpp::cli
