#include "afpp/io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace afpp {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << format_double(row[i]);
  }
  os << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,y\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) write_csv_row(os, {traj.times[i], traj.states[i].x, traj.states[i].y});
}

namespace {

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

json state_json(const State& s) { return json::array({s.x, s.y}); }

State state_from(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(std::string(where) + " must be a pair of numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

json params_json(const ModelParams& p) {
  return {{"gamma", p.gamma}, {"xi", p.xi}, {"alpha", p.alpha}, {"epsilon", p.epsilon}, {"delta", p.delta}, {"m", p.m}};
}

ModelParams params_from(const json& j, ModelParams p) {
  check_keys(j, "params", {"gamma", "xi", "alpha", "epsilon", "delta", "m"});
  read(j, "gamma", p.gamma);
  read(j, "xi", p.xi);
  read(j, "alpha", p.alpha);
  read(j, "epsilon", p.epsilon);
  read(j, "delta", p.delta);
  read(j, "m", p.m);
  return p;
}

std::string kind_name(SystemKind k) { return k == SystemKind::Initial ? "initial" : "additional_food"; }

}  // namespace

std::string serialize_config(const RunConfig& c) {
  json j;
  j["version"] = c.version;
  j["params"] = params_json(c.params);
  j["kind"] = kind_name(c.kind);
  j["simulate"] = {{"s0", state_json(c.s0)},
                   {"t_end", c.t_end},
                   {"sample_dt", c.sample_dt},
                   {"abs_tol", c.tol.abs},
                   {"rel_tol", c.tol.rel},
                   {"max_step", c.tol.max_step}};
  json initial = json::array();
  for (const auto& s : c.initial) initial.push_back(state_json(s));
  j["sweep"] = {{"alpha", c.grid.alpha},
                {"xi", c.grid.xi},
                {"epsilon", c.grid.epsilon},
                {"initial", initial},
                {"random_initial", c.random_initial},
                {"random_x_max", c.random_x_max},
                {"random_y_max", c.random_y_max}};
  j["optctl"] = {{"mode", std::string(to_string(c.oc.mode))},
                 {"u_min", c.oc.u_min},
                 {"u_max", c.oc.u_max},
                 {"params", params_json(c.oc.params)},
                 {"s0", state_json(c.oc.s0)},
                 {"sf", state_json(c.oc.sf)},
                 {"endpoint_tol", c.oc.endpoint_tol},
                 {"n_nodes", c.n_nodes}};
  j["nullclines"] = {{"x_min", c.nullclines.x_min}, {"x_max", c.nullclines.x_max}, {"samples", c.nullclines.samples}};
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config", {"version", "params", "kind", "simulate", "sweep", "optctl", "nullclines", "seed"});
  RunConfig c;
  if (!j.contains("version")) throw ConfigError("config lacks a version");
  read(j, "version", c.version);
  if (c.version != kConfigVersion) throw ConfigError("unsupported config version " + std::to_string(c.version));
  if (j.contains("params")) c.params = params_from(j["params"], c.params);
  if (j.contains("kind")) {
    const std::string k = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (k == "initial") c.kind = SystemKind::Initial;
    else if (k == "additional_food") c.kind = SystemKind::AdditionalFood;
    else throw ConfigError("kind must be 'initial' or 'additional_food'");
  }
  if (j.contains("simulate")) {
    const json& s = j["simulate"];
    check_keys(s, "simulate", {"s0", "t_end", "sample_dt", "abs_tol", "rel_tol", "max_step"});
    if (s.contains("s0")) c.s0 = state_from(s["s0"], "simulate.s0");
    read(s, "t_end", c.t_end);
    read(s, "sample_dt", c.sample_dt);
    read(s, "abs_tol", c.tol.abs);
    read(s, "rel_tol", c.tol.rel);
    read(s, "max_step", c.tol.max_step);
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, "sweep", {"alpha", "xi", "epsilon", "initial", "random_initial", "random_x_max", "random_y_max"});
    read(s, "alpha", c.grid.alpha);
    read(s, "xi", c.grid.xi);
    read(s, "epsilon", c.grid.epsilon);
    if (s.contains("initial")) {
      if (!s["initial"].is_array()) throw ConfigError("sweep.initial must be a list");
      for (const auto& e : s["initial"]) c.initial.push_back(state_from(e, "sweep.initial entry"));
    }
    read(s, "random_initial", c.random_initial);
    read(s, "random_x_max", c.random_x_max);
    read(s, "random_y_max", c.random_y_max);
  }
  c.oc.params = c.params;
  if (j.contains("optctl")) {
    const json& o = j["optctl"];
    check_keys(o, "optctl", {"mode", "u_min", "u_max", "params", "s0", "sf", "endpoint_tol", "n_nodes"});
    if (o.contains("mode")) {
      const std::string m = o["mode"].is_string() ? o["mode"].get<std::string>() : "";
      if (m == "quality") c.oc.mode = ControlMode::Quality;
      else if (m == "quantity") c.oc.mode = ControlMode::Quantity;
      else throw ConfigError("optctl.mode must be 'quality' or 'quantity'");
    }
    read(o, "u_min", c.oc.u_min);
    read(o, "u_max", c.oc.u_max);
    // without its own block the control problem uses the model parameters
    c.oc.params = o.contains("params") ? params_from(o["params"], c.params) : c.params;
    if (o.contains("s0")) c.oc.s0 = state_from(o["s0"], "optctl.s0");
    if (o.contains("sf")) c.oc.sf = state_from(o["sf"], "optctl.sf");
    read(o, "endpoint_tol", c.oc.endpoint_tol);
    read(o, "n_nodes", c.n_nodes);
  }
  if (j.contains("nullclines")) {
    const json& n = j["nullclines"];
    check_keys(n, "nullclines", {"x_min", "x_max", "samples"});
    read(n, "x_min", c.nullclines.x_min);
    read(n, "x_max", c.nullclines.x_max);
    read(n, "samples", c.nullclines.samples);
  }
  read(j, "seed", c.seed);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<State> sweep_initial_states(const RunConfig& cfg) {
  if (!cfg.initial.empty()) return cfg.initial;
  if (cfg.random_initial < 0) throw ConfigError("random_initial must be nonnegative");
  std::mt19937_64 rng(cfg.seed);
  // Explicit 53-bit mapping; distribution objects differ between libraries.
  auto unit = [&] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  const double xm = cfg.random_x_max > 0.0 ? cfg.random_x_max : cfg.params.gamma;
  std::vector<State> out;
  for (int i = 0; i < cfg.random_initial; ++i) {
    const double x = xm * unit();
    out.push_back({x, cfg.random_y_max * unit()});
  }
  return out;
}

}  // namespace afpp
