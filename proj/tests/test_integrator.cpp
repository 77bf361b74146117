#include <cmath>

#include "afpp/equilibria.hpp"
#include "afpp/integrator.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace afpp;

namespace {

ModelParams region_params(int region) {
  ModelParams p;
  switch (region) {
    case 1: p.gamma = 1; p.epsilon = 0.5; p.delta = 8; p.m = 6; break;
    case 2: p.gamma = 5; p.epsilon = 1; p.delta = 8; p.m = 6; break;
    case 3: p.gamma = 11; p.epsilon = 1; p.delta = 8; p.m = 6; break;
    default: p.gamma = 17; p.epsilon = 0.35; p.delta = 3.8; p.m = 3; break;
  }
  return p;
}

State interior(const ModelParams& p, SystemKind kind) {
  for (const auto& e : equilibria_all(p, kind))
    if (e.kind == EquilibriumKind::Interior) return e.point;
  return {-1, -1};
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("trajectory invariants") {
  const ModelParams p = region_params(4);
  const Trajectory tr = integrate(p, {3.0, 2.0}, SystemKind::Initial, 50.0);
  REQUIRE(tr.times.size() == tr.states.size());
  REQUIRE(tr.times.size() > 10);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(50.0).epsilon(1e-14));
  for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
  for (const auto& s : tr.states) {
    CHECK(s.x >= 0.0);
    CHECK(s.y >= 0.0);
  }
  CHECK(tr.accepted + 1 == tr.times.size());
  CHECK(tr.reason == TerminalReason::TimeExhausted);
  CHECK(tr.kind == SystemKind::Initial);
}

TEST_CASE("predator axis decays exponentially") {
  ModelParams p = region_params(2);
  const double y0 = 3.0;
  std::vector<double> ts;
  for (int k = 0; k <= 40; ++k) ts.push_back(0.1 * k);
  const Tolerances tol{1e-12, 1e-10};
  const Trajectory tr = integrate(p, {0.0, y0}, SystemKind::Initial, 4.0, tol, ts);
  REQUIRE(tr.states.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(tr.states[i].x == 0.0);
    // global error, so a couple of orders above the per-step tolerance
    const double exact = y0 * std::exp(-p.m * ts[i]);
    CHECK(std::abs(tr.states[i].y - exact) < 100.0 * (tol.abs + tol.rel * exact));
  }
}

TEST_CASE("equilibrium start stays put") {
  for (int region : {2, 3, 4}) {
    const ModelParams p = region_params(region);
    const State e = interior(p, SystemKind::Initial);
    const Trajectory tr = integrate(p, e, SystemKind::Initial, 100.0);
    double drift = 0.0;
    for (const auto& s : tr.states) drift = std::max(drift, (s.vec() - e.vec()).norm());
    CHECK(drift < 1e-8);
  }
}

TEST_CASE("samples agree with a fine RK4 reference") {
  ModelParams p{7.0, 1.5, 0.6, 0.3, 3.0, 2.0};
  const State s0{2.0, 1.0};
  std::vector<double> ts{0.0, 0.37, 1.0, 2.5, 5.0, 7.75, 10.0};
  const Trajectory tr = integrate(p, s0, SystemKind::AdditionalFood, 10.0, {1e-11, 1e-11}, ts);
  REQUIRE(tr.states.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<double> ref{s0.x, s0.y};
    if (ts[i] > 0)
      ref = oracle::rk4(
          [&](const std::vector<double>& y, std::vector<double>& dy) {
            const auto [a, b] = oracle::rhs(p, y[0], y[1]);
            dy[0] = a;
            dy[1] = b;
          },
          ref, ts[i], 20000);
    CHECK(std::abs(tr.states[i].x - ref[0]) < 1e-8);
    CHECK(std::abs(tr.states[i].y - ref[1]) < 1e-8);
  }
}

TEST_CASE("observed convergence order") {
  // Error of the end state against a tight reference as a function of the
  // number of accepted steps; a fifth-order pair should show a slope
  // steeper than -4.
  ModelParams p{7.0, 1.5, 0.6, 0.3, 3.0, 2.0};
  const State s0{2.0, 1.0};
  const double T = 10.0;
  const Trajectory ref = integrate(p, s0, SystemKind::AdditionalFood, T, {1e-14, 1e-14});
  std::vector<double> lx, ly;
  for (double tol : {1e-5, 1e-6, 1e-7, 1e-8, 1e-9}) {
    const Trajectory tr = integrate(p, s0, SystemKind::AdditionalFood, T, {tol, tol});
    const double err = (tr.states.back().vec() - ref.states.back().vec()).norm();
    lx.push_back(std::log(static_cast<double>(tr.accepted)));
    ly.push_back(std::log(err));
  }
  const std::size_t n = lx.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  MESSAGE("error vs steps slope: ", slope);
  CHECK(slope < -4.0);
  // tighter tolerance never makes the end state worse by more than noise
  for (std::size_t i = 1; i < n; ++i) CHECK(ly[i] < ly[i - 1] + 0.5);
}

TEST_CASE("step-size underflow is reported") {
  // y' = y^2 from y = 1 blows up at t = 1.
  CHECK_THROWS_AS(integrate_field([](const Vec2& v) { return Vec2(v.x() * v.x(), 0.0); }, Vec2(1.0, 0.0), 2.0),
                  IntegrationError);
}

TEST_CASE("boundedness of the origin") {
  const ModelParams p = region_params(4);
  const Trajectory tr = integrate(p, {0, 0}, SystemKind::Initial, 20.0);
  const auto cert = check_positivity_boundedness(tr, p);
  CHECK(cert.W_max == 0.0);
  CHECK(cert.W0 == 0.0);
  CHECK(cert.K_choice == doctest::Approx(p.m / 2));
}

TEST_CASE("boundedness certificates at region IV") {
  const ModelParams p = region_params(4);
  oracle::Rng rng(404);
  for (int i = 0; i < 100; ++i) {
    const State s0{rng.uniform(0, 2 * p.gamma), rng.uniform(0, 50)};
    const Trajectory tr = integrate(p, s0, SystemKind::Initial, 200.0);
    const auto cert = check_positivity_boundedness(tr, p);
    const double K = p.m / 2;
    CHECK(cert.M == doctest::Approx(p.gamma * (1 + K) * (1 + K) / 4));
    CHECK(cert.W0 == doctest::Approx(s0.x + s0.y / p.delta));
    CHECK(cert.W_max <= cert.bound * (1 + 1e-6));
  }
}

TEST_CASE("boundedness uses the food term for the additional-food system") {
  ModelParams p{3.0, 2.0, 0.5, 0.4, 4.0, 1.0};
  const Trajectory tr = integrate(p, {1.0, 1.0}, SystemKind::AdditionalFood, 100.0);
  const auto cert = check_positivity_boundedness(tr, p);
  const double K = p.m / 2;
  CHECK(cert.M == doctest::Approx(p.gamma * (1 + K) * (1 + K) / 4 + p.xi / p.epsilon));
  CHECK(cert.W_max <= cert.bound * (1 + 1e-6));
}

TEST_CASE("violations are reported") {
  const ModelParams p = region_params(1);
  Trajectory tr;
  tr.kind = SystemKind::Initial;
  tr.times = {0.0, 1.0};
  tr.states = {{0.5, 0.5}, {0.5, -1e-6}};
  CHECK_THROWS_AS(check_positivity_boundedness(tr, p), BoundednessViolation);
  tr.states = {{0.5, 0.5}, {1e6, 0.0}};
  CHECK_THROWS_AS(check_positivity_boundedness(tr, p), BoundednessViolation);
}

TEST_CASE("region I with high quality goes to the prey axis") {
  ModelParams p{1.0, 1.0, 5.0, 0.5, 8.0, 6.0};
  const auto out = asymptotic_outcome(p, {0.5, 0.5}, SystemKind::AdditionalFood);
  REQUIRE(out.kind == OutcomeKind::Point);
  CHECK(out.point.x == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(out.point.y) < 1e-6);
}

TEST_CASE("asymptotic outcomes of the reference regions") {
  const ModelParams p3 = region_params(3);
  const State e3 = interior(p3, SystemKind::Initial);
  const auto o3 = asymptotic_outcome(p3, {e3.x * 1.1, e3.y * 0.9}, SystemKind::Initial);
  REQUIRE(o3.kind == OutcomeKind::Point);
  CHECK((o3.point.vec() - e3.vec()).norm() < 1e-6);
  CHECK(o3.reason == TerminalReason::ConvergedToPoint);

  const ModelParams p4 = region_params(4);
  const State e4 = interior(p4, SystemKind::Initial);
  const auto o4 = asymptotic_outcome(p4, {e4.x + 0.1, e4.y}, SystemKind::Initial);
  REQUIRE(o4.kind == OutcomeKind::LimitCycle);
  CHECK(o4.reason == TerminalReason::CycleDetected);
  CHECK(o4.period > 0.0);
  CHECK(o4.amplitude > 1e-4);
  // the same cycle is reached from the outside
  const auto o4b = asymptotic_outcome(p4, {12.0, 40.0}, SystemKind::Initial);
  REQUIRE(o4b.kind == OutcomeKind::LimitCycle);
  // each run stops within peak_rel_tol of the cycle, so they agree to twice that
  CHECK(o4b.period == doctest::Approx(o4.period).epsilon(1e-5));
  CHECK(o4b.peaks.back() == doctest::Approx(o4.peaks.back()).epsilon(2e-6));
}

TEST_CASE("short horizon is undetermined") {
  const ModelParams p = region_params(4);
  OutcomeOptions opt;
  opt.t_end = 5.0;
  const auto o = asymptotic_outcome(p, {3.0, 3.0}, SystemKind::Initial, opt);
  CHECK(o.kind == OutcomeKind::Undetermined);
  CHECK(o.reason == TerminalReason::TimeExhausted);
}

TEST_CASE("integration is deterministic") {
  const ModelParams p = region_params(4);
  const Trajectory a = integrate(p, {3.0, 2.0}, SystemKind::Initial, 80.0);
  const Trajectory b = integrate(p, {3.0, 2.0}, SystemKind::Initial, 80.0);
  REQUIRE(a.times.size() == b.times.size());
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    CHECK(a.times[i] == b.times[i]);
    CHECK(a.states[i] == b.states[i]);
  }
}

}  // TEST_SUITE
