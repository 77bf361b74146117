#include <cmath>
#include <limits>

#include "afpp/integrator.hpp"
#include "afpp/model.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace afpp;

TEST_SUITE("model") {

TEST_CASE("holling3 saturates at 1/h_N") {
  ForagingParams fp;
  fp.h_N = 0.25;
  fp.e_N = 3.0;
  const auto r = holling3_rates(fp, 1e7, 0.0, 0.0);
  CHECK(r.g == doctest::Approx(1.0 / fp.h_N).epsilon(1e-9));
  CHECK(r.h == 0.0);
}

TEST_CASE("holling3 with no prey") {
  ForagingParams fp{0.5, 0.7, 0.3, 2.0, 1.5, 0.8};
  const double P = 1.3, A = 2.2;
  const auto r = holling3_rates(fp, 0.0, P, A);
  const double s = 1.0 / (fp.e_N * fp.h_N);
  const double expect =
      fp.e_A * A * s / (s + (fp.h_A * fp.e_A * s) * A + (fp.h_P * fp.e_P * s) * P);
  CHECK(r.g == 0.0);
  CHECK(r.h == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("holling3 responses share one denominator") {
  oracle::Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ForagingParams fp{rng.uniform(0.05, 3), rng.uniform(0, 3), rng.uniform(0, 3),
                      rng.uniform(0.05, 3), rng.uniform(0, 3), rng.uniform(0, 3)};
    const double N = rng.uniform(0, 10), P = rng.uniform(0, 10), A = rng.uniform(0, 10);
    const auto r = holling3_rates(fp, N, P, A);
    const double lhs = r.g * fp.e_A * A;
    const double rhs = r.h * fp.e_N * N * N;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
    CHECK(r.g >= 0.0);
    CHECK(r.h >= 0.0);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("holling3 rejects negative input") {
  ForagingParams fp;
  CHECK_THROWS_AS(holling3_rates(fp, -1.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(holling3_rates(fp, 1.0, -0.1, 0.0), DomainError);
  CHECK_THROWS_AS(holling3_rates(fp, 1.0, 0.0, -2.0), DomainError);
  fp.h_N = 0.0;
  CHECK_THROWS_AS(holling3_rates(fp, 1.0, 0.0, 0.0), InvalidParameter);
}

TEST_CASE("nondimensionalize") {
  DimensionalParams dp;
  dp.r = 1.0;
  dp.K = 1.2;
  dp.a = 1.0;
  dp.c = 1.0;
  dp.delta1 = 1.5;
  dp.m1 = 0.5;
  dp.eps1 = 0.05;
  dp.eta = 1.0;
  dp.A = 0.8;
  const ModelParams p = nondimensionalize(dp, 0.7);
  CHECK(p.gamma == doctest::Approx(1.2));
  CHECK(p.xi == doctest::Approx(0.8));
  CHECK(p.epsilon == doctest::Approx(0.05));
  CHECK(p.delta == doctest::Approx(1.5));
  CHECK(p.m == doctest::Approx(0.5));
  CHECK(p.alpha == 0.7);

  dp.K = dp.a = 3.7;
  CHECK(nondimensionalize(dp).gamma == 1.0);
  dp.A = 0.0;
  CHECK(nondimensionalize(dp).xi == 0.0);

  dp.m1 = 2.0;
  CHECK_THROWS_AS(nondimensionalize(dp), InvalidParameter);
}

TEST_CASE("vector field special points") {
  ModelParams p{1.0, 1.0, 0.0, 0.5, 8.0, 6.0};
  const Vec2 f0 = vector_field(p, {0, 0}, SystemKind::AdditionalFood);
  CHECK(f0.norm() == 0.0);
  const Vec2 f1 = vector_field(p, {p.gamma, 0}, SystemKind::AdditionalFood);
  CHECK(f1.norm() == 0.0);
  // on the predator axis dy/dt = y (8/(1 + 0.5 y) - 6)
  for (double y : {0.1, 1.0, 3.0}) {
    CHECK(vector_field(p, {0, y}, SystemKind::AdditionalFood).y() == doctest::Approx(y * (8.0 / (1 + 0.5 * y) - 6.0)));
  }
  const double y2 = p.food_margin() / (p.m * p.epsilon);
  CHECK(y2 == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(vector_field(p, {0, y2}, SystemKind::AdditionalFood).y()) < 1e-12);
}

TEST_CASE("vector field matches transcription") {
  oracle::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p = oracle::random_params(rng);
    const double x = rng.uniform(0, 2 * p.gamma), y = rng.uniform(0, 30);
    const auto [fx, fy] = oracle::rhs(p, x, y);
    const Vec2 f = vector_field(p, {x, y}, SystemKind::AdditionalFood);
    CHECK(oracle::rel_err(f.x(), fx) < 1e-13);
    CHECK(oracle::rel_err(f.y(), fy) < 1e-13);
  }
}

TEST_CASE("initial kind is bit-identical to xi = 0") {
  oracle::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    ModelParams p = oracle::random_params(rng);
    const State s{rng.uniform(0, 20), rng.uniform(0, 20)};
    ModelParams q = p;
    q.xi = 0.0;
    const Vec2 a = vector_field(p, s, SystemKind::Initial);
    const Vec2 b = vector_field(q, s, SystemKind::AdditionalFood);
    CHECK(a.x() == b.x());
    CHECK(a.y() == b.y());
    const Mat2 Ja = jacobian(p, s, SystemKind::Initial);
    const Mat2 Jb = jacobian(q, s, SystemKind::AdditionalFood);
    CHECK((Ja.array() == Jb.array()).all());
  }
}

TEST_CASE("jacobian at the boundary equilibria") {
  oracle::Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const ModelParams p = oracle::random_params(rng);
    const double axi = p.alpha * p.xi;
    const Mat2 J0 = jacobian(p, {0, 0}, SystemKind::AdditionalFood);
    CHECK(J0(0, 0) == doctest::Approx(1.0));
    CHECK(J0(0, 1) == 0.0);
    CHECK(J0(1, 0) == 0.0);
    CHECK(J0(1, 1) == doctest::Approx(p.food_margin() / (1 + axi)));

    const double g2 = p.gamma * p.gamma;
    const Mat2 J1 = jacobian(p, {p.gamma, 0}, SystemKind::AdditionalFood);
    CHECK(J1(0, 0) == doctest::Approx(-1.0));
    CHECK(J1(0, 1) == doctest::Approx(-g2 / (1 + g2 + axi)));
    CHECK(J1(1, 0) == 0.0);
    CHECK(J1(1, 1) == doctest::Approx(((p.delta - p.m) * g2 + p.food_margin()) / (g2 + 1 + axi)));
  }
}

TEST_CASE("jacobian matches central differences") {
  oracle::Rng rng(13);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = oracle::random_params(rng);
    const SystemKind kind = i % 2 ? SystemKind::Initial : SystemKind::AdditionalFood;
    const Vec2 s(rng.uniform(0.01, 2 * p.gamma), rng.uniform(0.01, 30));
    const Mat2 fd = oracle::fd_jacobian(
        [&](const Vec2& v) {
          const auto [a, b] = oracle::rhs(p, v.x(), v.y(), kind == SystemKind::Initial);
          return Vec2(a, b);
        },
        s);
    worst = std::max(worst, oracle::rel_err(jacobian(p, State::from(s), kind), fd));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("negative state is a domain error") {
  ModelParams p;
  CHECK_THROWS_AS(vector_field(p, {-1.0, 0.0}, SystemKind::Initial), DomainError);
  CHECK_THROWS_AS(jacobian(p, {0.0, -1e-3}, SystemKind::AdditionalFood), DomainError);
}

TEST_CASE("params validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.delta = p.m;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = {};
  p.xi = -0.1;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = {};
  p.epsilon = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
}

TEST_CASE("dimensional trajectory maps onto the nondimensional one") {
  // r and c differ so the time and predator scalings are both exercised.
  for (double r : {1.0, 2.5}) {
    DimensionalParams dp;
    dp.r = r;
    dp.K = 6.0;
    dp.a = 1.5;
    dp.c = r == 1.0 ? 1.0 : 3.0;
    dp.delta1 = 4.0 * r;
    dp.m1 = 1.5 * r;
    dp.eta = 0.6;
    dp.A = 2.0;
    dp.eps1 = 0.4;
    const double alpha = 0.8;
    const ModelParams p = nondimensionalize(dp, alpha);

    const Vec2 NP0(2.0, 1.2);
    const State s0 = to_nondimensional_state(dp, NP0);
    const double t_end = 30.0;
    std::vector<double> ts;
    for (int k = 0; k <= 60; ++k) ts.push_back(t_end * k / 60.0);
    std::vector<double> Ts;
    for (double t : ts) Ts.push_back(t / dp.r);

    const Tolerances tight{1e-12, 1e-11};
    const Trajectory nd = integrate(p, s0, SystemKind::AdditionalFood, t_end, tight, ts);
    const Trajectory dim =
        integrate_field([&](const Vec2& v) { return dimensional_field(dp, alpha, v); }, NP0, t_end / dp.r, tight, Ts);
    REQUIRE(nd.states.size() == dim.states.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < nd.states.size(); ++i) {
      const State mapped = to_nondimensional_state(dp, dim.states[i].vec());
      worst = std::max(worst, (mapped.vec() - nd.states[i].vec()).norm());
    }
    CHECK(worst < 1e-7);
  }
}

}  // TEST_SUITE
