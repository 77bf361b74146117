#include <cmath>

#include "afpp/atlas.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace afpp;

namespace {

const std::vector<State> kStarts{{0.5, 0.5}, {0.9, 2.0}, {0.2, 5.0}};

// The outcome label must be backed by the classified equilibria.
void check_cell_invariant(const AtlasCell& c) {
  auto any = [&](auto pred) {
    return std::any_of(c.equilibria.begin(), c.equilibria.end(), pred);
  };
  switch (c.outcome) {
    case CellOutcome::AxialPreyStable:
      CHECK(any([](const ClassifiedEquilibrium& ce) { return ce.eq.kind == EquilibriumKind::AxialPrey && ce.cls.stable(); }));
      break;
    case CellOutcome::InteriorStable:
      CHECK(any([](const ClassifiedEquilibrium& ce) { return ce.eq.kind == EquilibriumKind::Interior && ce.cls.stable(); }));
      break;
    case CellOutcome::PreyEliminated:
      CHECK(any([](const ClassifiedEquilibrium& ce) { return ce.cls.stable() && ce.eq.point.x < 1e-2; }));
      break;
    case CellOutcome::LimitCycle:
      CHECK(any([](const ClassifiedEquilibrium& ce) {
        return ce.eq.kind == EquilibriumKind::Interior && ce.cls.kind == StabilityKind::UnstableFocus;
      }));
      break;
    case CellOutcome::Mixed: break;
  }
}

}  // namespace

TEST_SUITE("atlas") {

TEST_CASE("grid size and order") {
  SweepGrid g;
  CHECK(g.size() == 1);
  g.alpha = {0, 1};
  g.xi = {0.5, 1, 2};
  g.epsilon = {0.1, 0.2};
  CHECK(g.size() == 12);
  ModelParams base{1.0, 1.0, 0.0, 0.5, 8.0, 6.0};
  const auto cells = sweep(base, g, {});
  REQUIRE(cells.size() == 12);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK(cells[i].index == i);
    CHECK(cells[i].alpha == g.alpha[i / 6]);
    CHECK(cells[i].xi == g.xi[(i / 2) % 3]);
    CHECK(cells[i].epsilon == g.epsilon[i % 2]);
  }
}

TEST_CASE("alpha sweep in region I ends on the prey axis") {
  ModelParams base{1.0, 1.0, 0.0, 0.5, 8.0, 6.0};
  SweepGrid g;
  g.alpha = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
  const auto cells = sweep(base, g, kStarts);
  for (const auto& c : cells) {
    CHECK_FALSE(c.error);
    check_cell_invariant(c);
  }
  CHECK(cells.back().outcome == CellOutcome::AxialPreyStable);
  CHECK(cells[cells.size() - 2].outcome == CellOutcome::AxialPreyStable);
  // low quality keeps a coexistence state
  CHECK(cells.front().outcome != CellOutcome::AxialPreyStable);
}

TEST_CASE("epsilon sweep at high quality and quantity") {
  ModelParams base{7.0, 10.0, 10.0, 0.5, 6.0, 4.0};
  SweepGrid g;
  g.epsilon = {0.1, 0.5, 1.0, 2.0, 4.0};
  const std::vector<State> starts{{1.0, 1.0}, {5.0, 3.0}, {0.3, 8.0}};
  for (const auto& c : sweep(base, g, starts)) {
    CHECK_FALSE(c.error);
    CHECK(c.outcome == CellOutcome::AxialPreyStable);
    check_cell_invariant(c);
  }
}

TEST_CASE("region IV base gives a limit cycle") {
  ModelParams base{17.0, 0.0, 0.0, 0.35, 3.8, 3.0};
  const auto cells = sweep(base, {}, {{3.0, 3.0}, {10.0, 20.0}});
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].outcome == CellOutcome::LimitCycle);
  check_cell_invariant(cells[0]);
}

TEST_CASE("analytic fallback without initial states") {
  ModelParams p{11.0, 0.0, 0.0, 1.0, 8.0, 6.0};
  CHECK(analyze_cell(p, {}, {}).outcome == CellOutcome::InteriorStable);
  p = {17.0, 0.0, 0.0, 0.35, 3.8, 3.0};
  CHECK(analyze_cell(p, {}, {}).outcome == CellOutcome::LimitCycle);
}

TEST_CASE("simulation agrees with the analysis over random cells") {
  oracle::Rng rng(606);
  for (int i = 0; i < 40; ++i) {
    ModelParams p = oracle::random_params(rng);
    p.gamma = rng.uniform(0.5, 8.0);
    std::vector<State> starts{{0.5 * p.gamma, 1.0}, {0.9 * p.gamma, 0.2}};
    const AtlasCell c = analyze_cell(p, starts, {});
    CHECK_FALSE(c.error);
    check_cell_invariant(c);
    for (const auto& o : c.simulated) {
      if (o.kind != OutcomeKind::Point) continue;
      // every settled point is a stable equilibrium
      bool matched = false;
      for (const auto& ce : c.equilibria)
        matched = matched || ((ce.eq.point.vec() - o.point.vec()).norm() < 1e-6 && ce.cls.stable());
      CHECK(matched);
    }
  }
}

TEST_CASE("bad cells keep the sweep going") {
  ModelParams base{1.0, 1.0, 0.0, 0.5, 8.0, 6.0};
  SweepGrid g;
  g.epsilon = {0.5, -1.0, 0.7};
  const auto cells = sweep(base, g, kStarts);
  REQUIRE(cells.size() == 3);
  CHECK_FALSE(cells[0].error);
  REQUIRE(cells[1].error);
  CHECK(cells[1].outcome == CellOutcome::Mixed);
  CHECK_FALSE(cells[2].error);
}

TEST_CASE("thread count does not change the atlas") {
  ModelParams base{1.0, 1.0, 0.0, 0.5, 8.0, 6.0};
  SweepGrid g;
  g.alpha = {0.0, 1.0, 3.0, 6.0};
  g.xi = {0.2, 1.0, 3.0};
  SweepOptions one, four;
  four.threads = 4;
  const auto a = sweep(base, g, kStarts, one);
  const auto b = sweep(base, g, kStarts, four);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].index == b[i].index);
    CHECK(a[i].outcome == b[i].outcome);
    REQUIRE(a[i].simulated.size() == b[i].simulated.size());
    for (std::size_t k = 0; k < a[i].simulated.size(); ++k) {
      CHECK(a[i].simulated[k].point == b[i].simulated[k].point);
      CHECK(a[i].simulated[k].t_final == b[i].simulated[k].t_final);
    }
  }
}

}  // TEST_SUITE
