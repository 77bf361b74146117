#include "afpp/atlas.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <thread>

namespace afpp {

std::string_view to_string(CellOutcome o) {
  switch (o) {
    case CellOutcome::InteriorStable: return "interior_stable";
    case CellOutcome::AxialPreyStable: return "axial_prey_stable";
    case CellOutcome::PreyEliminated: return "prey_eliminated";
    case CellOutcome::LimitCycle: return "limit_cycle";
    case CellOutcome::Mixed: return "mixed";
  }
  return "unknown";
}

std::size_t SweepGrid::size() const {
  auto n = [](const std::vector<double>& v) { return std::max<std::size_t>(1, v.size()); };
  return n(alpha) * n(xi) * n(epsilon);
}

namespace {

std::optional<CellOutcome> label_of_equilibrium(const ClassifiedEquilibrium& ce, const SweepOptions& opt) {
  if (!ce.cls.stable()) return std::nullopt;
  if (ce.eq.point.x < opt.prey_elimination_x) return CellOutcome::PreyEliminated;
  if (ce.eq.kind == EquilibriumKind::AxialPrey) return CellOutcome::AxialPreyStable;
  if (ce.eq.kind == EquilibriumKind::Interior) return CellOutcome::InteriorStable;
  return std::nullopt;
}

// Simulated attractor mapped onto the analytic picture; nullopt when the
// two disagree.
std::optional<CellOutcome> label_of_outcome(const AsymptoticOutcome& o, const std::vector<ClassifiedEquilibrium>& eqs,
                                            const SweepOptions& opt) {
  if (o.kind == OutcomeKind::Undetermined) return std::nullopt;
  if (o.kind == OutcomeKind::LimitCycle) {
    const bool unstable_focus = std::any_of(eqs.begin(), eqs.end(), [](const ClassifiedEquilibrium& ce) {
      return ce.eq.kind == EquilibriumKind::Interior && ce.cls.kind == StabilityKind::UnstableFocus;
    });
    if (!unstable_focus) return std::nullopt;
    return CellOutcome::LimitCycle;
  }
  const ClassifiedEquilibrium* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& ce : eqs) {
    const double d = (ce.eq.point.vec() - o.point.vec()).norm();
    if (d < best_d) {
      best_d = d;
      best = &ce;
    }
  }
  if (!best || best_d > opt.match_tol) return std::nullopt;
  return label_of_equilibrium(*best, opt);
}

}  // namespace

AtlasCell analyze_cell(const ModelParams& p, const std::vector<State>& initial, const SweepOptions& opt) {
  AtlasCell cell;
  cell.alpha = p.alpha;
  cell.xi = p.xi;
  cell.epsilon = p.epsilon;
  try {
    for (const auto& e : equilibria_all(p, opt.kind)) cell.equilibria.push_back({e, classify(p, e, opt.kind)});

    std::vector<std::optional<CellOutcome>> labels;
    if (initial.empty()) {
      std::vector<CellOutcome> stable;
      for (const auto& ce : cell.equilibria)
        if (auto l = label_of_equilibrium(ce, opt)) stable.push_back(*l);
      const bool unstable_focus = std::any_of(cell.equilibria.begin(), cell.equilibria.end(), [](const auto& ce) {
        return ce.eq.kind == EquilibriumKind::Interior && ce.cls.kind == StabilityKind::UnstableFocus;
      });
      if (stable.size() == 1) labels.push_back(stable.front());
      else if (stable.empty() && unstable_focus) labels.push_back(CellOutcome::LimitCycle);
      else labels.push_back(std::nullopt);
    } else {
      for (const auto& s0 : initial) {
        cell.simulated.push_back(asymptotic_outcome(p, s0, opt.kind, opt.outcome));
        labels.push_back(label_of_outcome(cell.simulated.back(), cell.equilibria, opt));
      }
    }
    const bool uniform = std::all_of(labels.begin(), labels.end(), [&](const auto& l) { return l && *l == *labels.front(); });
    cell.outcome = uniform ? *labels.front() : CellOutcome::Mixed;
  } catch (const std::exception& ex) {
    cell.outcome = CellOutcome::Mixed;
    cell.error = ex.what();
  }
  return cell;
}

std::vector<AtlasCell> sweep(const ModelParams& base, const SweepGrid& grid, const std::vector<State>& initial,
                             const SweepOptions& opt) {
  auto axis = [](const std::vector<double>& v, double fallback) {
    return v.empty() ? std::vector<double>{fallback} : v;
  };
  const auto A = axis(grid.alpha, base.alpha);
  const auto X = axis(grid.xi, base.xi);
  const auto E = axis(grid.epsilon, base.epsilon);
  const std::size_t n = A.size() * X.size() * E.size();

  std::vector<AtlasCell> cells(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      ModelParams p = base;
      p.alpha = A[i / (X.size() * E.size())];
      p.xi = X[(i / E.size()) % X.size()];
      p.epsilon = E[i % E.size()];
      cells[i] = analyze_cell(p, initial, opt);
      cells[i].index = i;
    }
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return cells;
}

}  // namespace afpp
