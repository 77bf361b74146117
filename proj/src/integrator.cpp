#include "afpp/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "afpp/dopri.hpp"

namespace afpp {

namespace {

constexpr double kClamp = 1e-12;
constexpr double kMinStep = 1e-14;

// Clamps roundoff negatives; returns true if anything changed.
bool clamp_small_negatives(Vec2& y) {
  bool changed = false;
  for (int i = 0; i < 2; ++i) {
    if (y(i) < 0.0 && y(i) >= -kClamp) {
      y(i) = 0.0;
      changed = true;
    }
  }
  return changed;
}

std::string describe(double t, const Vec2& y) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "at t = %.17g, state (%.17g, %.17g)", t, y(0), y(1));
  return buf;
}

using Stepper = AdaptiveDopri<Vec2, PlanarRhs>;

void advance(Stepper& st, double t_stop) {
  if (!st.step(t_stop, clamp_small_negatives))
    throw IntegrationError("step size underflow " + describe(st.t(), st.y()));
  if (!st.y().allFinite()) throw IntegrationError("non-finite state " + describe(st.t(), st.y()));
}

}  // namespace

std::string_view to_string(TerminalReason r) {
  switch (r) {
    case TerminalReason::TimeExhausted: return "time_exhausted";
    case TerminalReason::ConvergedToPoint: return "converged_to_point";
    case TerminalReason::CycleDetected: return "cycle_detected";
  }
  return "unknown";
}

std::string_view to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Point: return "point";
    case OutcomeKind::LimitCycle: return "limit_cycle";
    case OutcomeKind::Undetermined: return "undetermined";
  }
  return "unknown";
}

Trajectory integrate_field(const PlanarRhs& f, const Vec2& s0, double t_end, const Tolerances& tol,
                           const std::vector<double>& sample_times) {
  if (!(t_end > 0.0)) throw InvalidParameter("t_end must be positive");
  if (!(tol.abs > 0.0) || !(tol.rel >= 0.0) || !(tol.max_step > 0.0))
    throw InvalidParameter("tolerances and max_step must be positive");
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw InvalidParameter("sample times must be sorted");
  if (!sample_times.empty() && (sample_times.front() < 0.0 || sample_times.back() > t_end))
    throw InvalidParameter("sample times must lie in [0, t_end]");

  Trajectory traj;
  Stepper st(f, s0, tol.abs, tol.rel);
  st.set_min_step(kMinStep);
  st.set_max_step(tol.max_step);
  auto record = [&](double t, const Vec2& y) {
    if (!traj.times.empty() && t <= traj.times.back()) return;
    traj.times.push_back(t);
    traj.states.push_back(State::from(y));
  };

  if (sample_times.empty()) {
    record(0.0, s0);
    while (st.t() < t_end) {
      advance(st, t_end);
      record(st.t(), st.y());
    }
  } else {
    std::size_t next = 0;
    while (next < sample_times.size() && sample_times[next] == 0.0) {
      record(0.0, s0);
      ++next;
    }
    while (next < sample_times.size()) {
      const double t0 = st.t();
      const Vec2 y0 = st.y(), f0 = st.dydt();
      advance(st, t_end);
      const double t1 = st.t();
      while (next < sample_times.size() && sample_times[next] <= t1) {
        const double ts = sample_times[next++];
        Vec2 y = ts == t1 ? st.y() : hermite(t0, y0, f0, t1, st.y(), st.dydt(), ts);
        clamp_small_negatives(y);
        record(ts, y);
      }
    }
  }
  traj.accepted = st.accepted();
  traj.rejected = st.rejected();
  return traj;
}

Trajectory integrate(const ModelParams& p, const State& s0, SystemKind kind, double t_end, const Tolerances& tol,
                     const std::vector<double>& sample_times) {
  p.validate();
  s0.validate();
  PlanarRhs f = [p, kind](const Vec2& y) { return field<double>(p, y, kind); };
  Trajectory traj = integrate_field(f, s0.vec(), t_end, tol, sample_times);
  traj.kind = kind;
  return traj;
}

BoundednessCertificate check_positivity_boundedness(const Trajectory& traj, const ModelParams& params) {
  if (traj.states.empty()) throw InvalidParameter("empty trajectory");
  const ModelParams p = effective(params, traj.kind);
  BoundednessCertificate cert;
  cert.K_choice = 0.5 * p.m;
  cert.M = p.gamma * (1.0 + cert.K_choice) * (1.0 + cert.K_choice) / 4.0 + p.xi / p.epsilon;
  auto W = [&](const State& s) { return s.x + s.y / p.delta; };
  cert.W0 = W(traj.states.front());
  cert.bound = std::max(cert.W0, cert.M / cert.K_choice);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    if (s.x < -kClamp || s.y < -kClamp)
      throw BoundednessViolation("negative density at sample " + std::to_string(i) + " " +
                                 describe(traj.times[i], s.vec()));
    const double w = W(s);
    cert.W_max = std::max(cert.W_max, w);
    if (w > cert.bound * (1.0 + 1e-6))
      throw BoundednessViolation("W exceeds its bound at sample " + std::to_string(i) + " " +
                                 describe(traj.times[i], s.vec()));
  }
  return cert;
}

AsymptoticOutcome asymptotic_outcome(const ModelParams& p, const State& s0, SystemKind kind,
                                     const OutcomeOptions& opt) {
  p.validate();
  s0.validate();
  PlanarRhs f = [p, kind](const Vec2& y) { return field<double>(p, y, kind); };
  Stepper st(f, s0.vec(), opt.tol.abs, opt.tol.rel);
  st.set_min_step(kMinStep);
  // Also keeps a peak from being resolved by a single huge step.
  st.set_max_step(opt.tol.max_step);

  AsymptoticOutcome out;
  std::vector<double> peak_times;
  double x_min_since_peak = s0.x, last_trough = s0.x;
  Vec2 checkpoint = s0.vec();
  double next_check = 1.0;

  while (st.t() < opt.t_end) {
    const double t0 = st.t();
    const Vec2 y0 = st.y(), f0 = st.dydt();
    advance(st, std::min(opt.t_end, next_check));
    const double t1 = st.t();
    const Vec2& y1 = st.y();
    x_min_since_peak = std::min(x_min_since_peak, y1(0));

    if (f0(0) > 0.0 && st.dydt()(0) <= 0.0) {
      // Bisect on the exact field along re-taken steps from the step start;
      // a Hermite estimate of the peak is not accurate enough to match peaks.
      Vec2 err, k7, ypk = y0;
      double a = 0.0, b = t1 - t0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        ypk = dopri_step(f, y0, f0, mid, err, k7);
        (k7(0) > 0.0 ? a : b) = mid;
      }
      const double tp = t0 + 0.5 * (a + b);
      ypk = dopri_step(f, y0, f0, 0.5 * (a + b), err, k7);
      out.peaks.push_back(ypk(0));
      peak_times.push_back(tp);
      last_trough = x_min_since_peak;
      x_min_since_peak = ypk(0);

      const std::size_t n = out.peaks.size();
      if (n >= 3) {
        const double p0 = out.peaks[n - 3], p1 = out.peaks[n - 2], p2 = out.peaks[n - 1];
        const double amp = p2 - last_trough;
        const double d1 = p1 - p0, d2 = p2 - p1;
        const double tol = opt.peak_rel_tol * std::abs(p2);
        const bool repeat = std::abs(d2) <= tol && std::abs(d1) <= opt.peak_rel_tol * std::abs(p1);
        // Peaks of a slowly attracting cycle creep geometrically; small steps
        // alone do not mean they have arrived. Estimate the remaining drift
        // from the ratio of the last two steps, unless already at roundoff.
        double tail = 0.0;
        if (std::abs(d2) > 1e-3 * tol) {
          const double rho = d1 != 0.0 ? std::abs(d2 / d1) : 0.0;
          tail = rho < 1.0 ? std::abs(d2) * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
        }
        if (repeat && tail <= tol && amp > opt.min_amplitude) {
          out.kind = OutcomeKind::LimitCycle;
          out.reason = TerminalReason::CycleDetected;
          out.period = 0.5 * (peak_times[n - 1] - peak_times[n - 3]);
          out.amplitude = amp;
          out.point = State::from(ypk);
          out.t_final = tp;
          return out;
        }
      }
    }

    if (t1 >= next_check) {
      const double speed = st.dydt().norm();
      const double moved = (y1 - checkpoint).norm();
      if (speed < opt.point_tol && moved < opt.point_tol) {
        out.kind = OutcomeKind::Point;
        out.reason = TerminalReason::ConvergedToPoint;
        out.point = State::from(y1);
        out.t_final = t1;
        return out;
      }
      checkpoint = y1;
      next_check += 1.0;
    }
  }
  out.point = State::from(st.y());
  out.t_final = st.t();
  return out;
}

}  // namespace afpp
