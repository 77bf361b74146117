#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace afpp {

/// Dormand-Prince 5(4) tableau.
namespace dp {
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
}  // namespace dp

/// One explicit Dormand-Prince step of size h for an autonomous system.
/// Returns the 5th-order solution; `err` receives the embedded error
/// estimate and `k7` the derivative at the new point (FSAL).
template <typename Vec, typename Rhs>
Vec dopri_step(const Rhs& f, const Vec& y, const Vec& k1, double h, Vec& err, Vec& k7) {
  using namespace dp;
  const Vec k2 = f(Vec(y + h * (a21 * k1)));
  const Vec k3 = f(Vec(y + h * (a31 * k1 + a32 * k2)));
  const Vec k4 = f(Vec(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  const Vec k5 = f(Vec(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  const Vec k6 = f(Vec(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
  Vec y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
  k7 = f(y1);
  err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return y1;
}

/// Fixed-step integration over duration `span` using `steps` DP5 steps.
template <typename Vec, typename Rhs>
Vec dopri_fixed(const Rhs& f, Vec y, double span, int steps) {
  const double h = span / steps;
  Vec err, k7;
  Vec k1 = f(y);
  for (int i = 0; i < steps; ++i) {
    y = dopri_step(f, y, k1, h, err, k7);
    k1 = k7;
  }
  return y;
}

/// Cubic Hermite interpolation between (t0, y0, f0) and (t1, y1, f1).
template <typename Vec>
Vec hermite(double t0, const Vec& y0, const Vec& f0, double t1, const Vec& y1, const Vec& f1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * y0 + (h10 * h) * f0 + h01 * y1 + (h11 * h) * f1;
}

/// Adaptive stepper state for autonomous y' = f(y).
template <typename Vec, typename Rhs>
class AdaptiveDopri {
 public:
  AdaptiveDopri(Rhs f, Vec y0, double abs_tol, double rel_tol, double t0 = 0.0)
      : f_(std::move(f)), t_(t0), y_(std::move(y0)), abs_tol_(abs_tol), rel_tol_(rel_tol) {
    k1_ = f_(y_);
    h_ = initial_step();
  }

  double t() const { return t_; }
  const Vec& y() const { return y_; }
  const Vec& dydt() const { return k1_; }
  double last_step() const { return last_h_; }
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }

  void set_max_step(double h) { h_max_ = h; }
  void set_min_step(double h) { h_min_ = h; }

  /// Advances one accepted step without passing t_stop. Returns false when
  /// the step size underflows.
  template <typename Fixup>
  bool step(double t_stop, Fixup&& fixup) {
    for (;;) {
      double h = std::min({h_, h_max_, t_stop - t_});
      const bool hits_stop = h >= t_stop - t_;
      if (h < h_min_ && !hits_stop) return false;
      Vec err, k7;
      Vec y1 = dopri_step(f_, y_, k1_, h, err, k7);
      double norm = 0.0;
      for (Eigen::Index i = 0; i < y_.size(); ++i) {
        const double sc = abs_tol_ + rel_tol_ * std::max(std::abs(y_(i)), std::abs(y1(i)));
        norm = std::max(norm, std::abs(err(i)) / sc);
      }
      if (!std::isfinite(norm)) norm = 1e10;
      if (norm <= 1.0) {
        if (fixup(y1)) k7 = f_(y1);
        t_ = hits_stop ? t_stop : t_ + h;
        y_ = std::move(y1);
        k1_ = std::move(k7);
        last_h_ = h;
        ++accepted_;
        const double fac = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        if (!hits_stop || h == h_) h_ = h * fac;
        return true;
      }
      ++rejected_;
      h_ = h * std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 0.9);
      if (h_ < h_min_ && t_stop - t_ > h_min_) return false;
    }
  }

  bool step(double t_stop) {
    return step(t_stop, [](Vec&) { return false; });
  }

 private:
  double initial_step() const {
    double n0 = 0.0, n1 = 0.0;
    for (Eigen::Index i = 0; i < y_.size(); ++i) {
      const double sc = abs_tol_ + rel_tol_ * std::abs(y_(i));
      n0 = std::max(n0, std::abs(y_(i)) / sc);
      n1 = std::max(n1, std::abs(k1_(i)) / sc);
    }
    double h = (n0 < 1e-5 || n1 < 1e-5) ? 1e-6 : 0.01 * n0 / n1;
    return std::clamp(h, 1e-10, 0.1);
  }

  Rhs f_;
  double t_;
  Vec y_;
  Vec k1_;
  double abs_tol_, rel_tol_;
  double h_ = 1e-3;
  double last_h_ = 0.0;
  double h_max_ = std::numeric_limits<double>::infinity();
  double h_min_ = 1e-14;
  std::size_t accepted_ = 0, rejected_ = 0;
};

}  // namespace afpp
