#include "afpp/model.hpp"

#include <cmath>
#include <string>

namespace afpp {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0)) throw DomainError(std::string(name) + " must be nonnegative, got " + std::to_string(v));
}

}  // namespace

void ForagingParams::validate() const {
  require_nonnegative(h_A, "h_A");
  require_nonnegative(h_P, "h_P");
  require_nonnegative(e_A, "e_A");
  require_nonnegative(e_P, "e_P");
  if (!(h_N > 0.0) || !(e_N > 0.0)) throw InvalidParameter("h_N and e_N must be positive");
}

FunctionalResponse holling3_rates(const ForagingParams& fp, double N, double P, double A) {
  fp.validate();
  require_nonnegative(N, "prey density");
  require_nonnegative(P, "predator density");
  require_nonnegative(A, "additional food");
  const double scale = 1.0 / (fp.e_N * fp.h_N);
  const double denom = scale + N * N + (fp.h_A * fp.e_A * scale) * A + (fp.h_P * fp.e_P * scale) * P;
  return {(N * N / fp.h_N) / denom, (fp.e_A * scale * A) / denom};
}

void DimensionalParams::validate() const {
  if (!(r > 0.0 && K > 0.0 && a > 0.0 && c > 0.0 && delta1 > 0.0 && m1 > 0.0))
    throw InvalidParameter("r, K, a, c, delta1 and m1 must be positive");
  if (!(A >= 0.0 && eta >= 0.0 && eps1 >= 0.0)) throw InvalidParameter("A, eta and eps1 must be nonnegative");
}

void ModelParams::validate() const {
  if (!(gamma > 0.0)) throw InvalidParameter("gamma must be positive");
  if (!(xi >= 0.0)) throw InvalidParameter("xi must be nonnegative");
  if (!(alpha >= 0.0)) throw InvalidParameter("alpha must be nonnegative");
  if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be positive");
  if (!(m > 0.0)) throw InvalidParameter("m must be positive");
  if (!(delta > m)) throw InvalidParameter("delta must exceed m");
}

void State::validate() const {
  require_nonnegative(x, "x");
  require_nonnegative(y, "y");
}

ModelParams nondimensionalize(const DimensionalParams& dp, double alpha) {
  dp.validate();
  ModelParams p;
  p.gamma = dp.K / dp.a;
  p.xi = dp.eta * dp.A / (dp.a * dp.a);
  p.alpha = alpha;
  p.epsilon = dp.eps1 * dp.a * dp.r / dp.c;
  // Predator rates are measured in units of the prey growth rate, which is
  // the time scale t = rT.
  p.delta = dp.delta1 / dp.r;
  p.m = dp.m1 / dp.r;
  if (!(p.delta > p.m)) throw InvalidParameter("nondimensional delta must exceed m");
  if (!(alpha >= 0.0)) throw InvalidParameter("alpha must be nonnegative");
  return p;
}

Vec2 vector_field(const ModelParams& p, const State& s, SystemKind kind) {
  s.validate();
  return field<double>(p, s.vec(), kind);
}

Mat2 jacobian(const ModelParams& p, const State& s, SystemKind kind) {
  s.validate();
  return field_jacobian<double>(p, s.vec(), kind);
}

Vec2 dimensional_field(const DimensionalParams& dp, double alpha, const Vec2& NP) {
  const double N = NP(0);
  const double P = NP(1);
  const double a2 = dp.a * dp.a;
  const double food = dp.eta * dp.A;
  const double denom = a2 + N * N + alpha * food + dp.eps1 * a2 * P;
  return {dp.r * N * (1.0 - N / dp.K) - dp.c * N * N * P / denom,
          dp.delta1 * (N * N + food) / denom * P - dp.m1 * P};
}

State to_nondimensional_state(const DimensionalParams& dp, const Vec2& NP) {
  return {NP(0) / dp.a, dp.c * NP(1) / (dp.a * dp.r)};
}

}  // namespace afpp
