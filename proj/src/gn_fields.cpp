#include "condiff/gn_fields.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "condiff/asymptotics.hpp"

namespace condiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x log x with the continuous extension 0 log 0 = 0.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

LaplaceProblem generic_sum_problem(const Rates& r, double u) {
  if (!(r.tau_a > 0 && r.tau_b > 0 && r.tau_c > 0 && r.tau_d > 0)) {
    throw std::invalid_argument("generic_sum_problem: all four rates must be positive");
  }
  if (!(u > 0.0)) {
    throw std::invalid_argument("generic_sum_problem: u must be positive");
  }
  const double la = std::log(r.tau_a), lb = std::log(r.tau_b);
  const double lc = std::log(r.tau_c), ld = std::log(r.tau_d);
  const double lu = std::log(u);

  LaplaceProblem p;
  p.dimension = 3;
  p.phi.value = [=](std::span<const double> v) {
    const double x = v[0], y = v[1], z = v[2];
    if (x < 0.0 || y < 0.0 || x + z < 0.0 || y + z < 0.0) return kInf;
    return xlogx(x) - x * (1.0 + lb) + xlogx(x + z) - (x + z) * (1.0 + la) + xlogx(y) -
           y * (1.0 + ld) + xlogx(y + z) - (y + z) * (1.0 + lc) - z * lu;
  };
  p.phi.gradient = [=](std::span<const double> v, std::span<double> out) {
    const double x = v[0], y = v[1], z = v[2];
    out[0] = std::log(x * (x + z)) - la - lb;
    out[1] = std::log(y * (y + z)) - lc - ld;
    out[2] = std::log((x + z) * (y + z)) - la - lc - lu;
  };
  p.phi.hessian = [](std::span<const double> v, std::span<double> out) {
    const double x = v[0], y = v[1], z = v[2];
    const double ixz = 1.0 / (x + z), iyz = 1.0 / (y + z);
    out[0] = 1.0 / x + ixz;  out[1] = 0.0;            out[2] = ixz;
    out[3] = 0.0;            out[4] = 1.0 / y + iyz;  out[5] = iyz;
    out[6] = ixz;            out[7] = iyz;            out[8] = ixz + iyz;
  };
  p.psi = [](std::span<const double> v) {
    const double x = v[0], y = v[1], z = v[2];
    return 1.0 / std::sqrt(x * (x + z) * y * (y + z));
  };

  const SaddleData sd = saddle_point(r, u);
  const double span = 2.0 + 2.0 * std::max({sd.point[0], sd.point[1], std::abs(sd.point[2])});
  p.box.lo = {sd.point[0] / 16.0, sd.point[1] / 16.0, sd.point[2] - span};
  p.box.hi = {sd.point[0] + span, sd.point[1] + span, sd.point[2] + span};
  for (int i = 0; i < 3; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    p.start[idx] = 0.5 * (p.box.lo[idx] + p.box.hi[idx]);
  }
  // The box midpoint can sit outside phi's natural domain when z* is very
  // negative; nudge the start into the admissible cone.
  if (p.start[0] + p.start[2] <= 0.0 || p.start[1] + p.start[2] <= 0.0) {
    p.start[2] = 0.5 * (std::abs(sd.point[2]) + 1.0);
  }
  return p;
}

LaplaceProblem single_zero_sum_problem(const Rates& r, double u) {
  if (!(r.tau_b == 0.0) || !(r.tau_a > 0 && r.tau_c > 0 && r.tau_d > 0)) {
    throw std::invalid_argument(
        "single_zero_sum_problem: canonical form requires tau_b == 0 and the rest positive");
  }
  if (!(u > 0.0)) {
    throw std::invalid_argument("single_zero_sum_problem: u must be positive");
  }
  const double la = std::log(r.tau_a), lc = std::log(r.tau_c), ld = std::log(r.tau_d);
  const double lu = std::log(u);

  LaplaceProblem p;
  p.dimension = 2;
  p.phi.value = [=](std::span<const double> v) {
    const double x = v[0], y = v[1];
    if (x < 0.0 || y < 0.0) return kInf;
    return xlogx(x) - x * (1.0 + la) + xlogx(x + y) - (x + y) * (1.0 + lc) + xlogx(y) -
           y * (1.0 + ld) - x * lu;
  };
  p.phi.gradient = [=](std::span<const double> v, std::span<double> out) {
    const double x = v[0], y = v[1];
    out[0] = std::log(x * (x + y)) - la - lc - lu;
    out[1] = std::log(y * (x + y)) - lc - ld;
  };
  p.phi.hessian = [](std::span<const double> v, std::span<double> out) {
    const double x = v[0], y = v[1];
    const double is = 1.0 / (x + y);
    out[0] = 1.0 / x + is;  out[1] = is;
    out[2] = is;            out[3] = 1.0 / y + is;
  };
  p.psi = [](std::span<const double> v) {
    const double x = v[0], y = v[1];
    return 1.0 / std::sqrt(x * (x + y) * y);
  };

  const SaddleData sd = saddle_point(r, u);
  const double span = 2.0 + 2.0 * std::max(sd.point[0], sd.point[1]);
  p.box.lo = {sd.point[0] / 16.0, sd.point[1] / 16.0, 0.0};
  p.box.hi = {sd.point[0] + span, sd.point[1] + span, 0.0};
  p.start = {0.5 * (p.box.lo[0] + p.box.hi[0]), 0.5 * (p.box.lo[1] + p.box.hi[1]), 0.0};
  return p;
}

LaplaceProblem opposite_pair_sum_problem(const Rates& r, double u) {
  if (!(r.tau_b == 0.0 && r.tau_d == 0.0) || !(r.tau_a > 0 && r.tau_c > 0)) {
    throw std::invalid_argument(
        "opposite_pair_sum_problem: canonical form requires tau_b == tau_d == 0 and tau_a, tau_c positive");
  }
  if (!(u > 0.0)) {
    throw std::invalid_argument("opposite_pair_sum_problem: u must be positive");
  }
  const double lac_u = std::log(r.tau_a * r.tau_c * u);

  LaplaceProblem p;
  p.dimension = 1;
  p.phi.value = [=](std::span<const double> v) {
    const double x = v[0];
    if (x < 0.0) return kInf;
    return x > 0.0 ? x * (2.0 * std::log(x) - 2.0 - lac_u) : 0.0;
  };
  p.phi.gradient = [=](std::span<const double> v, std::span<double> out) {
    out[0] = 2.0 * std::log(v[0]) - lac_u;
  };
  p.phi.hessian = [](std::span<const double> v, std::span<double> out) { out[0] = 2.0 / v[0]; };
  p.psi = [](std::span<const double> v) { return 1.0 / v[0]; };

  const double xs = std::sqrt(r.tau_a * r.tau_c * u);
  p.box.lo = {xs / 16.0, 0.0, 0.0};
  p.box.hi = {xs + 2.0 + 2.0 * xs, 0.0, 0.0};
  p.start = {0.5 * (p.box.lo[0] + p.box.hi[0]), 0.0, 0.0};
  return p;
}

}  // namespace condiff
