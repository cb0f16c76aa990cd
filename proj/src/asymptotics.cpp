#include "condiff/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace condiff {

namespace {

void require_positive_u(double u, const char* who) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::invalid_argument(std::string(who) + ": u must be positive and finite");
  }
}

void require_not_dirac(const Rates& r, const char* who) {
  if (classify(r).is_dirac()) {
    throw std::domain_error(std::string(who) +
                            ": DiracZero rates have the point-mass law; no expansion applies");
  }
}

struct GammaFactors {
  double alpha;  // tau_a sqrt(u) + tau_d / sqrt(u)
  double beta;   // tau_c sqrt(u) + tau_b / sqrt(u)
};

GammaFactors gamma_factors(const Rates& r, double u) {
  const double su = std::sqrt(u);
  return {r.tau_a * su + r.tau_d / su, r.tau_c * su + r.tau_b / su};
}

// (A<->B, C<->D): maps X to -X and u to 1/u.
Rates swap_ab_cd(const Rates& r) { return Rates{r.tau_b, r.tau_a, r.tau_d, r.tau_c}; }
// (A<->C, B<->D): leaves the law and u unchanged.
Rates swap_ac_bd(const Rates& r) { return Rates{r.tau_c, r.tau_d, r.tau_a, r.tau_b}; }

SaddleData saddle_generic(const Rates& r, double u) {
  const auto [alpha, beta] = gamma_factors(r, u);
  const double su = std::sqrt(u);
  const double g = alpha * beta;
  const double x = r.tau_b / su * std::sqrt(alpha / beta);
  const double y = r.tau_d / su * std::sqrt(beta / alpha);
  const double z = (r.tau_a * r.tau_c * u - r.tau_b * r.tau_d / u) / std::sqrt(g);
  if (!(z > -x) || !(z > -y)) {
    throw std::domain_error("saddle_point: u is outside the admissible window: z* > max(-x*, -y*) fails (z*=" +
                            std::to_string(z) + ", x*=" + std::to_string(x) +
                            ", y*=" + std::to_string(y) + ")");
  }
  const double prod = r.tau_a * r.tau_b * r.tau_c * r.tau_d;
  SaddleData out;
  out.dimension = 3;
  out.point = {x, y, z};
  out.psi_star = 1.0 / std::sqrt(prod);
  out.phi_star = -2.0 * std::sqrt(g);
  out.hessian_det = 2.0 / prod * std::sqrt(g);
  out.reduced_rates = r;
  out.reduced_u = u;
  return out;
}

// Canonical tau_b = 0 case: double sum over (a, d)/n.
SaddleData saddle_single_zero(const Rates& r, double u) {
  const double delta = r.tau_a * r.tau_c * u + r.tau_c * r.tau_d;  // = gamma(u) here
  const double sq = std::sqrt(delta);
  const double x = r.tau_a * r.tau_c * u / sq;
  const double y = r.tau_c * r.tau_d / sq;
  if (!(x > 0.0) || !(y > 0.0)) {
    throw std::domain_error("saddle_point: degenerate stationary point left the open quadrant");
  }
  const double w = r.tau_a * r.tau_c * r.tau_c * r.tau_d * u;
  SaddleData out;
  out.dimension = 2;
  out.point = {x, y, 0.0};
  out.psi_star = std::pow(delta, 0.25) / std::sqrt(w);
  out.phi_star = -2.0 * sq;
  out.hessian_det = 2.0 * delta / w;
  out.reduced_rates = r;
  out.reduced_u = u;
  return out;
}

// Canonical tau_b = tau_d = 0 case: single sum over a/n.
SaddleData saddle_opposite_pair(const Rates& r, double u) {
  const double x = std::sqrt(r.tau_a * r.tau_c * u);
  SaddleData out;
  out.dimension = 1;
  out.point = {x, 0.0, 0.0};
  out.psi_star = 1.0 / x;
  out.phi_star = -2.0 * x;
  out.hessian_det = 2.0 / x;
  out.reduced_rates = r;
  out.reduced_u = u;
  return out;
}

}  // namespace

double gamma_of_u(const Rates& r, double u) {
  require_positive_u(u, "gamma_of_u");
  const auto [alpha, beta] = gamma_factors(r, u);
  return alpha * beta;
}

AsymptoticMoments moment_expansion(const Rates& r) {
  require_not_dirac(r, "moment_expansion");
  const double ta = r.tau_a, tb = r.tau_b, tc = r.tau_c, td = r.tau_d;
  const double g1 = (ta + td) * (tb + tc);
  const double diag = ta * tc - tb * td;
  AsymptoticMoments m;
  m.e_lead = diag / std::sqrt(g1);
  m.e_const = -diag / (4.0 * g1);
  m.v_lead = (ta * tc + 2.0 * ta * tb + tb * td) * (ta * tc + 2.0 * tc * td + tb * td) /
             (2.0 * g1 * std::sqrt(g1));
  m.v_const = -((ta * tc + tb * td) * (ta * tb + tc * td) + 4.0 * ta * tb * tc * td) /
              (4.0 * g1 * g1);
  return m;
}

SaddleData saddle_point(const Rates& r, double u) {
  require_positive_u(u, "saddle_point");
  const CaseClass cc = classify(r);
  switch (cc.kind) {
    case CaseKind::DiracZero:
      throw std::domain_error("saddle_point: DiracZero rates have no stationary-point representation");
    case CaseKind::Generic:
      return saddle_generic(r, u);
    case CaseKind::SingleZero:
      // Reduce to the canonical tau_b = 0 form.
      switch (cc.zero_corner) {
        case Corner::B:
          return saddle_single_zero(r, u);
        case Corner::D:
          return saddle_single_zero(swap_ac_bd(r), u);
        case Corner::A:
          return saddle_single_zero(swap_ab_cd(r), 1.0 / u);
        case Corner::C:
          return saddle_single_zero(swap_ab_cd(swap_ac_bd(r)), 1.0 / u);
      }
      break;
    case CaseKind::OppositePairZero:
      if (cc.zero_pair == Diagonal::BD) {
        return saddle_opposite_pair(r, u);
      }
      return saddle_opposite_pair(swap_ab_cd(r), 1.0 / u);
  }
  throw std::logic_error("saddle_point: unreachable");
}

QuasiPowersPair quasi_powers(const Rates& r, double s) {
  require_not_dirac(r, "quasi_powers");
  if (!std::isfinite(s)) {
    throw std::invalid_argument("quasi_powers: s must be finite");
  }
  const double g1 = gamma_of_u(r, 1.0);
  const double gs = gamma_of_u(r, std::exp(s));
  // h(s) := gamma(e^s): h'(0) = gamma'(1), h''(0) = gamma''(1) + gamma'(1),
  // with gamma'(1) = tau_a tau_c - tau_b tau_d and gamma''(1) = 2 tau_b tau_d.
  const double d1 = r.tau_a * r.tau_c - r.tau_b * r.tau_d;
  const double d2 = r.tau_a * r.tau_c + r.tau_b * r.tau_d;
  const double sq1 = std::sqrt(g1);
  QuasiPowersPair q;
  q.f_value = 2.0 * (std::sqrt(gs) - sq1);
  q.g_value = -0.25 * (std::log(gs) - std::log(g1));
  q.f1 = d1 / sq1;
  q.f2 = d2 / sq1 - d1 * d1 / (2.0 * g1 * sq1);
  q.g1 = -0.25 * d1 / g1;
  q.g2 = -0.25 * (d2 * g1 - d1 * d1) / (g1 * g1);
  return q;
}

double gn_asymptote(const Rates& r, std::int64_t n, double u) {
  if (n < 1) {
    throw std::invalid_argument("gn_asymptote: n must be >= 1");
  }
  const SaddleData sd = saddle_point(r, u);  // admissibility gate
  const double g = gamma_of_u(r, u);
  const double nd = static_cast<double>(n);
  // phi_star = -2 sqrt(gamma(u)) regardless of case.
  return -nd * sd.phi_star - 0.25 * std::log(g) -
         std::log(2.0 * std::sqrt(std::numbers::pi * nd));
}

}  // namespace condiff
