// Closed-form asymptotics of X_n: the function gamma(u) that controls
// everything, the (E, E', V, V') moment expansion, the stationary point of
// the lattice-sum exponent with its stationary values, and the scaled
// Laplace-transform pair (f, g) whose derivatives at 0 reproduce the
// expansion (quasi-powers route).

#ifndef CONDIFF_ASYMPTOTICS_HPP
#define CONDIFF_ASYMPTOTICS_HPP

#include <array>
#include <cstdint>

#include "condiff/rates.hpp"

namespace condiff {

// E(X_n) = n*e_lead + e_const + o(1), V(X_n) = n*v_lead + v_const + o(1).
struct AsymptoticMoments {
  double e_lead = 0.0;
  double e_const = 0.0;
  double v_lead = 0.0;
  double v_const = 0.0;
};

// Stationary point of the summand exponent phi_u together with its
// stationary values. Degenerate cases are reported in the canonical
// coordinates of their reduced form (tau_b = 0, resp. tau_b = tau_d = 0);
// reduced_rates / reduced_u record the symmetry reduction that was applied.
// phi_star equals -2*sqrt(gamma(u)) of the ORIGINAL rates in every case.
struct SaddleData {
  int dimension = 3;  // 3 generic, 2 single zero, 1 opposite pair
  std::array<double, 3> point{};  // first `dimension` coordinates meaningful
  double psi_star = 0.0;
  double phi_star = 0.0;
  double hessian_det = 0.0;
  Rates reduced_rates;
  double reduced_u = 1.0;
};

// Values of f(s) = 2(sqrt(gamma(e^s)) - sqrt(gamma(1))) and
// g(s) = -1/4 (log gamma(e^s) - log gamma(1)), plus their first two
// derivatives at 0 (analytic, from the closed forms of gamma', gamma'').
// Identities: f1 = E, f2 = V, g1 = E', g2 = V'; the scale sequence is
// beta_n = n.
struct QuasiPowersPair {
  double f_value = 0.0;
  double g_value = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
};

// gamma(u) = (tau_a sqrt(u) + tau_d/sqrt(u)) (tau_c sqrt(u) + tau_b/sqrt(u)).
// Valid for every rate quadruple; gamma(1) = (tau_a+tau_d)(tau_b+tau_c).
double gamma_of_u(const Rates& rates, double u);

// The four closed forms. Accepts unoriented rates (the formulas are exact
// for tau_a*tau_c < tau_b*tau_d as well); rejects DiracZero rates.
AsymptoticMoments moment_expansion(const Rates& rates);

// Closed-form stationary point with admissibility checked numerically:
// the returned point must lie strictly inside the summation domain.
SaddleData saddle_point(const Rates& rates, double u);

// f, g at s plus the derivative quadruple at 0. Rejects DiracZero rates.
QuasiPowersPair quasi_powers(const Rates& rates, double s);

// log of the G_n(u) asymptote: 2n sqrt(gamma(u)) - 1/4 log gamma(u)
// - log(2 sqrt(pi n)). Admissibility as in saddle_point.
double gn_asymptote(const Rates& rates, std::int64_t n, double u);

}  // namespace condiff

#endif
