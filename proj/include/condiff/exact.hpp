// Exact finite-n machinery: the conditional law of X_n as a truncated pmf
// table with a certified truncation bound, its moments, values of the
// normalizing sum G_n(u), and Kolmogorov distances to the standard normal.
//
// The law factorizes over the conditioning event,
//   P(X_n = m)  is proportional to  P(A-B = m) * P(C-D = m),
// so everything reduces to stable log-space Skellam evaluations.

#ifndef CONDIFF_EXACT_HPP
#define CONDIFF_EXACT_HPP

#include <cstdint>
#include <vector>

#include "condiff/rates.hpp"

namespace condiff {

// Truncated, renormalized pmf table for X_n on [support_lo, support_hi].
// truncation_bound is a certified upper bound on the relative probability
// mass omitted by the window (0 for exact point masses).
struct ConditionalDistribution {
  std::int64_t n = 1;
  std::int64_t support_lo = 0;
  std::int64_t support_hi = 0;
  std::vector<double> probs;  // probs[i] = P(X = support_lo + i)
  double truncation_bound = 0.0;

  double prob(std::int64_t m) const {
    if (m < support_lo || m > support_hi) return 0.0;
    return probs[static_cast<std::size_t>(m - support_lo)];
  }
};

struct MomentEstimate {
  double mean = 0.0;
  double variance = 0.0;
  double error_bound = 0.0;  // propagated truncation bound, conservative
};

// Natural log of G_n(u). F_n(u) = exp(-n * sum(tau)) * G_n(u).
struct GnValue {
  double u = 1.0;
  double log_value = 0.0;
  double truncation_bound = 0.0;  // relative
};

// log P(A - B = m) for A ~ Poisson(mu1), B ~ Poisson(mu2), by direct
// convolution series summed around its largest term. Returns -inf for
// impossible outcomes (e.g. m < 0 when mu2 = 0). Exact symmetry:
// skellam_log_pmf(mu1, mu2, m) == skellam_log_pmf(mu2, mu1, -m).
double skellam_log_pmf(double mu1, double mu2, std::int64_t m);

// The conditional pmf table. The support window grows outward from the
// integer nearest n*E until both tails are certifiably below tol (relative).
// DiracZero rates return the exact point mass at 0.
ConditionalDistribution conditional_pmf(const Rates& rates, std::int64_t n,
                                        double tol);

// Mean and variance of the truncated renormalized table, with a crude but
// sound bound propagating the omitted mass over a doubled support window.
MomentEstimate exact_moments(const ConditionalDistribution& dist);

// log G_n(u) by summing the lattice in a neighborhood of its dominant term,
// organized as an outer sum over g = a-b = c-d with Skellam inner sums.
GnValue evaluate_gn(const Rates& rates, std::int64_t n, double u, double tol);

// sup_x |P((X - center)/spread <= x) - Phi(x)|, taking both one-sided values
// at every jump of the lattice cdf. Always in [0, 1].
double normalized_kolmogorov_distance(const ConditionalDistribution& dist,
                                      double center, double spread);

// Standard normal cdf.
double normal_cdf(double x);

}  // namespace condiff

#endif
