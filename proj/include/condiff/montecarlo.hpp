// Rejection-sampling oracle for X_n: draw independent Poisson quadruples,
// keep A - B when A - B = C - D. Paper-independent ground truth at small n.
//
// Each accepted sample runs on its own counter-derived substream, so batches
// are reproducible for a given (rates, n, count, seed) no matter how the
// work is partitioned.

#ifndef CONDIFF_MONTECARLO_HPP
#define CONDIFF_MONTECARLO_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "condiff/rates.hpp"

namespace condiff {

struct SampleBatch {
  Rates rates;
  std::int64_t n = 1;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> samples;
  std::uint64_t attempts = 0;  // quadruples drawn, accepted or not

  std::uint64_t accepted() const { return samples.size(); }
  double acceptance_rate() const {
    return attempts == 0 ? 0.0 : static_cast<double>(samples.size()) / static_cast<double>(attempts);
  }
};

struct EmpiricalSummary {
  double mean = 0.0;
  double variance = 0.0;     // unbiased sample variance
  double stderr_mean = 0.0;
  double stderr_var = 0.0;   // via the fourth central moment
  double ks_to_gaussian = 0.0;
};

// SplitMix-style finalizer keying substream i off the batch seed.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t index);

// Exact Poisson variate: inversion by sequential search for mu < 10,
// transformed rejection (PTRS) for larger mu.
std::int64_t poisson_draw(std::mt19937_64& rng, double mu);

// Predicted log acceptance probability of the conditioning event,
// log F_n(1) ~ -n (sum tau - 2 sqrt(gamma(1))) - log(2 sqrt(pi n))
//              - 1/4 log gamma(1).
double predicted_log_acceptance(const Rates& rates, std::int64_t n);

// Draws until `count` acceptances. Refuses (std::domain_error) when the
// predicted acceptance probability is below 1e-9: off the balanced manifold
// the event is exponentially rare and the exact series is the right tool.
SampleBatch sample_conditional(const Rates& rates, std::int64_t n, std::uint64_t count,
                               std::uint64_t seed);

// Sample mean/variance with standard errors, plus the empirical Kolmogorov
// distance of (x - center)/spread to the standard normal. Needs >= 2 samples.
EmpiricalSummary summarize(const SampleBatch& batch, double center, double spread);

}  // namespace condiff

#endif
