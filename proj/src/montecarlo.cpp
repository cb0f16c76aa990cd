#include "condiff/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "condiff/asymptotics.hpp"
#include "condiff/exact.hpp"

namespace condiff {

namespace {

constexpr double kMinLogAcceptance = -9.0 * 2.302585092994046;  // log(1e-9)

double uniform_pos(std::mt19937_64& rng) {
  // Midpoints of the 2^53 grid: never 0 or 1, so logs are always safe.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::int64_t poisson_inversion(std::mt19937_64& rng, double mu) {
  const double u = uniform_pos(rng);
  double p = std::exp(-mu);
  double cdf = p;
  std::int64_t k = 0;
  const std::int64_t cap = static_cast<std::int64_t>(mu + 30.0 * std::sqrt(mu + 1.0) + 100.0);
  while (u > cdf && k < cap) {
    ++k;
    p *= mu / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// Hormann's PTRS transformed-rejection sampler, exact for mu >= 10.
std::int64_t poisson_ptrs(std::mt19937_64& rng, double mu) {
  const double log_mu = std::log(mu);
  const double b = 0.931 + 2.53 * std::sqrt(mu);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform_pos(rng) - 0.5;
    const double v = uniform_pos(rng);
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::int64_t>(kd);
    }
    if (kd < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mu + kd * log_mu - std::lgamma(kd + 1.0);
    if (lhs <= rhs) {
      return static_cast<std::int64_t>(kd);
    }
  }
}

}  // namespace

std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::int64_t poisson_draw(std::mt19937_64& rng, double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("poisson_draw: mu must be finite and >= 0");
  }
  if (mu == 0.0) return 0;
  return mu < 10.0 ? poisson_inversion(rng, mu) : poisson_ptrs(rng, mu);
}

double predicted_log_acceptance(const Rates& rates, std::int64_t n) {
  const double g1 = gamma_of_u(rates, 1.0);
  const double nd = static_cast<double>(n);
  return -nd * (rates.sum() - 2.0 * std::sqrt(g1)) -
         std::log(2.0 * std::sqrt(std::numbers::pi * nd)) - 0.25 * std::log(g1);
}

SampleBatch sample_conditional(const Rates& rates, std::int64_t n, std::uint64_t count,
                               std::uint64_t seed) {
  if (count < 1) {
    throw std::invalid_argument("sample_conditional: count must be >= 1");
  }
  const ScaledIntensities si = scale(rates, n);
  const double log_acc = predicted_log_acceptance(rates, n);
  if (log_acc < kMinLogAcceptance) {
    throw std::domain_error(
        "sample_conditional: predicted acceptance probability exp(" + std::to_string(log_acc) +
        ") is below 1e-9; the conditioning event is exponentially rare here — use conditional_pmf "
        "for this regime instead of rejection sampling");
  }

  SampleBatch batch;
  batch.rates = rates;
  batch.n = n;
  batch.seed = seed;
  batch.samples.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(mix64(seed, i));
    for (;;) {
      ++batch.attempts;
      const std::int64_t a = poisson_draw(rng, si.mu_a);
      const std::int64_t b = poisson_draw(rng, si.mu_b);
      const std::int64_t c = poisson_draw(rng, si.mu_c);
      const std::int64_t d = poisson_draw(rng, si.mu_d);
      if (a - b == c - d) {
        batch.samples.push_back(a - b);
        break;
      }
    }
  }
  return batch;
}

EmpiricalSummary summarize(const SampleBatch& batch, double center, double spread) {
  const std::size_t n = batch.samples.size();
  if (n < 2) {
    throw std::invalid_argument("summarize: need at least 2 samples");
  }
  if (!(spread > 0.0)) {
    throw std::invalid_argument("summarize: spread must be positive");
  }
  const double nd = static_cast<double>(n);
  double mean = 0.0;
  for (std::int64_t x : batch.samples) mean += static_cast<double>(x);
  mean /= nd;
  double m2 = 0.0, m4 = 0.0;
  for (std::int64_t x : batch.samples) {
    const double d = static_cast<double>(x) - mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / (nd - 1.0);
  m2 /= nd;
  m4 /= nd;

  EmpiricalSummary s;
  s.mean = mean;
  s.variance = var;
  s.stderr_mean = std::sqrt(var / nd);
  s.stderr_var = std::sqrt(std::max(0.0, m4 - (nd - 3.0) / (nd - 1.0) * var * var) / nd);

  // Empirical two-sided Kolmogorov distance over the (tied) lattice values.
  std::map<std::int64_t, std::uint64_t> counts;
  for (std::int64_t x : batch.samples) ++counts[x];
  double sup = 0.0;
  double cum = 0.0;
  for (const auto& [value, cnt] : counts) {
    const double phi = normal_cdf((static_cast<double>(value) - center) / spread);
    sup = std::max(sup, std::abs(cum / nd - phi));
    cum += static_cast<double>(cnt);
    sup = std::max(sup, std::abs(cum / nd - phi));
  }
  s.ks_to_gaussian = sup;
  return s;
}

}  // namespace condiff
