#include "condiff/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>

#include "condiff/asymptotics.hpp"
#include "condiff/logspace.hpp"

namespace condiff {

namespace {

constexpr std::int64_t kMaxSeriesTerms = 50'000'000;

void require_tol(double tol, const char* who) {
  if (!(tol > 0.0) || !(tol < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": tol must lie in (0, 1)");
  }
}

// A window [lo, hi] of log-terms of a log-concave sequence, expanded outward
// from its peak until both tails are certifiably below the requested
// relative tolerance. Log-concavity makes successive term ratios
// nonincreasing, so once the boundary ratio r < 1 the geometric bound
// t_edge * r / (1 - r) dominates the whole tail.
struct UnimodalWindow {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::deque<double> log_terms;  // index m - lo
  double log_total = kNegInf;
  double log_tail_lo = kNegInf;
  double log_tail_hi = kNegInf;

  double relative_tail() const {
    return std::exp(log_add(log_tail_lo, log_tail_hi) - log_total);
  }
};

UnimodalWindow expand_unimodal_window(const std::function<double(std::int64_t)>& log_term,
                                      std::int64_t center_hint, std::int64_t must_include,
                                      double tol) {
  std::int64_t c = center_hint;
  double tc = log_term(c);
  if (tc == kNegInf) {
    // Walk toward 0; the weight at 0 is positive for every valid quadruple.
    const std::int64_t step = c > 0 ? -1 : +1;
    std::int64_t guard = 0;
    while (tc == kNegInf) {
      if (c == 0 || ++guard > kMaxSeriesTerms) {
        throw std::domain_error("window expansion: no probability mass found near the predicted mode");
      }
      c += step;
      tc = log_term(c);
    }
  }
  // Hill-climb to the peak (unimodal, so local ascent is global).
  while (log_term(c + 1) > tc) tc = log_term(++c);
  while (log_term(c - 1) > tc) tc = log_term(--c);

  UnimodalWindow w;
  w.lo = w.hi = c;
  w.log_terms.push_back(tc);
  LogSumAccumulator acc;
  acc.add(tc);

  const double log_tol = std::log(tol);
  const double log_quarter_tol = log_tol - std::log(4.0);

  auto grow = [&](int dir) -> double {  // returns certified log tail bound
    std::int64_t pos = c;
    double t_prev = tc;
    int consec_small = 0;
    std::int64_t iters = 0;
    for (;;) {
      if (++iters > kMaxSeriesTerms) {
        throw std::domain_error("window expansion: term budget exhausted before certification");
      }
      const std::int64_t next = pos + dir;
      const double t = log_term(next);
      if (t == kNegInf) {
        // Support edge: the weight support is an interval, so everything
        // beyond is zero and the tail bound is exact.
        return kNegInf;
      }
      pos = next;
      if (dir > 0) {
        w.log_terms.push_back(t);
        w.hi = pos;
      } else {
        w.log_terms.push_front(t);
        w.lo = pos;
      }
      acc.add(t);
      consec_small = (t < tc + log_tol) ? consec_small + 1 : 0;
      const double log_r = t - t_prev;
      t_prev = t;
      const bool covered = dir > 0 ? pos >= must_include : pos <= must_include;
      if (covered && consec_small >= 10 && log_r < -1e-3) {
        const double r = std::exp(log_r);
        const double log_tail = t + log_r - std::log1p(-r);
        if (log_tail <= log_quarter_tol + acc.log_total()) {
          return log_tail;
        }
      }
    }
  };

  w.log_tail_hi = grow(+1);
  w.log_tail_lo = grow(-1);
  w.log_total = acc.log_total();
  return w;
}

}  // namespace

double skellam_log_pmf(double mu1, double mu2, std::int64_t m) {
  if (!(mu1 >= 0.0) || !(mu2 >= 0.0) || !std::isfinite(mu1) || !std::isfinite(mu2)) {
    throw std::invalid_argument("skellam_log_pmf: means must be finite and >= 0");
  }
  if (m < 0 || (m == 0 && mu1 < mu2)) {
    // Exchange symmetry, applied so both argument orders evaluate the same
    // series in the same term order (the m = 0 tie included).
    return skellam_log_pmf(mu2, mu1, -m);
  }
  if (mu1 == 0.0) {
    return m == 0 ? -mu2 : kNegInf;
  }
  if (mu2 == 0.0) {
    return -mu1 + static_cast<double>(m) * std::log(mu1) - std::lgamma(static_cast<double>(m) + 1.0);
  }
  const double md = static_cast<double>(m);
  const double log_mu1 = std::log(mu1);
  const double log_mu2 = std::log(mu2);
  auto term = [&](std::int64_t b) {
    const double bd = static_cast<double>(b);
    return -(mu1 + mu2) + (bd + md) * log_mu1 - std::lgamma(bd + md + 1.0) + bd * log_mu2 -
           std::lgamma(bd + 1.0);
  };
  // Largest term near the positive root of b(b+m) = mu1*mu2.
  std::int64_t b0 = static_cast<std::int64_t>((-md + std::sqrt(md * md + 4.0 * mu1 * mu2)) / 2.0);
  b0 = std::max<std::int64_t>(b0, 0);
  double t0 = term(b0);
  while (term(b0 + 1) > t0) t0 = term(++b0);
  while (b0 > 0 && term(b0 - 1) > t0) t0 = term(--b0);

  // Terms fall off super-geometrically on both sides; summing until they are
  // ~1e-21 of the peak keeps the result exact to double precision.
  const double cutoff = t0 - 48.0;
  LogSumAccumulator acc;
  acc.add(t0);
  for (std::int64_t b = b0 + 1;; ++b) {
    const double t = term(b);
    if (t < cutoff) break;
    acc.add(t);
    if (b - b0 > kMaxSeriesTerms) {
      throw std::domain_error("skellam_log_pmf: series failed to converge");
    }
  }
  for (std::int64_t b = b0 - 1; b >= 0; --b) {
    const double t = term(b);
    if (t < cutoff) break;
    acc.add(t);
  }
  return acc.log_total();
}

ConditionalDistribution conditional_pmf(const Rates& rates, std::int64_t n, double tol) {
  require_tol(tol, "conditional_pmf");
  const ScaledIntensities si = scale(rates, n);
  if (classify(rates).is_dirac()) {
    return ConditionalDistribution{n, 0, 0, {1.0}, 0.0};
  }
  // Window center from the scaled intensities only, so that
  // conditional_pmf(tau, n) and conditional_pmf(n*tau, 1) coincide bit for bit.
  const double e_mu = (si.mu_a * si.mu_c - si.mu_b * si.mu_d) /
                      std::sqrt((si.mu_a + si.mu_d) * (si.mu_b + si.mu_c));
  if (!std::isfinite(e_mu)) {
    throw std::overflow_error("conditional_pmf: scaled intensities too large");
  }
  const std::int64_t m0 = std::llround(e_mu);
  auto log_weight = [&](std::int64_t m) {
    return skellam_log_pmf(si.mu_a, si.mu_b, m) + skellam_log_pmf(si.mu_c, si.mu_d, m);
  };
  const UnimodalWindow w = expand_unimodal_window(log_weight, m0, m0, tol);

  ConditionalDistribution dist;
  dist.n = n;
  dist.support_lo = w.lo;
  dist.support_hi = w.hi;
  dist.truncation_bound = w.relative_tail();
  dist.probs.reserve(w.log_terms.size());
  for (double lt : w.log_terms) {
    dist.probs.push_back(std::exp(lt - w.log_total));
  }
  return dist;
}

MomentEstimate exact_moments(const ConditionalDistribution& dist) {
  double mean = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    mean += static_cast<double>(dist.support_lo + static_cast<std::int64_t>(i)) * dist.probs[i];
  }
  double var = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    const double d = static_cast<double>(dist.support_lo + static_cast<std::int64_t>(i)) - mean;
    var += d * d * dist.probs[i];
  }
  const double radius = std::max({std::abs(static_cast<double>(dist.support_lo)),
                                  std::abs(static_cast<double>(dist.support_hi)), 1.0});
  MomentEstimate m;
  m.mean = mean;
  m.variance = var;
  // Omitted mass placed at twice the window radius, for both moments.
  m.error_bound = dist.truncation_bound * 2.0 * radius * std::max(1.0, 2.0 * radius);
  return m;
}

GnValue evaluate_gn(const Rates& rates, std::int64_t n, double u, double tol) {
  require_tol(tol, "evaluate_gn");
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::invalid_argument("evaluate_gn: u must be positive and finite");
  }
  const ScaledIntensities si = scale(rates, n);
  const double log_u = std::log(u);
  // Dominant g near n*z*(u); computed from the scaled intensities directly.
  const double g_mu = gamma_of_u(si.as_rates(), u);
  const double z_mu = (si.mu_a * si.mu_c * u - si.mu_b * si.mu_d / u) / std::sqrt(g_mu);
  if (!std::isfinite(z_mu)) {
    throw std::overflow_error("evaluate_gn: scaled intensities too large");
  }
  const std::int64_t g0 = std::llround(z_mu);
  auto log_term = [&](std::int64_t g) {
    return static_cast<double>(g) * log_u + skellam_log_pmf(si.mu_a, si.mu_b, g) +
           skellam_log_pmf(si.mu_c, si.mu_d, g);
  };
  const UnimodalWindow w = expand_unimodal_window(log_term, g0, g0, tol);
  GnValue out;
  out.u = u;
  out.log_value = si.sum() + w.log_total;
  out.truncation_bound = w.relative_tail();
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normalized_kolmogorov_distance(const ConditionalDistribution& dist, double center,
                                      double spread) {
  if (!(spread > 0.0)) {
    throw std::invalid_argument("normalized_kolmogorov_distance: spread must be positive");
  }
  double sup = 0.0;
  double cdf = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    const double m = static_cast<double>(dist.support_lo + static_cast<std::int64_t>(i));
    const double phi = normal_cdf((m - center) / spread);
    // Both one-sided values at the jump: the sup over the real line of a
    // step-vs-continuous difference is attained at a jump point.
    sup = std::max(sup, std::abs(cdf - phi));
    cdf += dist.probs[i];
    sup = std::max(sup, std::abs(cdf - phi));
  }
  return std::min(sup, 1.0);
}

}  // namespace condiff
