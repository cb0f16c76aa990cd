// Log-space accumulation helpers. Every probability mass in this library is
// carried as a natural logarithm; sums are max-shifted so that n*tau up to
// 1e4 and beyond stays in range.

#ifndef CONDIFF_LOGSPACE_HPP
#define CONDIFF_LOGSPACE_HPP

#include <cmath>
#include <limits>
#include <span>

namespace condiff {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b) without leaving log space.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

inline double log_sum_exp(std::span<const double> xs) {
  double mx = kNegInf;
  for (double x : xs) mx = std::max(mx, x);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - mx);
  return mx + std::log(s);
}

// Streaming log-sum-exp: rescales on the fly so a single pass suffices.
class LogSumAccumulator {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }

  double log_total() const {
    if (max_ == kNegInf) return kNegInf;
    return max_ + std::log(sum_);
  }

  bool empty() const { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

}  // namespace condiff

#endif
