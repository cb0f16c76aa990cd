// Intensity quadruples for the conditioned Poisson difference
//   X_n = (A_n - B_n | A_n - B_n = C_n - D_n),
// where A_n, B_n, C_n, D_n are independent Poisson with means
// n*tau_a, n*tau_b, n*tau_c, n*tau_d.
//
// Case classification and the canonical orientation tau_a*tau_c >= tau_b*tau_d
// live here; everything downstream consumes these types.

#ifndef CONDIFF_RATES_HPP
#define CONDIFF_RATES_HPP

#include <cstdint>
#include <string>

namespace condiff {

// Nonnegative, finite Poisson intensity coefficients (per unit of n).
// Constructed through of(), which rejects negatives and non-finite values.
struct Rates {
  double tau_a = 0.0;
  double tau_b = 0.0;
  double tau_c = 0.0;
  double tau_d = 0.0;

  static Rates of(double a, double b, double c, double d);

  double sum() const { return tau_a + tau_b + tau_c + tau_d; }

  // Standing assumption of the non-degenerate analysis: every adjacent pair
  // of coefficients has a positive sum. Equivalent to "not Dirac".
  bool pairwise_sums_positive() const {
    return tau_a + tau_b > 0.0 && tau_b + tau_c > 0.0 && tau_c + tau_d > 0.0 &&
           tau_d + tau_a > 0.0;
  }

  bool operator==(const Rates&) const = default;
};

enum class Corner : std::uint8_t { A, B, C, D };

// The two diagonal pairs that may vanish jointly without forcing a Dirac law.
enum class Diagonal : std::uint8_t { AC, BD };

enum class CaseKind : std::uint8_t {
  // An adjacent pair (A,B), (B,C), (C,D) or (D,A) vanishes: X_n is the point
  // mass at 0 for every n.
  DiracZero,
  // All four coefficients strictly positive (triple-sum representation).
  Generic,
  // Exactly one coefficient vanishes (double-sum representation).
  SingleZero,
  // A diagonal pair vanishes (single-sum representation).
  OppositePairZero,
};

struct CaseClass {
  CaseKind kind = CaseKind::Generic;
  Corner zero_corner = Corner::B;   // meaningful for SingleZero
  Diagonal zero_pair = Diagonal::BD;  // meaningful for OppositePairZero

  bool is_dirac() const { return kind == CaseKind::DiracZero; }
};

// Result of reducing to the canonical orientation tau_a*tau_c >= tau_b*tau_d.
// sign is -1 exactly when the (A<->B, C<->D) exchange was applied, in which
// case the oriented law is that of -X_n.
struct Orientation {
  Rates oriented;
  int sign = +1;
};

// Poisson means at a concrete scale n: mu_x = n * tau_x.
struct ScaledIntensities {
  std::int64_t n = 1;
  double mu_a = 0.0;
  double mu_b = 0.0;
  double mu_c = 0.0;
  double mu_d = 0.0;

  double sum() const { return mu_a + mu_b + mu_c + mu_d; }
  Rates as_rates() const { return Rates::of(mu_a, mu_b, mu_c, mu_d); }
};

// Decides which sum representation governs the law. DiracZero wins whenever
// an adjacent pair vanishes (even if more coefficients are zero).
CaseClass classify(const Rates& rates);

// Applies the (A<->B, C<->D) exchange when tau_a*tau_c < tau_b*tau_d.
// Ties keep the identity.
Orientation orient(const Rates& rates);

// mu = n * tau, componentwise. Throws std::overflow_error when a product is
// not representable.
ScaledIntensities scale(const Rates& rates, std::int64_t n);

std::string to_string(const CaseClass& c);
std::string to_string(Corner corner);

}  // namespace condiff

#endif
