#include "condiff/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace condiff {

Rates Rates::of(double a, double b, double c, double d) {
  for (double t : {a, b, c, d}) {
    if (!std::isfinite(t)) {
      throw std::invalid_argument("rates: all intensities must be finite");
    }
    if (t < 0.0) {
      throw std::invalid_argument("rates: all intensities must be >= 0");
    }
  }
  return Rates{a, b, c, d};
}

CaseClass classify(const Rates& r) {
  const bool za = r.tau_a == 0.0;
  const bool zb = r.tau_b == 0.0;
  const bool zc = r.tau_c == 0.0;
  const bool zd = r.tau_d == 0.0;

  // Adjacent pairs first: they force the Dirac law regardless of the rest.
  if ((za && zb) || (zb && zc) || (zc && zd) || (zd && za)) {
    return CaseClass{CaseKind::DiracZero};
  }
  const int zeros = int(za) + int(zb) + int(zc) + int(zd);
  if (zeros == 0) {
    return CaseClass{CaseKind::Generic};
  }
  if (zeros == 1) {
    Corner corner = za ? Corner::A : zb ? Corner::B : zc ? Corner::C : Corner::D;
    return CaseClass{CaseKind::SingleZero, corner};
  }
  // Two zeros that are not adjacent can only be a diagonal pair.
  return CaseClass{CaseKind::OppositePairZero, Corner::B,
                   za ? Diagonal::AC : Diagonal::BD};
}

Orientation orient(const Rates& r) {
  if (r.tau_a * r.tau_c >= r.tau_b * r.tau_d) {
    return Orientation{r, +1};
  }
  return Orientation{Rates{r.tau_b, r.tau_a, r.tau_d, r.tau_c}, -1};
}

ScaledIntensities scale(const Rates& r, std::int64_t n) {
  if (n < 1) {
    throw std::invalid_argument("scale: n must be >= 1");
  }
  const double nd = static_cast<double>(n);
  ScaledIntensities s{n, nd * r.tau_a, nd * r.tau_b, nd * r.tau_c, nd * r.tau_d};
  if (!std::isfinite(s.mu_a) || !std::isfinite(s.mu_b) || !std::isfinite(s.mu_c) ||
      !std::isfinite(s.mu_d)) {
    throw std::overflow_error("scale: n * tau exceeds representable range");
  }
  return s;
}

std::string to_string(Corner corner) {
  switch (corner) {
    case Corner::A: return "A";
    case Corner::B: return "B";
    case Corner::C: return "C";
    case Corner::D: return "D";
  }
  return "?";
}

std::string to_string(const CaseClass& c) {
  switch (c.kind) {
    case CaseKind::DiracZero: return "DiracZero";
    case CaseKind::Generic: return "Generic";
    case CaseKind::SingleZero: return "SingleZero(" + to_string(c.zero_corner) + ")";
    case CaseKind::OppositePairZero:
      return std::string("OppositePairZero(") +
             (c.zero_pair == Diagonal::AC ? "AC" : "BD") + ")";
  }
  return "?";
}

}  // namespace condiff
