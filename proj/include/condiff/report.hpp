// Convergence-study reports: one row per scale n comparing exact moments to
// the (E, E', V, V') expansion and the normalized law to the Gaussian limit,
// plus mechanical trend verdicts. Rendered as JSON ({meta, rows, verdicts})
// or RFC-4180 CSV with identical numeric strings in both encodings.

#ifndef CONDIFF_REPORT_HPP
#define CONDIFF_REPORT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "condiff/rates.hpp"

namespace condiff {

inline constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal rendering, shared by every encoder.
std::string format_double(double x);

struct StudyRow {
  std::int64_t n = 0;
  double exact_mean = 0.0;
  double exact_variance = 0.0;
  double expansion_mean = 0.0;      // n E + E'
  double expansion_variance = 0.0;  // n V + V'
  double mean_residual = 0.0;       // exact_mean - expansion_mean
  double var_residual = 0.0;        // exact_variance - expansion_variance
  double ks_distance = 0.0;         // law normalized by (n E, sqrt(n V)) vs Phi
};

struct StudyVerdicts {
  bool mean_residual_decreasing = false;
  bool var_residual_decreasing = false;
  bool mean_halving_in_range = false;  // successive |residual| ratios in [0.2, 0.8]
  bool var_halving_in_range = false;
  bool ks_decreasing = false;
};

struct StudyMeta {
  Rates rates;
  std::vector<std::int64_t> ladder;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::string args;  // exact flag set used, for provenance
};

struct StudyReport {
  StudyMeta meta;
  std::vector<StudyRow> rows;
  StudyVerdicts verdicts;
};

// One row per ladder entry. The ladder must be strictly increasing and small
// enough for exact enumeration; residual-ratio verdicts assume a doubling
// ladder. Residuals below 1e-9 in absolute value are treated as converged
// when judging trends (the symmetric cases sit at the floating-point floor).
StudyReport convergence_study(const Rates& rates, std::span<const std::int64_t> ladder,
                              double tol, const std::string& args);

std::string study_to_json(const StudyReport& report);
std::string study_to_csv(const StudyReport& report);

}  // namespace condiff

#endif
