#include "condiff/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "condiff/asymptotics.hpp"
#include "condiff/exact.hpp"

#include "json.hpp"

namespace condiff {

namespace {

constexpr double kResidualFloor = 1e-9;

bool magnitudes_decreasing(const std::vector<double>& xs) {
  bool all_floor = true;
  for (double x : xs) all_floor = all_floor && std::abs(x) < kResidualFloor;
  if (all_floor) return true;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(std::abs(xs[i]) < std::abs(xs[i - 1]))) return false;
  }
  return true;
}

bool halving_in_range(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double prev = std::abs(xs[i - 1]);
    const double cur = std::abs(xs[i]);
    if (prev < kResidualFloor && cur < kResidualFloor) continue;
    if (prev < kResidualFloor) return false;
    const double ratio = cur / prev;
    if (!(ratio >= 0.2 && ratio <= 0.8)) return false;
  }
  return true;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

StudyReport convergence_study(const Rates& rates, std::span<const std::int64_t> ladder,
                              double tol, const std::string& args) {
  if (ladder.empty()) {
    throw std::invalid_argument("convergence_study: ladder must be nonempty");
  }
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (!(ladder[i] > ladder[i - 1])) {
      throw std::invalid_argument("convergence_study: ladder must be strictly increasing");
    }
  }
  const AsymptoticMoments am = moment_expansion(rates);
  {
    // Enumeration budget: the support window grows like sqrt(n V).
    const double top = static_cast<double>(ladder.back());
    if (120.0 + 28.0 * std::sqrt(top * am.v_lead + 1.0) > 2e6) {
      throw std::domain_error("convergence_study: largest n exceeds the exact-enumeration budget");
    }
  }

  StudyReport report;
  report.meta.rates = rates;
  report.meta.ladder.assign(ladder.begin(), ladder.end());
  report.meta.tol = tol;
  report.meta.args = args;

  std::vector<double> mean_res, var_res, ks_vals;
  for (std::int64_t n : ladder) {
    const ConditionalDistribution dist = conditional_pmf(rates, n, tol);
    const MomentEstimate mom = exact_moments(dist);
    const double nd = static_cast<double>(n);
    StudyRow row;
    row.n = n;
    row.exact_mean = mom.mean;
    row.exact_variance = mom.variance;
    row.expansion_mean = nd * am.e_lead + am.e_const;
    row.expansion_variance = nd * am.v_lead + am.v_const;
    row.mean_residual = row.exact_mean - row.expansion_mean;
    row.var_residual = row.exact_variance - row.expansion_variance;
    row.ks_distance =
        normalized_kolmogorov_distance(dist, nd * am.e_lead, std::sqrt(nd * am.v_lead));
    report.rows.push_back(row);
    mean_res.push_back(row.mean_residual);
    var_res.push_back(row.var_residual);
    ks_vals.push_back(row.ks_distance);
  }

  report.verdicts.mean_residual_decreasing = magnitudes_decreasing(mean_res);
  report.verdicts.var_residual_decreasing = magnitudes_decreasing(var_res);
  report.verdicts.mean_halving_in_range = halving_in_range(mean_res);
  report.verdicts.var_halving_in_range = halving_in_range(var_res);
  bool ks_dec = true;
  for (std::size_t i = 1; i < ks_vals.size(); ++i) ks_dec = ks_dec && ks_vals[i] < ks_vals[i - 1];
  report.verdicts.ks_decreasing = ks_dec;
  return report;
}

std::string study_to_json(const StudyReport& r) {
  nlohmann::json j;
  j["meta"] = {
      {"tau", {r.meta.rates.tau_a, r.meta.rates.tau_b, r.meta.rates.tau_c, r.meta.rates.tau_d}},
      {"ladder", r.meta.ladder},
      {"tol", r.meta.tol},
      {"seed", r.meta.seed},
      {"version", r.meta.version},
      {"args", r.meta.args},
  };
  j["rows"] = nlohmann::json::array();
  for (const StudyRow& row : r.rows) {
    j["rows"].push_back({
        {"n", row.n},
        {"exact_mean", row.exact_mean},
        {"exact_variance", row.exact_variance},
        {"expansion_mean", row.expansion_mean},
        {"expansion_variance", row.expansion_variance},
        {"mean_residual", row.mean_residual},
        {"var_residual", row.var_residual},
        {"ks_distance", row.ks_distance},
    });
  }
  j["verdicts"] = {
      {"mean_residual_decreasing", r.verdicts.mean_residual_decreasing},
      {"var_residual_decreasing", r.verdicts.var_residual_decreasing},
      {"mean_halving_in_range", r.verdicts.mean_halving_in_range},
      {"var_halving_in_range", r.verdicts.var_halving_in_range},
      {"ks_decreasing", r.verdicts.ks_decreasing},
  };
  return j.dump(2);
}

std::string study_to_csv(const StudyReport& r) {
  std::string out =
      "n,exact_mean,exact_variance,expansion_mean,expansion_variance,"
      "mean_residual,var_residual,ks_distance\n";
  for (const StudyRow& row : r.rows) {
    out += std::to_string(row.n);
    for (double v : {row.exact_mean, row.exact_variance, row.expansion_mean,
                     row.expansion_variance, row.mean_residual, row.var_residual,
                     row.ks_distance}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace condiff
