#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "condiff/report.hpp"

using namespace condiff;

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 200; ++i) {
    const double x = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) *
                     std::pow(10.0, static_cast<double>(rng() % 20) - 10.0);
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("study on (2,1,1,1) produces clean trend verdicts") {
  const std::vector<std::int64_t> ladder = {10, 20, 40};
  const StudyReport r =
      convergence_study(Rates::of(2, 1, 1, 1), ladder, 1e-12, "test-args");
  REQUIRE(r.rows.size() == 3);
  for (const StudyRow& row : r.rows) {
    CHECK(row.mean_residual ==
          doctest::Approx(row.exact_mean - row.expansion_mean).epsilon(1e-15));
    CHECK(row.var_residual ==
          doctest::Approx(row.exact_variance - row.expansion_variance).epsilon(1e-15));
    CHECK(row.ks_distance > 0.0);
  }
  CHECK(r.verdicts.mean_residual_decreasing);
  CHECK(r.verdicts.var_residual_decreasing);
  CHECK(r.verdicts.mean_halving_in_range);
  CHECK(r.verdicts.var_halving_in_range);
  CHECK(r.verdicts.ks_decreasing);
  CHECK(r.meta.args == "test-args");
}

TEST_CASE("study on the symmetric quadruple treats zero residuals as converged") {
  const std::vector<std::int64_t> ladder = {10, 20, 40};
  const StudyReport r = convergence_study(Rates::of(1, 1, 1, 1), ladder, 1e-12, "");
  for (const StudyRow& row : r.rows) {
    CHECK(std::abs(row.mean_residual) < 1e-10);
  }
  CHECK(r.verdicts.mean_residual_decreasing);  // at the floating-point floor
  CHECK(r.verdicts.var_residual_decreasing);
  CHECK(r.verdicts.ks_decreasing);
}

TEST_CASE("csv and json encodings carry identical numeric values") {
  const std::vector<std::int64_t> ladder = {5, 10};
  const StudyReport r = convergence_study(Rates::of(2, 1, 1, 1), ladder, 1e-12, "x");
  const nlohmann::json j = nlohmann::json::parse(study_to_json(r));
  std::istringstream csv(study_to_csv(r));
  std::string line;
  std::getline(csv, line);  // header
  CHECK(line ==
        "n,exact_mean,exact_variance,expansion_mean,expansion_variance,"
        "mean_residual,var_residual,ks_distance");
  std::size_t idx = 0;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) cells.push_back(std::strtod(cell.c_str(), nullptr));
    REQUIRE(cells.size() == 8);
    const auto& jr = j["rows"][idx];
    CHECK(cells[0] == static_cast<double>(jr["n"].get<std::int64_t>()));
    CHECK(cells[1] == jr["exact_mean"].get<double>());
    CHECK(cells[2] == jr["exact_variance"].get<double>());
    CHECK(cells[3] == jr["expansion_mean"].get<double>());
    CHECK(cells[4] == jr["expansion_variance"].get<double>());
    CHECK(cells[5] == jr["mean_residual"].get<double>());
    CHECK(cells[6] == jr["var_residual"].get<double>());
    CHECK(cells[7] == jr["ks_distance"].get<double>());
    ++idx;
  }
  CHECK(idx == 2);
  CHECK(j["meta"]["version"] == kVersion);
}

TEST_CASE("study reports are bit-identical across runs") {
  const std::vector<std::int64_t> ladder = {10, 20};
  const StudyReport a = convergence_study(Rates::of(2, 1, 1, 1), ladder, 1e-12, "same");
  const StudyReport b = convergence_study(Rates::of(2, 1, 1, 1), ladder, 1e-12, "same");
  CHECK(study_to_json(a) == study_to_json(b));
  CHECK(study_to_csv(a) == study_to_csv(b));
}

TEST_CASE("study validates its ladder") {
  const std::vector<std::int64_t> empty;
  CHECK_THROWS_AS(convergence_study(Rates::of(1, 1, 1, 1), empty, 1e-12, ""),
                  std::invalid_argument);
  const std::vector<std::int64_t> decreasing = {20, 10};
  CHECK_THROWS_AS(convergence_study(Rates::of(1, 1, 1, 1), decreasing, 1e-12, ""),
                  std::invalid_argument);
  const std::vector<std::int64_t> huge = {1, std::int64_t(1) << 62};
  CHECK_THROWS_AS(convergence_study(Rates::of(1, 1, 1, 1), huge, 1e-12, ""), std::domain_error);
}
