// condiff — exact and asymptotic distribution of the conditioned Poisson
// difference X_n = (A - B | A - B = C - D).
//
// Exit codes: 0 success, 1 computation error, 2 usage error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "condiff/asymptotics.hpp"
#include "condiff/exact.hpp"
#include "condiff/montecarlo.hpp"
#include "condiff/report.hpp"
#include "condiff/selftest.hpp"

namespace {

using condiff::Rates;
using nlohmann::json;

Rates parse_tau(const std::string& spec) {
  std::vector<double> vals;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    vals.push_back(std::stod(item, &used));
    if (used != item.size()) {
      throw CLI::ValidationError("--tau", "expected a comma list of four numbers");
    }
  }
  if (vals.size() != 4) {
    throw CLI::ValidationError("--tau", "expected exactly four comma-separated intensities");
  }
  return Rates::of(vals[0], vals[1], vals[2], vals[3]);
}

std::vector<std::int64_t> parse_ladder(const std::string& spec) {
  std::vector<std::int64_t> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(std::stoll(item));
  }
  return out;
}

json tau_json(const Rates& r) { return json::array({r.tau_a, r.tau_b, r.tau_c, r.tau_d}); }

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conditioned Poisson difference: exact law, asymptotics, cross-validation"};
  app.require_subcommand(1);

  std::string tau_spec;
  std::string format = "json";
  std::string ladder_spec = "10,20,40,80,160";
  std::string suite = "all";
  std::int64_t n = 1;
  double u = 1.0;
  double s_arg = 0.0;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::uint64_t count = 10000;
  double center = 0.0, spread = 0.0;
  bool have_center = false, have_spread = false;

  auto add_tau = [&](CLI::App* cmd) {
    cmd->add_option("--tau", tau_spec, "intensities tau_a,tau_b,tau_c,tau_d")->required();
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* cmd_classify = app.add_subcommand("classify", "case classification and orientation");
  add_tau(cmd_classify);

  CLI::App* cmd_pmf = app.add_subcommand("pmf", "exact conditional pmf table");
  add_tau(cmd_pmf);
  cmd_pmf->add_option("--n", n, "scale")->check(CLI::PositiveNumber);
  cmd_pmf->add_option("--tol", tol, "relative truncation tolerance");
  add_format(cmd_pmf);

  CLI::App* cmd_moments = app.add_subcommand("moments", "exact mean and variance at scale n");
  add_tau(cmd_moments);
  cmd_moments->add_option("--n", n, "scale")->check(CLI::PositiveNumber);
  cmd_moments->add_option("--tol", tol, "relative truncation tolerance");

  CLI::App* cmd_asympt = app.add_subcommand("asympt", "closed-form E, E', V, V'");
  add_tau(cmd_asympt);

  CLI::App* cmd_saddle = app.add_subcommand("saddle", "stationary point and values at u");
  add_tau(cmd_saddle);
  cmd_saddle->add_option("--u", u, "generating-function argument");

  CLI::App* cmd_gn = app.add_subcommand("gn", "log G_n(u): exact sum and asymptote");
  add_tau(cmd_gn);
  cmd_gn->add_option("--n", n, "scale")->check(CLI::PositiveNumber);
  cmd_gn->add_option("--u", u, "generating-function argument");
  cmd_gn->add_option("--tol", tol, "relative truncation tolerance");

  CLI::App* cmd_sample = app.add_subcommand("sample", "rejection-sample the conditional law");
  add_tau(cmd_sample);
  cmd_sample->add_option("--n", n, "scale")->check(CLI::PositiveNumber);
  cmd_sample->add_option("--count", count, "number of accepted samples")->check(CLI::PositiveNumber);
  cmd_sample->add_option("--seed", seed, "rng seed");
  add_format(cmd_sample);

  CLI::App* cmd_clt = app.add_subcommand("clt", "Kolmogorov distance to the Gaussian limit");
  add_tau(cmd_clt);
  cmd_clt->add_option("--n", n, "scale")->check(CLI::PositiveNumber);
  cmd_clt->add_option("--tol", tol, "relative truncation tolerance");
  cmd_clt->add_option("--center", center, "normalization center (default n E)")
      ->each([&](const std::string&) { have_center = true; });
  cmd_clt->add_option("--spread", spread, "normalization spread (default sqrt(n V))")
      ->each([&](const std::string&) { have_spread = true; });

  CLI::App* cmd_study = app.add_subcommand("study", "convergence study over an n ladder");
  add_tau(cmd_study);
  cmd_study->add_option("--ladder", ladder_spec, "comma list of increasing n values");
  cmd_study->add_option("--tol", tol, "relative truncation tolerance");
  add_format(cmd_study);

  CLI::App* cmd_verify = app.add_subcommand("verify", "run the cross-validation suites");
  cmd_verify->add_option("--suite", suite, "exact, asympt, laplace, montecarlo or all");
  cmd_verify->add_option("--seed", seed, "seed for randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const std::string args = join_args(argc, argv);

    if (cmd_classify->parsed()) {
      const Rates r = parse_tau(tau_spec);
      const condiff::CaseClass cc = condiff::classify(r);
      const condiff::Orientation o = condiff::orient(r);
      json j{{"tau", tau_json(r)},
             {"case", condiff::to_string(cc)},
             {"oriented_tau", tau_json(o.oriented)},
             {"orientation_sign", o.sign}};
      std::cout << j.dump(2) << '\n';
    } else if (cmd_pmf->parsed()) {
      const Rates r = parse_tau(tau_spec);
      const auto dist = condiff::conditional_pmf(r, n, tol);
      if (format == "csv") {
        std::cout << "m,prob\n";
        for (std::int64_t m = dist.support_lo; m <= dist.support_hi; ++m) {
          std::cout << m << ',' << condiff::format_double(dist.prob(m)) << '\n';
        }
      } else {
        json probs = json::array();
        for (double p : dist.probs) probs.push_back(p);
        json j{{"tau", tau_json(r)},          {"n", dist.n},
               {"support_lo", dist.support_lo}, {"support_hi", dist.support_hi},
               {"probs", probs},              {"truncation_bound", dist.truncation_bound},
               {"args", args}};
        std::cout << j.dump(2) << '\n';
      }
    } else if (cmd_moments->parsed()) {
      const Rates r = parse_tau(tau_spec);
      const auto mom = condiff::exact_moments(condiff::conditional_pmf(r, n, tol));
      json j{{"tau", tau_json(r)},
             {"n", n},
             {"mean", mom.mean},
             {"variance", mom.variance},
             {"error_bound", mom.error_bound},
             {"args", args}};
      std::cout << j.dump(2) << '\n';
    } else if (cmd_asympt->parsed()) {
      const Rates r = parse_tau(tau_spec);
      const auto m = condiff::moment_expansion(r);
      const auto q = condiff::quasi_powers(r, 0.0);
      json j{{"tau", tau_json(r)},
             {"E", m.e_lead},
             {"E_const", m.e_const},
             {"V", m.v_lead},
             {"V_const", m.v_const},
             {"quasi_powers", {{"f1", q.f1}, {"f2", q.f2}, {"g1", q.g1}, {"g2", q.g2}}},
             {"args", args}};
      std::cout << j.dump(2) << '\n';
    } else if (cmd_saddle->parsed()) {
      const Rates r = parse_tau(tau_spec);
      const auto sd = condiff::saddle_point(r, u);
      json point = json::array();
      for (int i = 0; i < sd.dimension; ++i) point.push_back(sd.point[static_cast<std::size_t>(i)]);
      json j{{"tau", tau_json(r)},
             {"u", u},
             {"dimension", sd.dimension},
             {"point", point},
             {"psi_star", sd.psi_star},
             {"phi_star", sd.phi_star},
             {"hessian_det", sd.hessian_det},
             {"reduced_tau", tau_json(sd.reduced_rates)},
             {"reduced_u", sd.reduced_u},
             {"args", args}};
      std::cout << j.dump(2) << '\n';
    } else if (cmd_gn->parsed()) {
      const Rates r = parse_tau(tau_spec);
      const auto gv = condiff::evaluate_gn(r, n, u, tol);
      json j{{"tau", tau_json(r)},
             {"n", n},
             {"u", u},
             {"log_gn", gv.log_value},
             {"truncation_bound", gv.truncation_bound},
             {"log_gn_asymptote", condiff::gn_asymptote(r, n, u)},
             {"args", args}};
      std::cout << j.dump(2) << '\n';
    } else if (cmd_sample->parsed()) {
      const Rates r = parse_tau(tau_spec);
      const auto batch = condiff::sample_conditional(r, n, count, seed);
      if (format == "csv") {
        std::cout << "x\n";
        for (std::int64_t x : batch.samples) std::cout << x << '\n';
      } else {
        json j{{"tau", tau_json(r)},
               {"n", n},
               {"seed", seed},
               {"count", count},
               {"attempts", batch.attempts},
               {"acceptance_rate", batch.acceptance_rate()},
               {"samples", batch.samples},
               {"args", args}};
        std::cout << j.dump(2) << '\n';
      }
    } else if (cmd_clt->parsed()) {
      const Rates r = parse_tau(tau_spec);
      const auto m = condiff::moment_expansion(r);
      const double nd = static_cast<double>(n);
      const double c = have_center ? center : nd * m.e_lead;
      const double sp = have_spread ? spread : std::sqrt(nd * m.v_lead);
      const auto dist = condiff::conditional_pmf(r, n, tol);
      json j{{"tau", tau_json(r)},
             {"n", n},
             {"center", c},
             {"spread", sp},
             {"ks_distance", condiff::normalized_kolmogorov_distance(dist, c, sp)},
             {"args", args}};
      std::cout << j.dump(2) << '\n';
    } else if (cmd_study->parsed()) {
      const Rates r = parse_tau(tau_spec);
      const auto ladder = parse_ladder(ladder_spec);
      const auto report = condiff::convergence_study(r, ladder, tol, args);
      std::cout << (format == "csv" ? condiff::study_to_csv(report)
                                    : condiff::study_to_json(report) + "\n");
    } else if (cmd_verify->parsed()) {
      const auto results = condiff::run_verify_suite(suite, seed);
      bool all_pass = true;
      for (const auto& res : results) {
        std::cout << (res.pass ? "PASS " : "FAIL ") << res.name << " — " << res.detail << '\n';
        all_pass = all_pass && res.pass;
      }
      std::cout << (all_pass ? "verify: all checks passed\n" : "verify: FAILURES present\n");
      return all_pass ? 0 : 1;
    }
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
