#include "condiff/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "condiff/asymptotics.hpp"
#include "condiff/exact.hpp"
#include "condiff/gn_fields.hpp"
#include "condiff/laplace.hpp"
#include "condiff/montecarlo.hpp"

namespace condiff {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

Rates random_positive_rates(std::mt19937_64& rng) {
  return Rates::of(uniform_in(rng, 0.05, 3.0), uniform_in(rng, 0.05, 3.0),
                   uniform_in(rng, 0.05, 3.0), uniform_in(rng, 0.05, 3.0));
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// Brute-force law of (A-B | A-B = C-D) by enumerating the Poisson quadruple
// lattice with per-variable tail mass <= 1e-14. Plain double arithmetic, no
// log space: deliberately a different route than the series implementation.
std::map<std::int64_t, double> brute_force_law(double mu_a, double mu_b, double mu_c,
                                               double mu_d) {
  auto pmf_vector = [](double mu) {
    std::vector<double> pmf{std::exp(-mu)};
    if (mu > 0.0) {
      double cum = pmf[0];
      for (std::int64_t k = 1; 1.0 - cum > 1e-14; ++k) {
        pmf.push_back(pmf.back() * mu / static_cast<double>(k));
        cum += pmf.back();
      }
    }
    return pmf;
  };
  const auto pa = pmf_vector(mu_a), pb = pmf_vector(mu_b);
  const auto pc = pmf_vector(mu_c), pd = pmf_vector(mu_d);
  std::map<std::int64_t, double> mass;
  for (std::size_t a = 0; a < pa.size(); ++a) {
    for (std::size_t b = 0; b < pb.size(); ++b) {
      const std::int64_t m = static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b);
      const double w_ab = pa[a] * pb[b];
      for (std::size_t c = 0; c < pc.size(); ++c) {
        const std::int64_t d = static_cast<std::int64_t>(c) - m;
        if (d < 0 || d >= static_cast<std::int64_t>(pd.size())) continue;
        mass[m] += w_ab * pc[c] * pd[static_cast<std::size_t>(d)];
      }
    }
  }
  double total = 0.0;
  for (const auto& [m, w] : mass) total += w;
  for (auto& [m, w] : mass) w /= total;
  return mass;
}

double tv_against_brute_force(const Rates& rates, std::int64_t n) {
  const ScaledIntensities si = scale(rates, n);
  const auto oracle = brute_force_law(si.mu_a, si.mu_b, si.mu_c, si.mu_d);
  const ConditionalDistribution dist = conditional_pmf(rates, n, 1e-13);
  double tv = 0.0;
  for (const auto& [m, p] : oracle) tv += std::abs(p - dist.prob(m));
  for (std::int64_t m = dist.support_lo; m <= dist.support_hi; ++m) {
    if (!oracle.count(m)) tv += dist.prob(m);
  }
  return 0.5 * tv;
}

using Checker = std::function<void(std::vector<CheckResult>&, std::uint64_t)>;

void check(std::vector<CheckResult>& out, const std::string& name, bool pass,
           const std::string& detail) {
  out.push_back(CheckResult{name, pass, detail});
}

void suite_exact(std::vector<CheckResult>& out, std::uint64_t seed) {
  {
    const double got = skellam_log_pmf(1.0, 1.0, 0);
    const double want = -1.1760064585170437;  // log(e^-2 I0(2))
    check(out, "exact/skellam_i0_value", std::abs(got - want) < 1e-13,
          "skellam(1,1,0)=" + fmt(got));
  }
  {
    std::mt19937_64 rng(seed);
    bool ok = true;
    for (int i = 0; i < 50 && ok; ++i) {
      const double m1 = uniform_in(rng, 0.0, 20.0), m2 = uniform_in(rng, 0.0, 20.0);
      const auto m = static_cast<std::int64_t>(uniform_in(rng, -15.0, 15.0));
      ok = skellam_log_pmf(m1, m2, m) == skellam_log_pmf(m2, m1, -m);
    }
    check(out, "exact/skellam_exchange_symmetry", ok, "bit-exact on 50 draws");
  }
  {
    std::mt19937_64 rng(seed + 1);
    const double grid[4] = {0.0, 0.5, 1.0, 2.0};
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
      const Rates r = Rates::of(grid[rng() % 4], grid[rng() % 4], grid[rng() % 4], grid[rng() % 4]);
      const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 3);
      worst = std::max(worst, tv_against_brute_force(r, n));
    }
    check(out, "exact/pmf_vs_brute_force", worst < 1e-10, "worst TV=" + fmt(worst));
  }
  {
    std::mt19937_64 rng(seed + 2);
    bool ok = true;
    for (int i = 0; i < 10 && ok; ++i) {
      const Rates r = random_positive_rates(rng);
      const std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 6);
      const auto lhs = conditional_pmf(r, n, 1e-12);
      const auto rhs = conditional_pmf(scale(r, n).as_rates(), 1, 1e-12);
      ok = lhs.support_lo == rhs.support_lo && lhs.support_hi == rhs.support_hi &&
           lhs.probs == rhs.probs;
    }
    check(out, "exact/scaling_identity", ok, "pmf(tau,n) == pmf(n*tau,1) bitwise");
  }
  {
    std::mt19937_64 rng(seed + 3);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Rates r = random_positive_rates(rng);
      const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 5);
      const auto base = conditional_pmf(r, n, 1e-12);
      const auto swap_ac = conditional_pmf(Rates::of(r.tau_c, r.tau_d, r.tau_a, r.tau_b), n, 1e-12);
      const auto swap_ab = conditional_pmf(Rates::of(r.tau_b, r.tau_a, r.tau_d, r.tau_c), n, 1e-12);
      for (std::int64_t m = base.support_lo; m <= base.support_hi; ++m) {
        worst = std::max(worst, std::abs(base.prob(m) - swap_ac.prob(m)));
        worst = std::max(worst, std::abs(base.prob(m) - swap_ab.prob(-m)));
      }
    }
    check(out, "exact/pair_swap_symmetries", worst < 1e-12, "worst prob diff=" + fmt(worst));
  }
  {
    std::mt19937_64 rng(seed + 4);
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
      const Rates r = random_positive_rates(rng);
      const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 4);
      const auto dist = conditional_pmf(r, n, 1e-12);
      const GnValue g1 = evaluate_gn(r, n, 1.0, 1e-12);
      for (double u : {0.9, 1.0, 1.1}) {
        const GnValue gu = evaluate_gn(r, n, u, 1e-12);
        double pgen = 0.0;
        for (std::int64_t m = dist.support_lo; m <= dist.support_hi; ++m) {
          pgen += dist.prob(m) * std::pow(u, static_cast<double>(m));
        }
        worst = std::max(worst, std::abs(pgen - std::exp(gu.log_value - g1.log_value)));
      }
    }
    check(out, "exact/generating_function_consistency", worst < 1e-9,
          "worst |P_n(u) mismatch|=" + fmt(worst));
  }
}

void suite_asympt(std::vector<CheckResult>& out, std::uint64_t seed) {
  {
    const AsymptoticMoments m = moment_expansion(Rates::of(2, 1, 1, 1));
    const bool ok = std::abs(m.e_lead - 1.0 / std::sqrt(6.0)) < 1e-15 &&
                    std::abs(m.e_const + 1.0 / 24.0) < 1e-15 &&
                    std::abs(m.v_lead - 35.0 / (2.0 * std::pow(6.0, 1.5))) < 1e-15 &&
                    std::abs(m.v_const + 17.0 / 144.0) < 1e-15;
    check(out, "asympt/proposition_values_2111", ok,
          "E=" + fmt(m.e_lead) + " E'=" + fmt(m.e_const) + " V=" + fmt(m.v_lead) +
              " V'=" + fmt(m.v_const));
  }
  {
    std::mt19937_64 rng(seed + 10);
    double worst_closed = 0.0, worst_fd = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Rates r = random_positive_rates(rng);
      const AsymptoticMoments m = moment_expansion(r);
      const QuasiPowersPair q = quasi_powers(r, 0.0);
      const double scale_e = std::max(1.0, std::abs(m.e_lead));
      worst_closed = std::max({worst_closed, std::abs(q.f1 - m.e_lead) / scale_e,
                               std::abs(q.f2 - m.v_lead) / std::max(1.0, std::abs(m.v_lead)),
                               std::abs(q.g1 - m.e_const) / std::max(1.0, std::abs(m.e_const)),
                               std::abs(q.g2 - m.v_const) / std::max(1.0, std::abs(m.v_const))});
      const double h = 1e-4;
      const QuasiPowersPair qp = quasi_powers(r, h);
      const QuasiPowersPair qm = quasi_powers(r, -h);
      worst_fd = std::max({worst_fd, std::abs((qp.f_value - qm.f_value) / (2 * h) - m.e_lead),
                           std::abs((qp.f_value + qm.f_value) / (h * h) - m.v_lead),
                           std::abs((qp.g_value - qm.g_value) / (2 * h) - m.e_const),
                           std::abs((qp.g_value + qm.g_value) / (h * h) - m.v_const)});
    }
    check(out, "asympt/quasi_powers_identity", worst_closed < 1e-10 && worst_fd < 1e-6,
          "closed=" + fmt(worst_closed) + " fd=" + fmt(worst_fd));
  }
  {
    std::mt19937_64 rng(seed + 11);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Rates r = orient(random_positive_rates(rng)).oriented;
      for (double u : {0.8, 1.0, 1.25}) {
        const SaddleData sd = saddle_point(r, u);
        const double x = sd.point[0], y = sd.point[1], z = sd.point[2];
        const double e1 = x * (x + z) - r.tau_a * r.tau_b;
        const double e2 = y * (y + z) - r.tau_c * r.tau_d;
        const double e3 = (x + z) * (y + z) - r.tau_a * r.tau_c * u;
        worst = std::max({worst, std::abs(e1) / (1 + r.tau_a * r.tau_b),
                          std::abs(e2) / (1 + r.tau_c * r.tau_d),
                          std::abs(e3) / (1 + r.tau_a * r.tau_c * u),
                          std::abs(sd.phi_star + 2 * std::sqrt(gamma_of_u(r, u)))});
      }
    }
    check(out, "asympt/saddle_system_residuals", worst < 1e-12, "worst=" + fmt(worst));
  }
  {
    std::mt19937_64 rng(seed + 12);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double ta = uniform_in(rng, 0.05, 3), tc = uniform_in(rng, 0.05, 3);
      const double td = uniform_in(rng, 0.05, 3);
      const double u = uniform_in(rng, 0.7, 1.4);
      // tau_b = 0: gamma specializes to tau_a tau_c u + tau_c tau_d.
      const Rates r1 = Rates::of(ta, 0, tc, td);
      worst = std::max(worst, std::abs(gamma_of_u(r1, u) - (ta * tc * u + tc * td)));
      worst = std::max(worst,
                       std::abs(saddle_point(r1, u).phi_star + 2 * std::sqrt(ta * tc * u + tc * td)));
      // tau_b = tau_d = 0: gamma = tau_a tau_c u.
      const Rates r2 = Rates::of(ta, 0, tc, 0);
      worst = std::max(worst, std::abs(gamma_of_u(r2, u) - ta * tc * u));
      worst = std::max(worst, std::abs(saddle_point(r2, u).phi_star + 2 * std::sqrt(ta * tc * u)));
      const double asym1 = gn_asymptote(r1, 50, u);
      const double direct1 = 2 * 50 * std::sqrt(ta * tc * u + tc * td) -
                             0.25 * std::log(ta * tc * u + tc * td) -
                             std::log(2 * std::sqrt(50 * std::numbers::pi));
      worst = std::max(worst, std::abs(asym1 - direct1) / (1 + std::abs(direct1)));
    }
    check(out, "asympt/degenerate_specialization", worst < 1e-12, "worst=" + fmt(worst));
  }
  {
    std::mt19937_64 rng(seed + 13);
    bool ok = true;
    for (int i = 0; i < 20 && ok; ++i) {
      const Rates r = orient(random_positive_rates(rng)).oriented;
      const SaddleData sd = saddle_point(r, uniform_in(rng, 0.8, 1.25));
      ok = sd.hessian_det > 0.0 && quasi_powers(r, 0.0).f2 > 0.0 &&
           saddle_point(r, 1.0).point[2] >= 0.0;
    }
    check(out, "asympt/positivity_and_admissibility", ok,
          "hessian>0, f''(0)>0, z*(1)>=0 under orientation");
  }
}

void suite_laplace(std::vector<CheckResult>& out, std::uint64_t seed) {
  {
    LaplaceProblem p;
    p.dimension = 1;
    p.phi.value = [](std::span<const double> v) { return (v[0] - 0.3) * (v[0] - 0.3); };
    p.psi = [](std::span<const double>) { return 1.0; };
    p.box.lo = {0.0, 0, 0};
    p.box.hi = {1.0, 0, 0};
    p.start = {0.5, 0, 0};
    const MinimizeResult m = minimize(p);
    check(out, "laplace/quadratic_minimum", std::abs(m.minimizer[0] - 0.3) < 1e-10,
          "theta*=" + fmt(m.minimizer[0]) + " iters=" + std::to_string(m.iterations));
  }
  {
    std::mt19937_64 rng(seed + 20);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Rates r = orient(random_positive_rates(rng)).oriented;
      const double u = uniform_in(rng, 0.85, 1.2);
      const SaddleData sd = saddle_point(r, u);
      const MinimizeResult m = minimize(generic_sum_problem(r, u));
      for (int k = 0; k < 3; ++k) {
        worst = std::max(worst, std::abs(m.minimizer[static_cast<std::size_t>(k)] -
                                         sd.point[static_cast<std::size_t>(k)]));
      }
      worst = std::max(worst, std::abs(m.hessian_det - sd.hessian_det) / sd.hessian_det);
    }
    check(out, "laplace/newton_recovers_saddle", worst < 1e-10, "worst=" + fmt(worst));
  }
  {
    const Rates r = Rates::of(1, 0, 1, 0);
    const LaplaceProblem p = opposite_pair_sum_problem(r, 1.0);
    const LaplaceAsymptote a = asymptote(p);
    const double e100 = std::abs(std::exp(direct_lattice_sum(p, 100) - a.log_value(100)) - 1.0);
    const double e200 = std::abs(std::exp(direct_lattice_sum(p, 200) - a.log_value(200)) - 1.0);
    check(out, "laplace/lattice_ratio_converges", e200 < 0.02 && e200 < 0.7 * e100,
          "err(100)=" + fmt(e100) + " err(200)=" + fmt(e200));
  }
}

void suite_montecarlo(std::vector<CheckResult>& out, std::uint64_t seed) {
  {
    const Rates r = Rates::of(1, 1, 1, 1);
    const SampleBatch b1 = sample_conditional(r, 3, 500, seed);
    const SampleBatch b2 = sample_conditional(r, 3, 500, seed);
    check(out, "montecarlo/determinism", b1.samples == b2.samples && b1.attempts == b2.attempts,
          "identical batches for identical seeds");
  }
  {
    const SampleBatch b = sample_conditional(Rates::of(0, 0, 1, 1), 4, 200, seed + 1);
    bool all_zero = true;
    for (std::int64_t x : b.samples) all_zero = all_zero && x == 0;
    check(out, "montecarlo/dirac_samples", all_zero, "all samples at 0");
  }
  {
    const Rates r = Rates::of(1, 1, 1, 1);
    const std::int64_t n = 5;
    const SampleBatch b = sample_conditional(r, n, 20000, seed + 2);
    const EmpiricalSummary s = summarize(b, 0.0, std::sqrt(5.0));
    const MomentEstimate exact = exact_moments(conditional_pmf(r, n, 1e-12));
    const bool ok = std::abs(s.mean - exact.mean) < 4.0 * s.stderr_mean &&
                    std::abs(s.variance - exact.variance) < 4.0 * s.stderr_var;
    check(out, "montecarlo/matches_exact_moments", ok,
          "mean=" + fmt(s.mean) + "+-" + fmt(s.stderr_mean) + " exact=" + fmt(exact.mean));
  }
  {
    const Rates r = Rates::of(1, 1, 1, 1);
    const SampleBatch b = sample_conditional(r, 20, 5000, seed + 3);
    const double predicted = std::exp(predicted_log_acceptance(r, 20));
    const double measured = b.acceptance_rate();
    const bool ok = measured > 0.5 * predicted && measured < 2.0 * predicted;
    check(out, "montecarlo/acceptance_rate_prediction", ok,
          "measured=" + fmt(measured) + " predicted=" + fmt(predicted));
  }
  {
    bool refused = false;
    try {
      sample_conditional(Rates::of(3, 1, 1, 3), 40, 10, seed);
    } catch (const std::domain_error&) {
      refused = true;
    }
    check(out, "montecarlo/exponential_regime_refusal", refused,
          "refuses when predicted acceptance < 1e-9");
  }
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (all || suite == "exact") suite_exact(out, seed);
  if (all || suite == "asympt") suite_asympt(out, seed);
  if (all || suite == "laplace") suite_laplace(out, seed);
  if (all || suite == "montecarlo") suite_montecarlo(out, seed);
  if (out.empty()) {
    throw std::invalid_argument("run_verify_suite: unknown suite '" + suite +
                                "' (use exact, asympt, laplace, montecarlo or all)");
  }
  return out;
}

}  // namespace condiff
