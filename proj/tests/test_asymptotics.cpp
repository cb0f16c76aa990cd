#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

#include "condiff/asymptotics.hpp"
#include "condiff/exact.hpp"

using namespace condiff;

namespace {

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Rates random_rates(std::mt19937_64& rng, double lo = 0.05, double hi = 3.0) {
  auto draw = [&] { return lo + (hi - lo) * u01(rng); };
  return Rates::of(draw(), draw(), draw(), draw());
}

}  // namespace

TEST_CASE("gamma values") {
  CHECK(gamma_of_u(Rates::of(1, 1, 1, 1), 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10; ++i) {
    const double u = 0.3 + 2.0 * u01(rng);
    // tau_b = 0 specialization: gamma = tau_a tau_c u + tau_c tau_d = u + 1 here.
    CHECK(gamma_of_u(Rates::of(1, 0, 1, 1), u) == doctest::Approx(u + 1.0).epsilon(1e-14));
    // Balanced rates: gamma(e^s) = 4 cosh^2(s/2).
    const double s = 3.0 * u01(rng) - 1.5;
    const double ch = std::cosh(s / 2.0);
    CHECK(gamma_of_u(Rates::of(1, 1, 1, 1), std::exp(s)) ==
          doctest::Approx(4.0 * ch * ch).epsilon(1e-13));
  }
  CHECK(gamma_of_u(Rates::of(1, 1, 1, 1), 1.0) ==
        doctest::Approx((1 + 1) * (1 + 1)).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_of_u(Rates::of(1, 1, 1, 1), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_of_u(Rates::of(1, 1, 1, 1), -2.0), std::invalid_argument);
}

TEST_CASE("moment expansion on the balanced quadruple") {
  const AsymptoticMoments m = moment_expansion(Rates::of(1, 1, 1, 1));
  CHECK(m.e_lead == 0.0);
  CHECK(m.e_const == 0.0);
  CHECK(m.v_lead == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.v_const == doctest::Approx(-0.125).epsilon(1e-15));
}

TEST_CASE("moment expansion on (2,1,1,1)") {
  const AsymptoticMoments m = moment_expansion(Rates::of(2, 1, 1, 1));
  CHECK(m.e_lead == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
  CHECK(m.e_const == doctest::Approx(-1.0 / 24.0).epsilon(1e-15));
  CHECK(m.v_lead == doctest::Approx(35.0 / (2.0 * std::pow(6.0, 1.5))).epsilon(1e-15));
  CHECK(m.v_const == doctest::Approx(-17.0 / 144.0).epsilon(1e-15));
}

TEST_CASE("moment expansion rejects dirac rates") {
  CHECK_THROWS_AS(moment_expansion(Rates::of(0, 0, 1, 1)), std::domain_error);
  CHECK_THROWS_AS(quasi_powers(Rates::of(1, 1, 0, 0), 0.1), std::domain_error);
}

TEST_CASE("expansion symmetries") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 25; ++i) {
    const Rates r = random_rates(rng);
    const AsymptoticMoments base = moment_expansion(r);
    // (A<->B, C<->D) negates E and E', preserves V and V'.
    const AsymptoticMoments neg = moment_expansion(Rates::of(r.tau_b, r.tau_a, r.tau_d, r.tau_c));
    CHECK(neg.e_lead == doctest::Approx(-base.e_lead).epsilon(1e-13));
    CHECK(neg.e_const == doctest::Approx(-base.e_const).epsilon(1e-13));
    CHECK(neg.v_lead == doctest::Approx(base.v_lead).epsilon(1e-13));
    CHECK(neg.v_const == doctest::Approx(base.v_const).epsilon(1e-13));
    // (A<->C, B<->D) preserves all four.
    const AsymptoticMoments same = moment_expansion(Rates::of(r.tau_c, r.tau_d, r.tau_a, r.tau_b));
    CHECK(same.e_lead == doctest::Approx(base.e_lead).epsilon(1e-13));
    CHECK(same.e_const == doctest::Approx(base.e_const).epsilon(1e-13));
    CHECK(same.v_lead == doctest::Approx(base.v_lead).epsilon(1e-13));
    CHECK(same.v_const == doctest::Approx(base.v_const).epsilon(1e-13));
  }
}

TEST_CASE("saddle point on (2,1,1,1) at u=1") {
  const SaddleData sd = saddle_point(Rates::of(2, 1, 1, 1), 1.0);
  CHECK(sd.dimension == 3);
  CHECK(sd.point[0] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK(sd.point[1] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(sd.point[2] == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));
  CHECK(sd.psi_star == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sd.phi_star == doctest::Approx(-2.0 * std::sqrt(6.0)).epsilon(1e-14));
  CHECK(sd.hessian_det == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
}

TEST_CASE("saddle system residuals vanish on random oriented quadruples") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const Rates r = orient(random_rates(rng)).oriented;
    for (double u : {0.8, 1.0, 1.25}) {
      const SaddleData sd = saddle_point(r, u);
      const double x = sd.point[0], y = sd.point[1], z = sd.point[2];
      CHECK(std::abs(x * (x + z) - r.tau_a * r.tau_b) <= 1e-12 * (1 + r.tau_a * r.tau_b));
      CHECK(std::abs(y * (y + z) - r.tau_c * r.tau_d) <= 1e-12 * (1 + r.tau_c * r.tau_d));
      CHECK(std::abs((x + z) * (y + z) - r.tau_a * r.tau_c * u) <=
            1e-12 * (1 + r.tau_a * r.tau_c * u));
      CHECK(sd.phi_star ==
            doctest::Approx(-2.0 * std::sqrt(gamma_of_u(r, u))).epsilon(1e-13));
      CHECK(sd.hessian_det > 0.0);
    }
  }
}

TEST_CASE("saddle point in the single-zero case") {
  const SaddleData sd = saddle_point(Rates::of(1, 0, 1, 1), 1.0);
  CHECK(sd.dimension == 2);
  CHECK(sd.point[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sd.point[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sd.phi_star == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("saddle point in the opposite-pair case") {
  const SaddleData sd = saddle_point(Rates::of(1, 0, 1, 0), 1.0);
  CHECK(sd.dimension == 1);
  CHECK(sd.point[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sd.phi_star == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(sd.hessian_det == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("saddle reduction keeps phi_star tied to the original gamma") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 10; ++i) {
    const double u = 0.7 + 0.7 * u01(rng);
    // Zero at each single corner in turn.
    for (int corner = 0; corner < 4; ++corner) {
      double t[4];
      for (double& v : t) v = 0.1 + 2.0 * u01(rng);
      t[corner] = 0.0;
      const Rates r = Rates::of(t[0], t[1], t[2], t[3]);
      const SaddleData sd = saddle_point(r, u);
      CHECK(sd.phi_star == doctest::Approx(-2.0 * std::sqrt(gamma_of_u(r, u))).epsilon(1e-13));
      CHECK(sd.dimension == 2);
    }
    const Rates ac = Rates::of(0.0, 0.4 + u01(rng), 0.0, 0.4 + u01(rng));
    const SaddleData sd = saddle_point(ac, u);
    CHECK(sd.dimension == 1);
    CHECK(sd.phi_star == doctest::Approx(-2.0 * std::sqrt(gamma_of_u(ac, u))).epsilon(1e-13));
  }
}

TEST_CASE("saddle point rejects dirac rates and bad u") {
  CHECK_THROWS_AS(saddle_point(Rates::of(0, 0, 1, 1), 1.0), std::domain_error);
  CHECK_THROWS_AS(saddle_point(Rates::of(1, 1, 1, 1), 0.0), std::invalid_argument);
}

TEST_CASE("admissibility holds at u = 1 under orientation") {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 20; ++i) {
    const Rates r = orient(random_rates(rng)).oriented;
    const SaddleData sd = saddle_point(r, 1.0);
    CHECK(sd.point[2] >= 0.0);
    CHECK(sd.point[2] > std::max(-sd.point[0], -sd.point[1]));
  }
}

TEST_CASE("quasi powers on the balanced quadruple has the cosh form") {
  const Rates r = Rates::of(1, 1, 1, 1);
  std::mt19937_64 rng(26);
  for (int i = 0; i < 10; ++i) {
    const double s = 2.0 * u01(rng) - 1.0;
    const QuasiPowersPair q = quasi_powers(r, s);
    CHECK(q.f_value == doctest::Approx(4.0 * (std::cosh(s / 2.0) - 1.0)).epsilon(1e-12));
    CHECK(q.g_value == doctest::Approx(-0.5 * std::log(std::cosh(s / 2.0))).epsilon(1e-12));
  }
  const QuasiPowersPair q0 = quasi_powers(r, 0.0);
  CHECK(q0.f_value == 0.0);
  CHECK(q0.g_value == 0.0);
  CHECK(q0.f2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q0.g2 == doctest::Approx(-0.125).epsilon(1e-15));
}

TEST_CASE("quasi powers derivatives reproduce the moment expansion") {
  std::mt19937_64 rng(27);
  for (int i = 0; i < 50; ++i) {
    const Rates r = random_rates(rng);
    const AsymptoticMoments m = moment_expansion(r);
    const QuasiPowersPair q = quasi_powers(r, 0.0);
    CHECK(std::abs(q.f1 - m.e_lead) <= 1e-10 * std::max(1.0, std::abs(m.e_lead)));
    CHECK(std::abs(q.f2 - m.v_lead) <= 1e-10 * std::max(1.0, std::abs(m.v_lead)));
    CHECK(std::abs(q.g1 - m.e_const) <= 1e-10 * std::max(1.0, std::abs(m.e_const)));
    CHECK(std::abs(q.g2 - m.v_const) <= 1e-10 * std::max(1.0, std::abs(m.v_const)));
    // Central finite differences with step 1e-4 as the independent oracle.
    const double h = 1e-4;
    const QuasiPowersPair qp = quasi_powers(r, h);
    const QuasiPowersPair qm = quasi_powers(r, -h);
    CHECK(std::abs((qp.f_value - qm.f_value) / (2 * h) - q.f1) < 1e-6);
    CHECK(std::abs((qp.f_value + qm.f_value) / (h * h) - q.f2) < 1e-6);
    CHECK(std::abs((qp.g_value - qm.g_value) / (2 * h) - q.g1) < 1e-6);
    CHECK(std::abs((qp.g_value + qm.g_value) / (h * h) - q.g2) < 1e-6);
    CHECK(q.f2 > 0.0);
  }
}

TEST_CASE("gn asymptote arithmetic at the balanced point") {
  const double want = 4.0 - 0.25 * std::log(4.0) - std::log(2.0 * std::sqrt(std::numbers::pi));
  CHECK(gn_asymptote(Rates::of(1, 1, 1, 1), 1, 1.0) == doctest::Approx(want).epsilon(1e-15));
  CHECK(want == doctest::Approx(2.38791).epsilon(1e-5));
}

TEST_CASE("gn asymptote matches the I0 asymptote in the single-sum case") {
  for (std::int64_t n : {5, 20, 100}) {
    const double nd = static_cast<double>(n);
    const double want = 2.0 * nd - std::log(2.0 * std::sqrt(std::numbers::pi * nd));
    CHECK(gn_asymptote(Rates::of(1, 0, 1, 0), n, 1.0) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("gn asymptote converges to the exact sum") {
  const Rates r = Rates::of(2, 1, 1, 1);
  double prev_err = 1e9;
  for (std::int64_t n : {10, 20, 40, 80}) {
    const double exact = evaluate_gn(r, n, 1.1, 1e-13).log_value;
    const double asym = gn_asymptote(r, n, 1.1);
    const double err = std::abs(std::exp(asym - exact) - 1.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.01);
}

TEST_CASE("degenerate gamma and asymptote specialize exactly") {
  std::mt19937_64 rng(28);
  for (int i = 0; i < 20; ++i) {
    const double ta = 0.1 + 2 * u01(rng), tc = 0.1 + 2 * u01(rng), td = 0.1 + 2 * u01(rng);
    const double u = 0.75 + 0.5 * u01(rng);
    const Rates r1 = Rates::of(ta, 0, tc, td);
    const double delta = ta * tc * u + tc * td;
    CHECK(std::abs(gamma_of_u(r1, u) - delta) <= 1e-12 * (1 + delta));
    CHECK(std::abs(saddle_point(r1, u).phi_star + 2 * std::sqrt(delta)) <= 1e-12 * (1 + delta));
    const Rates r2 = Rates::of(ta, 0, tc, 0);
    CHECK(std::abs(gamma_of_u(r2, u) - ta * tc * u) <= 1e-12 * (1 + ta * tc * u));
    const double nd = 37.0;
    const double direct = 2 * nd * std::sqrt(delta) - 0.25 * std::log(delta) -
                          std::log(2 * std::sqrt(std::numbers::pi * nd));
    CHECK(std::abs(gn_asymptote(r1, 37, u) - direct) <= 1e-12 * (1 + std::abs(direct)));
  }
}
