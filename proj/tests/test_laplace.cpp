#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "condiff/asymptotics.hpp"
#include "condiff/gn_fields.hpp"
#include "condiff/laplace.hpp"

using namespace condiff;

namespace {

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

LaplaceProblem quadratic_problem() {
  LaplaceProblem p;
  p.dimension = 1;
  p.phi.value = [](std::span<const double> v) { return (v[0] - 0.3) * (v[0] - 0.3); };
  p.psi = [](std::span<const double>) { return 1.0; };
  p.box.lo = {0.0, 0, 0};
  p.box.hi = {1.0, 0, 0};
  p.start = {0.5, 0, 0};
  return p;
}

}  // namespace

TEST_CASE("newton finds the quadratic minimum immediately") {
  const MinimizeResult m = minimize(quadratic_problem());
  CHECK(std::abs(m.minimizer[0] - 0.3) < 1e-10);
  CHECK(m.iterations <= 2);
  CHECK(m.hessian_det == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("newton recovers the generic closed-form saddle from a neutral start") {
  LaplaceProblem p = generic_sum_problem(Rates::of(2, 1, 1, 1), 1.0);
  p.start = {1.0, 1.0, 0.5};
  const MinimizeResult m = minimize(p);
  const SaddleData sd = saddle_point(Rates::of(2, 1, 1, 1), 1.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(m.minimizer[static_cast<std::size_t>(i)] -
                   sd.point[static_cast<std::size_t>(i)]) < 1e-10);
  }
  CHECK(m.hessian_det == doctest::Approx(sd.hessian_det).epsilon(1e-10));
  CHECK(m.phi_min == doctest::Approx(sd.phi_star).epsilon(1e-12));
}

TEST_CASE("newton agrees with the closed form on random oriented fixtures") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    auto draw = [&] { return 0.1 + 2.5 * u01(rng); };
    const Rates r = orient(Rates::of(draw(), draw(), draw(), draw())).oriented;
    const double u = 0.85 + 0.4 * u01(rng);
    const SaddleData sd = saddle_point(r, u);
    const MinimizeResult m = minimize(generic_sum_problem(r, u));
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(m.minimizer[static_cast<std::size_t>(k)] -
                     sd.point[static_cast<std::size_t>(k)]) < 1e-10);
    }
    CHECK(m.hessian_det > 0.0);
    CHECK(std::abs(m.hessian_det - sd.hessian_det) < 1e-8 * sd.hessian_det);
  }
}

TEST_CASE("newton solves the single-sum fixture on the stated box") {
  LaplaceProblem p = opposite_pair_sum_problem(Rates::of(1, 0, 1, 0), 1.0);
  p.box.lo = {0.1, 0, 0};
  p.box.hi = {3.0, 0, 0};
  p.start = {0.5, 0, 0};
  const MinimizeResult m = minimize(p);
  CHECK(std::abs(m.minimizer[0] - 1.0) < 1e-12);
  CHECK(m.phi_min == doctest::Approx(-2.0).epsilon(1e-13));
}

TEST_CASE("newton solves the double-sum fixture") {
  const MinimizeResult m = minimize(single_zero_sum_problem(Rates::of(1, 0, 1, 1), 1.0));
  CHECK(std::abs(m.minimizer[0] - 1.0 / std::sqrt(2.0)) < 1e-11);
  CHECK(std::abs(m.minimizer[1] - 1.0 / std::sqrt(2.0)) < 1e-11);
}

TEST_CASE("minimize reports boundary minima instead of accepting them") {
  LaplaceProblem p = quadratic_problem();
  p.box.lo = {0.4, 0, 0};  // true minimum at 0.3 sits outside the box
  p.start = {0.7, 0, 0};
  CHECK_THROWS_AS(minimize(p), std::domain_error);
}

TEST_CASE("minimize rejects a local minimum when the sweep sees lower values") {
  LaplaceProblem p;
  p.dimension = 1;
  // Double well: local minimum near 0.25, global near 0.75.
  p.phi.value = [](std::span<const double> v) {
    const double x = v[0];
    const double l = (x - 0.25), r = (x - 0.75);
    return l * l * r * r + 0.1 * r * r;
  };
  p.psi = [](std::span<const double>) { return 1.0; };
  p.box.lo = {0.0, 0, 0};
  p.box.hi = {1.0, 0, 0};
  p.start = {0.2, 0, 0};
  CHECK_THROWS_AS(minimize(p), std::domain_error);
}

TEST_CASE("asymptote shifts by log c when psi is scaled by c") {
  LaplaceProblem p = quadratic_problem();
  p.psi = [](std::span<const double> v) { return std::exp(v[0]); };
  const LaplaceAsymptote base = asymptote(p);
  LaplaceProblem q = p;
  q.psi = [](std::span<const double> v) { return 7.5 * std::exp(v[0]); };
  const LaplaceAsymptote scaled = asymptote(q);
  for (std::int64_t n : {3, 50, 400}) {
    CHECK(scaled.log_value(n) - base.log_value(n) == doctest::Approx(std::log(7.5)).epsilon(1e-12));
  }
}

TEST_CASE("asymptote of the generic fixture carries the paper prefactor") {
  const LaplaceAsymptote a = asymptote(generic_sum_problem(Rates::of(1, 1, 1, 1), 1.0));
  CHECK(std::exp(a.log_psi_star) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lattice sum converges to the asymptote on a curved fixture") {
  LaplaceProblem p = quadratic_problem();
  p.psi = [](std::span<const double> v) { return std::exp(v[0]); };
  const LaplaceAsymptote a = asymptote(p);
  double prev = 1e9;
  for (std::int64_t n : {50, 100, 200}) {
    const double err = std::abs(std::exp(direct_lattice_sum(p, n) - a.log_value(n)) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("lattice error halves when n doubles on the single-sum fixture") {
  LaplaceProblem p = opposite_pair_sum_problem(Rates::of(1, 0, 1, 0), 1.0);
  p.box.lo = {0.1, 0, 0};
  p.box.hi = {3.0, 0, 0};
  p.start = {0.5, 0, 0};
  const LaplaceAsymptote a = asymptote(p);
  const double e100 = std::abs(std::exp(direct_lattice_sum(p, 100) - a.log_value(100)) - 1.0);
  const double e200 = std::abs(std::exp(direct_lattice_sum(p, 200) - a.log_value(200)) - 1.0);
  CHECK(e100 < 0.02);
  CHECK(e200 < 0.7 * e100);
}

TEST_CASE("lattice sum is invariant under reflecting box and fields") {
  LaplaceProblem p;
  p.dimension = 1;
  p.phi.value = [](std::span<const double> v) { return (v[0] - 0.4) * (v[0] - 0.4); };
  p.psi = [](std::span<const double> v) { return 1.0 + v[0]; };
  p.box.lo = {0.0, 0, 0};
  p.box.hi = {1.0, 0, 0};
  p.start = {0.5, 0, 0};
  LaplaceProblem q = p;
  q.phi.value = [](std::span<const double> v) { return (1.0 - v[0] - 0.4) * (1.0 - v[0] - 0.4); };
  q.psi = [](std::span<const double> v) { return 1.0 + (1.0 - v[0]); };
  for (std::int64_t n : {17, 64}) {
    CHECK(direct_lattice_sum(p, n) == doctest::Approx(direct_lattice_sum(q, n)).epsilon(1e-13));
  }
}

TEST_CASE("lattice sum enforces the enumeration budget") {
  LaplaceProblem p = generic_sum_problem(Rates::of(1, 1, 1, 1), 1.0);
  CHECK_THROWS_AS(direct_lattice_sum(p, 10'000'000), std::domain_error);
}

TEST_CASE("problem validation") {
  LaplaceProblem p = quadratic_problem();
  p.start = {0.0, 0, 0};
  CHECK_THROWS_AS(minimize(p), std::invalid_argument);
  p = quadratic_problem();
  p.dimension = 4;
  CHECK_THROWS_AS(minimize(p), std::invalid_argument);
  p = quadratic_problem();
  p.box.hi = {-1.0, 0, 0};
  CHECK_THROWS_AS(minimize(p), std::invalid_argument);
}
