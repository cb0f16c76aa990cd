// Generic numeric engine for the Laplace method on lattice sums
//   I_n = sum_{k >= 0, k/n in box} psi(k/n) exp(-n phi(k/n)),  d in {1, 2, 3}:
// locate the interior minimum of phi by damped Newton, certify positive
// definiteness of the Hessian, and evaluate the asymptote
//   I_n ~ (2 pi n)^{d/2} psi(theta*) exp(-n phi(theta*)) / sqrt(det Hessian).
// Exact lattice sums are provided for convergence testing.

#ifndef CONDIFF_LAPLACE_HPP
#define CONDIFF_LAPLACE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <span>

namespace condiff {

// Scalar field over the box. gradient/hessian may be left empty, in which
// case central differences with step eps^(1/3) * (1 + |x|) are used.
// value() should return +inf outside the field's natural domain.
struct Field {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;  // optional
  std::function<void(std::span<const double>, std::span<double>)> hessian;   // optional, row-major d*d
};

struct Box {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
};

struct LaplaceProblem {
  int dimension = 1;
  Field phi;
  std::function<double(std::span<const double>)> psi;
  Box box;
  std::array<double, 3> start{};
};

struct MinimizeResult {
  std::array<double, 3> minimizer{};
  double phi_min = 0.0;
  std::array<double, 9> hessian{};  // row-major d*d at the minimizer
  double hessian_det = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
};

struct LaplaceAsymptote {
  int dimension = 1;
  std::array<double, 3> theta_star{};
  double phi_min = 0.0;
  double log_psi_star = 0.0;
  double hessian_det = 0.0;

  // log I_n per Lemma-1 shape.
  double log_value(std::int64_t n) const;
};

// Damped Newton with step halving from problem.start. Fails (std::domain_error)
// on non-convergence after 200 iterations, a minimizer within 1e-8 of the box
// boundary, an indefinite Hessian, or a coarse 32^d grid value undercutting
// the converged minimum (heuristic global-minimum evidence).
MinimizeResult minimize(const LaplaceProblem& problem);

// Packages the Lemma-1 asymptote; requires psi(theta*) > 0.
LaplaceAsymptote asymptote(const LaplaceProblem& problem);

// log of the exact lattice sum at scale n. Guarded to <= 1e8 lattice points.
double direct_lattice_sum(const LaplaceProblem& problem, std::int64_t n);

}  // namespace condiff

#endif
