// The summand fields of the G_n(u) lattice sums, packaged as Laplace
// problems: exponent phi_u and prefactor psi for the triple-sum (all rates
// positive), the double-sum (tau_b = 0) and the single-sum
// (tau_b = tau_d = 0) representations, with analytic gradients and Hessians.
//
// Coordinates follow the sum variables divided by n:
//   generic:       (x, y, z) = (b, d, g) / n
//   single zero:   (x, y) = (a, d) / n      [canonical tau_b = 0]
//   opposite pair: x = a / n                [canonical tau_b = tau_d = 0]
//
// x log x is extended continuously by 0 log 0 = 0, matching the summand's
// value at zero indices; phi returns +inf outside its natural domain.

#ifndef CONDIFF_GN_FIELDS_HPP
#define CONDIFF_GN_FIELDS_HPP

#include "condiff/laplace.hpp"
#include "condiff/rates.hpp"

namespace condiff {

// Requires all four rates positive. Default box and start bracket the
// stationary point generously; both may be overwritten before use.
LaplaceProblem generic_sum_problem(const Rates& rates, double u);

// Requires tau_b == 0 and tau_a, tau_c, tau_d > 0 (canonical reduced form).
LaplaceProblem single_zero_sum_problem(const Rates& rates, double u);

// Requires tau_b == tau_d == 0 and tau_a, tau_c > 0.
LaplaceProblem opposite_pair_sum_problem(const Rates& rates, double u);

}  // namespace condiff

#endif
