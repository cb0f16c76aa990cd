#include "condiff/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "condiff/logspace.hpp"

namespace condiff {

namespace {

constexpr double kGradTol = 1e-12;
constexpr int kMaxNewtonIters = 200;
constexpr double kBoundaryTol = 1e-8;
constexpr int kGridPerAxis = 32;
constexpr std::int64_t kMaxLatticePoints = 100'000'000;

using Vec = std::array<double, 3>;

double eval_phi(const LaplaceProblem& p, const Vec& x) {
  return p.phi.value(std::span<const double>(x.data(), static_cast<std::size_t>(p.dimension)));
}

void numeric_gradient(const LaplaceProblem& p, const Vec& x, std::span<double> out) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  for (int i = 0; i < p.dimension; ++i) {
    const double h = base * (1.0 + std::abs(x[static_cast<std::size_t>(i)]));
    Vec xp = x, xm = x;
    xp[static_cast<std::size_t>(i)] += h;
    xm[static_cast<std::size_t>(i)] -= h;
    out[static_cast<std::size_t>(i)] = (eval_phi(p, xp) - eval_phi(p, xm)) / (2.0 * h);
  }
}

void numeric_hessian(const LaplaceProblem& p, const Vec& x, std::span<double> out) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  const int d = p.dimension;
  const double f0 = eval_phi(p, x);
  std::array<double, 3> h{};
  for (int i = 0; i < d; ++i) {
    h[static_cast<std::size_t>(i)] = base * (1.0 + std::abs(x[static_cast<std::size_t>(i)]));
  }
  for (int i = 0; i < d; ++i) {
    Vec xp = x, xm = x;
    xp[static_cast<std::size_t>(i)] += h[static_cast<std::size_t>(i)];
    xm[static_cast<std::size_t>(i)] -= h[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i * d + i)] =
        (eval_phi(p, xp) - 2.0 * f0 + eval_phi(p, xm)) /
        (h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < d; ++j) {
      Vec xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[static_cast<std::size_t>(i)] += h[static_cast<std::size_t>(i)];
      xpp[static_cast<std::size_t>(j)] += h[static_cast<std::size_t>(j)];
      xpm[static_cast<std::size_t>(i)] += h[static_cast<std::size_t>(i)];
      xpm[static_cast<std::size_t>(j)] -= h[static_cast<std::size_t>(j)];
      xmp[static_cast<std::size_t>(i)] -= h[static_cast<std::size_t>(i)];
      xmp[static_cast<std::size_t>(j)] += h[static_cast<std::size_t>(j)];
      xmm[static_cast<std::size_t>(i)] -= h[static_cast<std::size_t>(i)];
      xmm[static_cast<std::size_t>(j)] -= h[static_cast<std::size_t>(j)];
      const double v = (eval_phi(p, xpp) - eval_phi(p, xpm) - eval_phi(p, xmp) + eval_phi(p, xmm)) /
                       (4.0 * h[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j)]);
      out[static_cast<std::size_t>(i * d + j)] = v;
      out[static_cast<std::size_t>(j * d + i)] = v;
    }
  }
}

void gradient(const LaplaceProblem& p, const Vec& x, std::span<double> out) {
  if (p.phi.gradient) {
    p.phi.gradient(std::span<const double>(x.data(), static_cast<std::size_t>(p.dimension)), out);
  } else {
    numeric_gradient(p, x, out);
  }
}

void hessian(const LaplaceProblem& p, const Vec& x, std::span<double> out) {
  if (p.phi.hessian) {
    p.phi.hessian(std::span<const double>(x.data(), static_cast<std::size_t>(p.dimension)), out);
  } else {
    numeric_hessian(p, x, out);
  }
}

// Solve H s = g for d <= 3, Gaussian elimination with partial pivoting.
bool solve_small(int d, std::array<double, 9> h, std::array<double, 3> g, Vec& s) {
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int rr = col + 1; rr < d; ++rr) {
      if (std::abs(h[static_cast<std::size_t>(rr * d + col)]) >
          std::abs(h[static_cast<std::size_t>(piv * d + col)])) {
        piv = rr;
      }
    }
    if (h[static_cast<std::size_t>(piv * d + col)] == 0.0) return false;
    if (piv != col) {
      for (int cc = 0; cc < d; ++cc) {
        std::swap(h[static_cast<std::size_t>(piv * d + cc)], h[static_cast<std::size_t>(col * d + cc)]);
      }
      std::swap(g[static_cast<std::size_t>(piv)], g[static_cast<std::size_t>(col)]);
    }
    for (int rr = col + 1; rr < d; ++rr) {
      const double f = h[static_cast<std::size_t>(rr * d + col)] / h[static_cast<std::size_t>(col * d + col)];
      for (int cc = col; cc < d; ++cc) {
        h[static_cast<std::size_t>(rr * d + cc)] -= f * h[static_cast<std::size_t>(col * d + cc)];
      }
      g[static_cast<std::size_t>(rr)] -= f * g[static_cast<std::size_t>(col)];
    }
  }
  for (int row = d - 1; row >= 0; --row) {
    double acc = g[static_cast<std::size_t>(row)];
    for (int cc = row + 1; cc < d; ++cc) {
      acc -= h[static_cast<std::size_t>(row * d + cc)] * s[static_cast<std::size_t>(cc)];
    }
    s[static_cast<std::size_t>(row)] = acc / h[static_cast<std::size_t>(row * d + row)];
  }
  return true;
}

double det_leading(int d, const std::array<double, 9>& h, int k) {
  // Determinant of the leading k x k minor, k <= 3.
  if (k == 1) return h[0];
  if (k == 2) return h[static_cast<std::size_t>(0)] * h[static_cast<std::size_t>(d + 1)] -
                     h[static_cast<std::size_t>(1)] * h[static_cast<std::size_t>(d)];
  const auto at = [&](int i, int j) { return h[static_cast<std::size_t>(i * d + j)]; };
  return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
         at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
         at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
}

void validate_problem(const LaplaceProblem& p) {
  if (p.dimension < 1 || p.dimension > 3) {
    throw std::invalid_argument("laplace: dimension must be 1, 2 or 3");
  }
  if (!p.phi.value || !p.psi) {
    throw std::invalid_argument("laplace: phi and psi callables are required");
  }
  for (int i = 0; i < p.dimension; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (!(p.box.lo[idx] < p.box.hi[idx])) {
      throw std::invalid_argument("laplace: box must be nonempty");
    }
    if (!(p.start[idx] > p.box.lo[idx] && p.start[idx] < p.box.hi[idx])) {
      throw std::invalid_argument("laplace: start point must be strictly interior");
    }
  }
}

}  // namespace

MinimizeResult minimize(const LaplaceProblem& p) {
  validate_problem(p);
  const int d = p.dimension;
  Vec x = p.start;
  double fx = eval_phi(p, x);
  if (!std::isfinite(fx)) {
    throw std::invalid_argument("laplace: phi(start) is not finite");
  }

  MinimizeResult res;
  std::array<double, 3> g{};
  std::array<double, 9> h{};
  bool converged = false;
  int iter = 0;
  for (; iter < kMaxNewtonIters; ++iter) {
    gradient(p, x, std::span<double>(g.data(), static_cast<std::size_t>(d)));
    double gnorm = 0.0;
    for (int i = 0; i < d; ++i) gnorm += g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
    gnorm = std::sqrt(gnorm);
    res.gradient_norm = gnorm;
    if (gnorm < kGradTol) {
      converged = true;
      break;
    }
    hessian(p, x, std::span<double>(h.data(), static_cast<std::size_t>(d * d)));
    Vec step{};
    if (!solve_small(d, h, g, step)) {
      throw std::domain_error("laplace minimize: singular Hessian during Newton iteration");
    }
    double step_norm = 0.0, x_norm = 0.0;
    for (int i = 0; i < d; ++i) {
      step_norm += step[static_cast<std::size_t>(i)] * step[static_cast<std::size_t>(i)];
      x_norm += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }
    if (std::sqrt(step_norm) < 1e-8 * (1.0 + std::sqrt(x_norm))) {
      // Quadratic-contraction endgame: phi differences underflow below
      // representability here, so take full Newton steps on the gradient
      // alone until the gradient criterion is met.
      for (int i = 0; i < d; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        x[idx] = std::clamp(x[idx] - step[idx], p.box.lo[idx], p.box.hi[idx]);
      }
      fx = eval_phi(p, x);
      continue;
    }
    double alpha = 1.0;
    bool moved = false;
    while (alpha > 1e-14) {
      Vec xn = x;
      for (int i = 0; i < d; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        // The box is the domain: project trial points back onto it.
        xn[idx] = std::clamp(x[idx] - alpha * step[idx], p.box.lo[idx], p.box.hi[idx]);
      }
      const double fn = eval_phi(p, xn);
      // Strict decrease for damped steps; the full Newton step may also tie,
      // which happens once phi differences fall under one ulp near the
      // minimizer. NaN/inf trial points fail both comparisons.
      if (fn < fx || (alpha == 1.0 && fn <= fx)) {
        x = xn;
        fx = fn;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) {
      for (int i = 0; i < d; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (x[idx] - p.box.lo[idx] < kBoundaryTol || p.box.hi[idx] - x[idx] < kBoundaryTol) {
          throw std::domain_error(
              "laplace minimize: descent stalled at the box boundary; interiority hypothesis fails");
        }
      }
      throw std::domain_error("laplace minimize: line search failed to decrease phi");
    }
  }
  if (!converged) {
    throw std::domain_error("laplace minimize: no convergence within 200 Newton iterations");
  }

  for (int i = 0; i < d; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (x[idx] - p.box.lo[idx] < kBoundaryTol || p.box.hi[idx] - x[idx] < kBoundaryTol) {
      throw std::domain_error(
          "laplace minimize: minimizer within 1e-8 of the box boundary; interiority hypothesis fails");
    }
  }

  hessian(p, x, std::span<double>(h.data(), static_cast<std::size_t>(d * d)));
  for (int k = 1; k <= d; ++k) {
    if (!(det_leading(d, h, k) > 0.0)) {
      throw std::domain_error("laplace minimize: Hessian at the minimizer is not positive definite");
    }
  }

  // Coarse sweep: heuristic evidence the converged minimum is global.
  {
    Vec probe{};
    const double slack = 1e-9 * (1.0 + std::abs(fx));
    std::array<int, 3> idx{};
    const int cells = kGridPerAxis;
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) total *= cells + 1;
    for (std::int64_t flat = 0; flat < total; ++flat) {
      std::int64_t rem = flat;
      for (int i = 0; i < d; ++i) {
        idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % (cells + 1));
        rem /= cells + 1;
      }
      for (int i = 0; i < d; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        probe[ii] = p.box.lo[ii] +
                    (p.box.hi[ii] - p.box.lo[ii]) * static_cast<double>(idx[ii]) / cells;
      }
      const double fp = eval_phi(p, probe);
      if (fp < fx - slack) {
        throw std::domain_error(
            "laplace minimize: grid sweep found a lower phi value; minimum is not global");
      }
    }
  }

  res.minimizer = x;
  res.phi_min = fx;
  res.hessian = h;
  res.hessian_det = det_leading(d, h, d);
  res.iterations = iter;
  return res;
}

LaplaceAsymptote asymptote(const LaplaceProblem& p) {
  const MinimizeResult m = minimize(p);
  const double psi_star =
      p.psi(std::span<const double>(m.minimizer.data(), static_cast<std::size_t>(p.dimension)));
  if (!(psi_star > 0.0)) {
    throw std::domain_error("laplace asymptote: psi(theta*) must be positive");
  }
  LaplaceAsymptote a;
  a.dimension = p.dimension;
  a.theta_star = m.minimizer;
  a.phi_min = m.phi_min;
  a.log_psi_star = std::log(psi_star);
  a.hessian_det = m.hessian_det;
  return a;
}

double LaplaceAsymptote::log_value(std::int64_t n) const {
  const double nd = static_cast<double>(n);
  return 0.5 * dimension * std::log(2.0 * std::numbers::pi * nd) + log_psi_star - nd * phi_min -
         0.5 * std::log(hessian_det);
}

double direct_lattice_sum(const LaplaceProblem& p, std::int64_t n) {
  validate_problem(p);
  if (n < 1) throw std::invalid_argument("direct_lattice_sum: n must be >= 1");
  const int d = p.dimension;
  std::array<std::int64_t, 3> klo{}, khi{};
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    klo[idx] = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::ceil(p.box.lo[idx] * static_cast<double>(n) - 1e-9)));
    khi[idx] = static_cast<std::int64_t>(std::floor(p.box.hi[idx] * static_cast<double>(n) + 1e-9));
    if (khi[idx] < klo[idx]) return kNegInf;
    total *= khi[idx] - klo[idx] + 1;
    if (total > kMaxLatticePoints) {
      throw std::domain_error("direct_lattice_sum: lattice exceeds the enumeration budget (1e8 points)");
    }
  }
  LogSumAccumulator acc;
  Vec x{};
  std::array<std::int64_t, 3> k = klo;
  const double nd = static_cast<double>(n);
  for (;;) {
    for (int i = 0; i < d; ++i) {
      x[static_cast<std::size_t>(i)] = static_cast<double>(k[static_cast<std::size_t>(i)]) / nd;
    }
    const std::span<const double> xs(x.data(), static_cast<std::size_t>(d));
    const double psi = p.psi(xs);
    if (psi < 0.0) {
      throw std::domain_error("direct_lattice_sum: psi must be nonnegative for log-scale output");
    }
    if (psi > 0.0) {
      const double lt = std::log(psi) - nd * p.phi.value(xs);
      if (std::isfinite(lt)) acc.add(lt);
    }
    int i = 0;
    for (; i < d; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (++k[idx] <= khi[idx]) break;
      k[idx] = klo[idx];
    }
    if (i == d) break;
  }
  return acc.log_total();
}

}  // namespace condiff
