#pragma once

// Derivative-free maximization (Nelder-Mead) and central-difference Hessians
// for log-densities that return -inf outside their support.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "dccgarch/errors.hpp"

namespace dccgarch {

struct SimplexOptions {
  std::size_t max_evals_per_param = 500;
  double rel_tol = 1e-8;
  double initial_step = 0.05;  // relative; absolute 0.00025 for zero coordinates
};

struct SimplexResult {
  Eigen::VectorXd argmax;
  double value = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Maximizes `f` from `x0`. Non-finite values act as rejections of the simplex move.
/// Converged when the vertex values agree to rel_tol * max(|f|, 1) and every
/// coordinate of the simplex agrees to rel_tol * max(|x_i|, 1).
template <typename LogDensity>
SimplexResult maximize_simplex(const LogDensity& f, const Eigen::VectorXd& x0, const SimplexOptions& opt = {}) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw InvalidInput("maximize_simplex: empty starting point");
  const std::size_t max_evals = opt.max_evals_per_param * static_cast<std::size_t>(n);

  SimplexResult res;
  // Minimize g = -f; non-finite f maps to +inf.
  auto g = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> vert(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> val(static_cast<std::size_t>(n + 1));
  val[0] = g(x0);
  if (!std::isfinite(val[0])) throw InvalidInput("maximize_simplex: starting point has non-finite log-density");
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& v = vert[static_cast<std::size_t>(i + 1)];
    double step = x0[i] != 0.0 ? opt.initial_step * x0[i] : 0.00025;
    double fv = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 60 && !std::isfinite(fv); ++attempt) {
      v = x0;
      v[i] += (attempt % 2 == 0) ? step : -step;
      fv = g(v);
      if (attempt % 2 == 1) step *= 0.5;
    }
    val[static_cast<std::size_t>(i + 1)] = fv;
  }

  std::vector<std::size_t> order(vert.size());
  Eigen::VectorXd centroid(n), xr(n), xe(n), xc(n);
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return val[l] < val[r]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

    const double fspread = std::abs(val[worst] - val[best]);
    double xspread_ratio = 0.0;
    for (const auto& v : vert) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double scale = std::max(std::abs(vert[best][i]), 1.0);
        xspread_ratio = std::max(xspread_ratio, std::abs(v[i] - vert[best][i]) / scale);
      }
    }
    if (std::isfinite(fspread) && fspread <= opt.rel_tol * std::max(std::abs(val[best]), 1.0) &&
        xspread_ratio <= opt.rel_tol) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= max_evals) break;

    centroid.setZero();
    for (std::size_t j : order) {
      if (j != worst) centroid += vert[j];
    }
    centroid /= static_cast<double>(n);

    xr = centroid + (centroid - vert[worst]);
    const double fr = g(xr);
    if (fr < val[best]) {
      xe = centroid + 2.0 * (xr - centroid);
      const double fe = g(xe);
      if (fe < fr) {
        vert[worst] = xe;
        val[worst] = fe;
      } else {
        vert[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      vert[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid)) : Eigen::VectorXd(centroid + 0.5 * (vert[worst] - centroid));
    const double fc = g(xc);
    if (fc < (outside ? fr : val[worst])) {
      vert[worst] = xc;
      val[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t j = 0; j < vert.size(); ++j) {
      if (j == best) continue;
      vert[j] = vert[best] + 0.5 * (vert[j] - vert[best]);
      val[j] = g(vert[j]);
    }
  }

  const auto best_it = std::min_element(val.begin(), val.end());
  res.argmax = vert[static_cast<std::size_t>(best_it - val.begin())];
  res.value = -*best_it;
  return res;
}

struct HessianResult {
  Eigen::MatrixXd hessian;
  bool finite = true;
};

/// Central-difference Hessian with per-coordinate step max(1e-4, 1e-4 |x_i|).
/// A step is halved (up to 30 times) while x +/- step leaves the support.
template <typename LogDensity>
HessianResult finite_difference_hessian(const LogDensity& f, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  HessianResult out{Eigen::MatrixXd::Zero(n, n), true};
  const double f0 = f(x);
  if (!std::isfinite(f0)) {
    out.finite = false;
    return out;
  }

  Eigen::VectorXd step(n);
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    double hi = std::max(1e-4, 1e-4 * std::abs(x[i]));
    double fp = 0.0, fm = 0.0;
    for (int halving = 0; halving <= 30; ++halving) {
      probe[i] = x[i] + hi;
      fp = f(probe);
      probe[i] = x[i] - hi;
      fm = f(probe);
      probe[i] = x[i];
      if (std::isfinite(fp) && std::isfinite(fm)) break;
      hi *= 0.5;
    }
    step[i] = hi;
    if (!std::isfinite(fp) || !std::isfinite(fm)) out.finite = false;
    out.hessian(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      double corners[4];
      int c = 0;
      for (double si : {1.0, -1.0}) {
        for (double sj : {1.0, -1.0}) {
          probe = x;
          probe[i] += si * step[i];
          probe[j] += sj * step[j];
          corners[c++] = f(probe);
        }
      }
      for (double v : corners) {
        if (!std::isfinite(v)) out.finite = false;
      }
      out.hessian(i, j) = out.hessian(j, i) =
          (corners[0] - corners[1] - corners[2] + corners[3]) / (4.0 * step[i] * step[j]);
    }
  }
  if (!out.hessian.allFinite()) out.finite = false;
  return out;
}

}  // namespace dccgarch
