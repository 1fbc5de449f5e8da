#pragma once

// Posterior summaries and plot-ready series: traces come straight from the
// chain; this header adds ACFs, kernel density estimates, batch-means ESS and
// posterior means/bands of the volatility and correlation paths.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "dccgarch/errors.hpp"
#include "dccgarch/mcmc.hpp"
#include "dccgarch/model.hpp"
#include "dccgarch/types.hpp"

namespace dccgarch {

/// Linear-interpolation quantile (R type 7) of an already sorted sample.
inline double sorted_quantile(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) throw InvalidInput("quantile of an empty sample");
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return frac == 0.0 ? sorted[lo] : sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double prob) {
  std::sort(values.begin(), values.end());
  return sorted_quantile(values, prob);
}

namespace detail {
// Accumulates deviations from the first element, so a constant series has an exact mean.
inline double shifted_mean(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v - x.front();
  return x.front() + acc / static_cast<double>(x.size());
}
}  // namespace detail

/// Effective sample size by batch means with batch length floor(sqrt(m)).
inline double batch_means_ess(const std::vector<double>& x) {
  const std::size_t m = x.size();
  if (m == 0) throw InvalidInput("ESS of an empty series");
  const double mean = detail::shifted_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = m > 1 ? ss / static_cast<double>(m - 1) : 0.0;
  const auto b = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(m))));
  const std::size_t batches = b > 0 ? m / b : 0;
  if (var == 0.0 || batches < 2) return static_cast<double>(m);

  std::vector<double> bmeans(batches, 0.0);
  for (std::size_t j = 0; j < batches; ++j) {
    for (std::size_t i = j * b; i < (j + 1) * b; ++i) bmeans[j] += x[i];
    bmeans[j] /= static_cast<double>(b);
  }
  const double grand = std::accumulate(bmeans.begin(), bmeans.end(), 0.0) / static_cast<double>(batches);
  double bss = 0.0;
  for (double v : bmeans) bss += (v - grand) * (v - grand);
  const double var_bm = static_cast<double>(b) * bss / static_cast<double>(batches - 1);
  if (!(var_bm > 0.0)) return static_cast<double>(m);
  return std::min(static_cast<double>(m) * var / var_bm, static_cast<double>(m));
}

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  double ess = 0.0;
};

struct PosteriorSummary {
  std::vector<ParameterSummary> parameters;
  std::vector<double> accept_rate;
  std::size_t n_sim = 0;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  std::size_t retained = 0;

  [[nodiscard]] const ParameterSummary& operator[](const std::string& name) const {
    for (const auto& p : parameters) {
      if (p.name == name) return p;
    }
    throw InvalidInput("no parameter named " + name);
  }
};

/// Rows burn_in, burn_in + thin, ... of the chain.
inline Eigen::MatrixXd retained_draws(const Eigen::MatrixXd& draws, std::size_t burn_in, std::size_t thin) {
  const auto n = static_cast<std::size_t>(draws.rows());
  if (thin < 1) throw InvalidInput("thin must be >= 1");
  if (burn_in >= n) throw InvalidInput("burn-in must be smaller than the chain length");
  const std::size_t m = (n - burn_in + thin - 1) / thin;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m), draws.cols());
  for (std::size_t r = 0; r < m; ++r) out.row(static_cast<Eigen::Index>(r)) = draws.row(static_cast<Eigen::Index>(burn_in + r * thin));
  return out;
}

inline PosteriorSummary summarize(const McmcChain& chain, std::size_t burn_in, std::size_t thin) {
  if (chain.n_sim() == 0) throw InvalidInput("summarize: empty chain");
  const Eigen::MatrixXd kept = retained_draws(chain.draws, burn_in, thin);
  PosteriorSummary s;
  s.accept_rate = chain.accept_rate;
  s.n_sim = chain.n_sim();
  s.burn_in = burn_in;
  s.thin = thin;
  s.retained = static_cast<std::size_t>(kept.rows());
  const auto m = static_cast<double>(kept.rows());
  for (Eigen::Index j = 0; j < kept.cols(); ++j) {
    std::vector<double> col(kept.col(j).data(), kept.col(j).data() + kept.rows());
    ParameterSummary ps;
    ps.name = static_cast<std::size_t>(j) < chain.param_names.size() ? chain.param_names[static_cast<std::size_t>(j)]
                                                                      : "x_" + std::to_string(j + 1);
    ps.mean = detail::shifted_mean(col);
    double ss = 0.0;
    for (double v : col) ss += (v - ps.mean) * (v - ps.mean);
    ps.sd = col.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    ps.ess = batch_means_ess(col);
    std::sort(col.begin(), col.end());
    ps.median = sorted_quantile(col, 0.5);
    ps.q025 = sorted_quantile(col, 0.025);
    ps.q975 = sorted_quantile(col, 0.975);
    s.parameters.push_back(std::move(ps));
  }
  return s;
}

/// Sample ACF normalized by the lag-0 autocovariance, lags 0..max_lag.
inline std::vector<double> autocorrelation(const std::vector<double>& series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (max_lag >= n) throw InvalidInput("max_lag must be smaller than the series length");
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  std::vector<double> c(n);
  for (std::size_t t = 0; t < n; ++t) c[t] = series[t] - mean;
  double c0 = 0.0;
  for (double v : c) c0 += v * v;
  if (!(c0 > 0.0)) throw NumericalDomainError("autocorrelation of a zero-variance series");
  std::vector<double> acf(max_lag + 1);
  acf[0] = 1.0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += c[t] * c[t + lag];
    acf[lag] = s / c0;
  }
  return acf;
}

struct DensityEstimate {
  std::vector<double> points;
  std::vector<double> densities;
  double bandwidth = 0.0;
};

/// Gaussian KDE, Silverman bandwidth 0.9 min(sd, IQR / 1.34) n^{-1/5}, grid over [min - 3h, max + 3h].
inline DensityEstimate density_estimate(const std::vector<double>& series, std::size_t grid) {
  const std::size_t n = series.size();
  if (n < 10) throw InvalidInput("density_estimate needs at least 10 values");
  if (grid < 2) throw InvalidInput("density grid needs at least 2 points");
  std::vector<double> sorted = series;
  std::sort(sorted.begin(), sorted.end());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw NumericalDomainError("density_estimate of a zero-variance series");
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);

  DensityEstimate out;
  out.bandwidth = h;
  const double lo = sorted.front() - 3.0 * h, hi = sorted.back() + 3.0 * h;
  const double norm = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * std::numbers::pi));
  out.points.resize(grid);
  out.densities.resize(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid - 1);
    // Only points within 8h contribute measurably.
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), x - 8.0 * h);
    const auto last = std::upper_bound(sorted.begin(), sorted.end(), x + 8.0 * h);
    double acc = 0.0;
    for (auto it = first; it != last; ++it) {
      const double z = (x - *it) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out.points[g] = x;
    out.densities[g] = acc * norm;
  }
  return out;
}

struct PosteriorPaths {
  Eigen::MatrixXd h_mean, h_lo, h_hi;           // T x k
  Eigen::MatrixXd corr_mean, corr_lo, corr_hi;  // T x k(k-1)/2
  std::size_t draws_used = 0;
};

/// Re-runs the recursions for up to max_draws equally spaced retained draws and
/// aggregates h_{ii,t} and rho_{ij,t} pointwise (mean, 2.5% and 97.5% quantiles).
inline PosteriorPaths posterior_paths(const McmcChain& chain, const ReturnsMatrix& data, Family family,
                                      std::size_t burn_in, std::size_t thin, std::size_t max_draws = 200) {
  if (max_draws < 1) throw InvalidInput("max_draws must be >= 1");
  const Eigen::MatrixXd kept = retained_draws(chain.draws, burn_in, thin);
  const auto m = static_cast<std::size_t>(kept.rows());
  if (m < 1) throw InvalidInput("posterior_paths: no retained draws");
  const std::size_t used = std::min(m, max_draws);
  std::vector<std::size_t> rows(used);
  for (std::size_t j = 0; j < used; ++j) {
    rows[j] = used == 1 ? 0 : static_cast<std::size_t>(std::llround(static_cast<double>(j) * static_cast<double>(m - 1) /
                                                                   static_cast<double>(used - 1)));
  }

  const std::size_t k = data.dim();
  std::vector<CovariancePath> paths;
  paths.reserve(used);
  for (std::size_t j = 0; j < used; ++j) {
    const ParamVector p = from_flat(kept.row(static_cast<Eigen::Index>(rows[j])).transpose(), k, family);
    try {
      paths.push_back(run_recursions(p, data, initial_state(p, data)));
    } catch (const NumericalDomainError& e) {
      throw NumericalDomainError("posterior draw " + std::to_string(burn_in + rows[j] * thin) + ": " + e.what());
    }
  }

  auto aggregate = [&](auto member, Eigen::MatrixXd& mean, Eigen::MatrixXd& lo, Eigen::MatrixXd& hi) {
    const Eigen::MatrixXd& first = paths.front().*member;
    mean = Eigen::MatrixXd::Zero(first.rows(), first.cols());
    lo.resize(first.rows(), first.cols());
    hi.resize(first.rows(), first.cols());
    std::vector<double> cell(used);
    for (Eigen::Index r = 0; r < first.rows(); ++r) {
      for (Eigen::Index c = 0; c < first.cols(); ++c) {
        double sum = 0.0;
        for (std::size_t j = 0; j < used; ++j) {
          cell[j] = (paths[j].*member)(r, c);
          sum += cell[j];
        }
        mean(r, c) = sum / static_cast<double>(used);
        std::sort(cell.begin(), cell.end());
        lo(r, c) = sorted_quantile(cell, 0.025);
        hi(r, c) = sorted_quantile(cell, 0.975);
      }
    }
  };

  PosteriorPaths out;
  out.draws_used = used;
  aggregate(&CovariancePath::h_path, out.h_mean, out.h_lo, out.h_hi);
  aggregate(&CovariancePath::corr_path, out.corr_mean, out.corr_lo, out.corr_hi);
  return out;
}

}  // namespace dccgarch
