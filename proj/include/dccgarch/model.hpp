#pragma once

// DCC-GARCH(1,1) state recursions, likelihood and path simulation.
//
//   h_{ii,t} = omega_i + alpha_i y_{i,t-1}^2 + beta_i h_{ii,t-1}
//   Q_t      = (1 - a - b) R_bar + a u_{t-1} u_{t-1}' + b Q_{t-1},   u_t = D_t^{-1} y_t
//   R_t      = diag(Q_t)^{-1/2} Q_t diag(Q_t)^{-1/2}
//   y_t      = D_t L_t eps_t,   L_t = lower Cholesky factor of R_t

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "dccgarch/distributions.hpp"
#include "dccgarch/errors.hpp"
#include "dccgarch/types.hpp"

namespace dccgarch {

struct RecursionState {
  Eigen::VectorXd h;      // conditional variances h_{ii,t}
  Eigen::MatrixXd Q;      // pseudo-correlation matrix Q_t
  Eigen::MatrixXd R;      // correlation matrix R_t
  Eigen::VectorXd u;      // standardized returns u_t
  Eigen::MatrixXd R_bar;  // long-run correlation target
};

struct CovariancePath {
  Eigen::MatrixXd h_path;        // T x k
  Eigen::MatrixXd corr_path;     // T x k(k-1)/2, pairs (1,2), (1,3), ..., (k-1,k)
  Eigen::VectorXd loglik_terms;  // T

  /// h_{ij,t} = rho_{ij,t} sqrt(h_{ii,t} h_{jj,t}).
  [[nodiscard]] Eigen::MatrixXd covariance(Eigen::Index t) const {
    const Eigen::Index k = h_path.cols();
    Eigen::MatrixXd H(k, k);
    Eigen::Index pair = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      H(i, i) = h_path(t, i);
      for (Eigen::Index j = i + 1; j < k; ++j, ++pair) {
        H(i, j) = H(j, i) = corr_path(t, pair) * std::sqrt(h_path(t, i) * h_path(t, j));
      }
    }
    return H;
  }
};

/// Labels for corr_path columns: "1_2", "1_3", ...
inline std::vector<std::string> correlation_pair_labels(std::size_t k) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) labels.push_back(std::to_string(i + 1) + "_" + std::to_string(j + 1));
  }
  return labels;
}

inline double garch_variance_step(double omega, double alpha, double beta, double y_prev, double h_prev) {
  if (!(std::isfinite(omega) && std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(y_prev) &&
        std::isfinite(h_prev))) {
    throw InvalidInput("garch_variance_step: non-finite input");
  }
  if (!(omega > 0.0) || alpha < 0.0 || beta < 0.0 || !(h_prev > 0.0)) {
    throw InvalidInput("garch_variance_step: requires omega > 0, alpha >= 0, beta >= 0, h_prev > 0");
  }
  return omega + alpha * y_prev * y_prev + beta * h_prev;
}

inline Eigen::MatrixXd dcc_q_step(double a, double b, const Eigen::MatrixXd& R_bar, const Eigen::VectorXd& u_prev,
                                  const Eigen::MatrixXd& Q_prev) {
  const Eigen::Index k = R_bar.rows();
  if (R_bar.cols() != k || Q_prev.rows() != k || Q_prev.cols() != k || u_prev.size() != k) {
    throw InvalidInput("dcc_q_step: dimension mismatch");
  }
  if (!(a >= 0.0 && b >= 0.0 && a + b < 1.0)) throw InvalidInput("dcc_q_step: requires a, b >= 0 and a + b < 1");
  return (1.0 - a - b) * R_bar + a * u_prev * u_prev.transpose() + b * Q_prev;
}

inline Eigen::MatrixXd correlation_from_q(const Eigen::MatrixXd& Q) {
  if (Q.rows() != Q.cols()) throw InvalidInput("correlation_from_q: matrix must be square");
  const Eigen::Index k = Q.rows();
  Eigen::VectorXd inv_sd(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(Q(i, i) > 0.0) || !std::isfinite(Q(i, i))) {
      throw NumericalDomainError("correlation_from_q: non-positive diagonal entry at " + std::to_string(i));
    }
    inv_sd[i] = 1.0 / std::sqrt(Q(i, i));
  }
  Eigen::MatrixXd R(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    R(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) R(i, j) = R(j, i) = Q(i, j) * inv_sd[i] * inv_sd[j];
  }
  return R;
}

namespace detail {

/// Runs the recursions over every t and hands (t, h_t, R_t, log-density term) to `visit`.
/// Buffers are allocated once; per-step work is O(k^3) on tiny matrices.
template <typename Visitor>
void recurse(const ParamVector& p, const ReturnsMatrix& data, const RecursionState& init, Visitor&& visit) {
  const std::size_t k = p.dim();
  const std::size_t T = data.rows();
  const auto K = static_cast<Eigen::Index>(k);
  if (data.dim() != k) throw InvalidInput("parameter dimension does not match the number of series");
  if (init.h.size() != K || init.Q.rows() != K || init.Q.cols() != K || init.R_bar.rows() != K ||
      init.R_bar.cols() != K) {
    throw InvalidInput("initial state dimension does not match the number of series");
  }

  const SkewDensity density(SkewFamily{p.family, p.gamma, p.tail});
  const double target_weight = 1.0 - p.a - p.b;

  Eigen::VectorXd h = init.h;
  Eigen::MatrixXd Q = init.Q;
  Eigen::MatrixXd R(K, K);
  Eigen::MatrixXd L(K, K);
  Eigen::VectorXd u(K);
  Eigen::VectorXd u_prev(K);
  Eigen::VectorXd eps(K);

  for (std::size_t t = 0; t < T; ++t) {
    if (t > 0) {
      for (std::size_t i = 0; i < k; ++i) {
        const double y = data(t - 1, i);
        h[static_cast<Eigen::Index>(i)] = p.omega[i] + p.alpha[i] * y * y + p.beta[i] * h[static_cast<Eigen::Index>(i)];
      }
      for (Eigen::Index i = 0; i < K; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
          Q(i, j) = target_weight * init.R_bar(i, j) + p.a * u_prev[i] * u_prev[j] + p.b * Q(i, j);
          Q(j, i) = Q(i, j);
        }
      }
    }

    double log_det = 0.0;
    for (Eigen::Index i = 0; i < K; ++i) {
      if (!(h[i] > 0.0) || !std::isfinite(h[i])) {
        throw NumericalDomainError("conditional variance left (0, inf) at t=" + std::to_string(t + 1) +
                                   ", series " + std::to_string(i + 1));
      }
      if (!(Q(i, i) > 0.0) || !std::isfinite(Q(i, i))) {
        throw NumericalDomainError("Q diagonal left (0, inf) at t=" + std::to_string(t + 1));
      }
      u[i] = data(t, static_cast<std::size_t>(i)) / std::sqrt(h[i]);
      if (!std::isfinite(u[i])) throw NumericalDomainError("non-finite standardized return at t=" + std::to_string(t + 1));
      log_det += std::log(h[i]);
    }
    for (Eigen::Index i = 0; i < K; ++i) {
      R(i, i) = 1.0;
      for (Eigen::Index j = 0; j < i; ++j) R(i, j) = R(j, i) = Q(i, j) / std::sqrt(Q(i, i) * Q(j, j));
    }

    // Cholesky of R_t and forward solve L eps = u.
    for (Eigen::Index j = 0; j < K; ++j) {
      double d = R(j, j);
      for (Eigen::Index m = 0; m < j; ++m) d -= L(j, m) * L(j, m);
      if (!(d > 0.0)) throw NumericalDomainError("correlation matrix not positive definite at t=" + std::to_string(t + 1));
      const double ljj = std::sqrt(d);
      L(j, j) = ljj;
      for (Eigen::Index i = j + 1; i < K; ++i) {
        double s = R(i, j);
        for (Eigen::Index m = 0; m < j; ++m) s -= L(i, m) * L(j, m);
        L(i, j) = s / ljj;
      }
      log_det += 2.0 * std::log(ljj);
    }
    for (Eigen::Index i = 0; i < K; ++i) {
      double s = u[i];
      for (Eigen::Index m = 0; m < i; ++m) s -= L(i, m) * eps[m];
      eps[i] = s / L(i, i);
    }

    const double term = -0.5 * log_det + density(eps);
    visit(t, h, R, term);
    u_prev = u;
  }
}

}  // namespace detail

/// Chains the variance, Q and correlation recursions from `init` (state at t = 1).
inline CovariancePath run_recursions(const ParamVector& params, const ReturnsMatrix& data, const RecursionState& init) {
  require_recursion_domain(params);
  const auto K = static_cast<Eigen::Index>(params.dim());
  const auto T = static_cast<Eigen::Index>(data.rows());
  CovariancePath path;
  path.h_path.resize(T, K);
  path.corr_path.resize(T, K * (K - 1) / 2);
  path.loglik_terms.resize(T);
  detail::recurse(params, data, init, [&](std::size_t t, const Eigen::VectorXd& h, const Eigen::MatrixXd& R, double term) {
    const auto row = static_cast<Eigen::Index>(t);
    path.h_path.row(row) = h.transpose();
    Eigen::Index pair = 0;
    for (Eigen::Index i = 0; i < K; ++i) {
      for (Eigen::Index j = i + 1; j < K; ++j) path.corr_path(row, pair++) = R(i, j);
    }
    path.loglik_terms[row] = term;
  });
  return path;
}

/// Sample variance (denominator T - 1) of each series; the variance recursion's starting point.
inline Eigen::VectorXd initial_variances(const ReturnsMatrix& data) {
  data.require_estimable();
  const Eigen::MatrixXd& y = data.values();
  const Eigen::RowVectorXd mean = y.colwise().mean();
  return ((y.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(y.rows() - 1)).transpose();
}

/// Correlation target for a given parameter set: run each univariate variance
/// recursion from `h1`, standardize, and normalize the second-moment matrix
/// sum_t u_t u_t' / T to unit diagonal.
inline Eigen::MatrixXd target_correlation(const ParamVector& params, const ReturnsMatrix& data, const Eigen::VectorXd& h1) {
  const std::size_t k = params.dim();
  const auto K = static_cast<Eigen::Index>(k);
  const std::size_t T = data.rows();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXd h = h1;
  Eigen::VectorXd u(K);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < k; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (t > 0) {
        const double y = data(t - 1, i);
        h[ii] = params.omega[i] + params.alpha[i] * y * y + params.beta[i] * h[ii];
      }
      if (!(h[ii] > 0.0) || !std::isfinite(h[ii])) {
        throw NumericalDomainError("conditional variance left (0, inf) at t=" + std::to_string(t + 1) + ", series " +
                                   std::to_string(i + 1));
      }
      u[ii] = data(t, i) / std::sqrt(h[ii]);
    }
    S.selfadjointView<Eigen::Lower>().rankUpdate(u);
  }
  S.triangularView<Eigen::StrictlyUpper>() = S.transpose();
  return correlation_from_q(S / static_cast<double>(T));
}

/// Estimation start state: h_1 = sample variances, R_bar = targeted correlation, Q_1 = R_bar.
inline RecursionState initial_state(const ParamVector& params, const ReturnsMatrix& data) {
  RecursionState s;
  s.h = initial_variances(data);
  s.R_bar = target_correlation(params, data, s.h);
  s.Q = s.R_bar;
  s.R = s.R_bar;
  s.u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.dim()));
  return s;
}

/// Full-sample log-likelihood; -inf for out-of-support parameters or numerical failure.
inline double log_likelihood(const ParamVector& params, const ReturnsMatrix& data, const Eigen::VectorXd& h1) {
  if (!satisfies_invariants(params) || params.dim() != data.dim()) return -std::numeric_limits<double>::infinity();
  double total = 0.0;
  try {
    RecursionState init;
    init.h = h1;
    init.R_bar = target_correlation(params, data, h1);
    init.Q = init.R_bar;
    detail::recurse(params, data, init, [&](std::size_t, const Eigen::VectorXd&, const Eigen::MatrixXd&, double term) {
      total += term;
    });
  } catch (const NumericalDomainError&) {
    return -std::numeric_limits<double>::infinity();
  }
  return std::isfinite(total) ? total : -std::numeric_limits<double>::infinity();
}

inline double log_likelihood(const ParamVector& params, const ReturnsMatrix& data) {
  data.require_estimable();
  return log_likelihood(params, data, initial_variances(data));
}

/// Simulates T observations. The path starts from the stationary variances
/// omega_i / (1 - alpha_i - beta_i) and Q_1 = R_bar (identity when omitted).
inline ReturnsMatrix simulate_path(const ParamVector& params, std::size_t T, std::uint64_t seed,
                                   const Eigen::MatrixXd& R_bar = Eigen::MatrixXd()) {
  require_recursion_domain(params);
  if (T == 0) throw InvalidInput("simulate_path: T must be >= 1");
  const std::size_t k = params.dim();
  const auto K = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd target = R_bar.size() == 0 ? Eigen::MatrixXd::Identity(K, K) : R_bar;
  if (target.rows() != K || target.cols() != K) throw InvalidInput("simulate_path: R_bar has wrong dimension");
  if (!target.isApprox(target.transpose()) || (target.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12 ||
      target.llt().info() != Eigen::Success) {
    throw InvalidInput("simulate_path: R_bar must be a positive definite correlation matrix");
  }

  const SkewDensity density(SkewFamily{params.family, params.gamma, params.tail});
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd y(static_cast<Eigen::Index>(T), K);
  Eigen::VectorXd h(K);
  for (std::size_t i = 0; i < k; ++i) h[static_cast<Eigen::Index>(i)] = params.omega[i] / (1.0 - params.alpha[i] - params.beta[i]);
  Eigen::MatrixXd Q = target;
  Eigen::VectorXd u_prev(K);
  Eigen::VectorXd eps(K);
  Eigen::LLT<Eigen::MatrixXd> llt(K);

  for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(T); ++t) {
    if (t > 0) {
      for (std::size_t i = 0; i < k; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        h[ii] = params.omega[i] + params.alpha[i] * y(t - 1, ii) * y(t - 1, ii) + params.beta[i] * h[ii];
      }
      Q = (1.0 - params.a - params.b) * target + params.a * u_prev * u_prev.transpose() + params.b * Q;
    }
    llt.compute(correlation_from_q(Q));
    if (llt.info() != Eigen::Success) throw NumericalDomainError("simulate_path: correlation matrix lost definiteness");
    detail::draw_skew(density, rng, eps);
    const Eigen::VectorXd sd = h.array().sqrt();
    const Eigen::VectorXd z = llt.matrixL() * eps;
    y.row(t) = (sd.array() * z.array()).matrix().transpose();
    u_prev = z;
  }
  return ReturnsMatrix(std::move(y));
}

}  // namespace dccgarch
