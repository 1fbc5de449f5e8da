#pragma once

// Random-walk Metropolis samplers and the mode -> Hessian -> (pilot) -> block
// pipeline. Everything is templated on a log-density callable
// `double(const Eigen::VectorXd&)` returning -inf outside its support.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dccgarch/errors.hpp"
#include "dccgarch/optimize.hpp"
#include "dccgarch/prior.hpp"
#include "dccgarch/types.hpp"

namespace dccgarch {

/// Matches the package's simAlg codes.
enum class SamplerMode : int { Block = 1, PerParameter = 2, Auto = 3 };

using ProgressFn = std::function<void(const std::string& phase, std::size_t iteration, std::size_t total)>;

struct SamplerConfig {
  std::size_t n_sim = 10000;
  SamplerMode mode = SamplerMode::Auto;
  std::optional<Eigen::MatrixXd> proposal_chol;  // cholCov
  std::optional<Eigen::VectorXd> proposal_sds;   // sdSim
  std::size_t pilot_length = 2000;
  std::size_t adapt_interval = 100;
  double target_accept_low = 0.20;
  double target_accept_high = 0.50;
  std::optional<double> scale_factor;  // block proposal scale; 2.38^2 / p when unset
  std::uint64_t seed = 1;
  SimplexOptions simplex;
  ProgressFn progress;
  std::size_t progress_every = 100;

  [[nodiscard]] double block_scale(std::size_t p) const {
    return scale_factor.value_or(2.38 * 2.38 / static_cast<double>(p));
  }
};

inline void require_valid(const SamplerConfig& c) {
  if (c.n_sim < 1) throw InvalidInput("n_sim must be >= 1");
  if (!(0.0 < c.target_accept_low && c.target_accept_low < c.target_accept_high && c.target_accept_high < 1.0)) {
    throw InvalidInput("acceptance targets must satisfy 0 < low < high < 1");
  }
  if (c.adapt_interval < 1) throw InvalidInput("adapt_interval must be >= 1");
  if (c.pilot_length < 2) throw InvalidInput("pilot_length must be >= 2");
  if (c.scale_factor && !(*c.scale_factor > 0.0)) throw InvalidInput("scale_factor must be positive");
}

struct PhaseRecord {
  std::string phase;  // "mode", "pilot", "block", "per-parameter"
  std::size_t iterations = 0;
  std::vector<double> acceptance;
  std::string note;
};

struct McmcChain {
  Eigen::MatrixXd draws;  // n_sim x p
  std::vector<std::string> param_names;
  std::vector<double> accept_rate;    // one entry (block) or p entries (per-parameter)
  std::vector<std::size_t> accepted;  // counts behind accept_rate
  std::vector<PhaseRecord> phase_log;
  double elapsed_seconds = 0.0;

  [[nodiscard]] std::size_t n_sim() const noexcept { return static_cast<std::size_t>(draws.rows()); }
  [[nodiscard]] std::size_t n_params() const noexcept { return static_cast<std::size_t>(draws.cols()); }
};

inline std::vector<std::string> default_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < p; ++i) names.push_back("x_" + std::to_string(i + 1));
  return names;
}

// ---------------------------------------------------------------------------
// Mode finding

struct ModeResult {
  Eigen::VectorXd mode;
  double log_density = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd hessian;
  bool converged = false;
  std::size_t evaluations = 0;
};

template <typename LogDensity>
ModeResult find_mode(const LogDensity& target, const Eigen::VectorXd& init, const SimplexOptions& opt = {}) {
  if (!std::isfinite(target(init))) throw InvalidInput("find_mode: initial value lies outside the support");
  const SimplexResult nm = maximize_simplex(target, init, opt);
  ModeResult out;
  out.mode = nm.argmax;
  out.log_density = nm.value;
  out.evaluations = nm.evaluations;
  const HessianResult hr = finite_difference_hessian(target, nm.argmax);
  out.hessian = hr.hessian;
  out.converged = nm.converged && hr.finite;
  return out;
}

struct ParamModeResult {
  ParamVector mode;
  Eigen::MatrixXd hessian;
  bool converged = false;
};

inline ParamModeResult find_mode(const ReturnsMatrix& data, const PriorSpec& priors, const ParamVector& init,
                                 const SimplexOptions& opt = {}) {
  if (!dimensions_consistent(init) || init.dim() != data.dim()) {
    throw InvalidInput("find_mode: initial values do not match the number of series");
  }
  const DccPosterior target(data, priors, init.family);
  const ModeResult r = find_mode(target, to_flat(init), opt);
  return {from_flat(r.mode, data.dim(), init.family), r.hessian, r.converged};
}

/// Cholesky factor of scale * (-H)^{-1}, or nothing when -H is not positive definite.
inline std::optional<Eigen::MatrixXd> block_proposal_from_hessian(const Eigen::MatrixXd& hessian,
                                                                  std::optional<double> scale = std::nullopt) {
  if (hessian.rows() != hessian.cols() || hessian.rows() == 0 || !hessian.allFinite()) return std::nullopt;
  const auto p = static_cast<double>(hessian.rows());
  const Eigen::MatrixXd neg = -0.5 * (hessian + hessian.transpose());
  const Eigen::LLT<Eigen::MatrixXd> llt(neg);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXd cov =
      scale.value_or(2.38 * 2.38 / p) * llt.solve(Eigen::MatrixXd::Identity(hessian.rows(), hessian.cols()));
  const Eigen::LLT<Eigen::MatrixXd> cov_llt(0.5 * (cov + cov.transpose()));
  if (cov_llt.info() != Eigen::Success) return std::nullopt;
  Eigen::MatrixXd L = cov_llt.matrixL();
  if (!L.allFinite() || (L.diagonal().array() <= 0.0).any()) return std::nullopt;
  return L;
}

inline bool is_lower_triangular(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 1; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < j && i < m.rows(); ++i) {
      if (m(i, j) != 0.0) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Samplers

namespace detail {

inline void report(const SamplerConfig& c, const char* phase, std::size_t it, std::size_t total) {
  if (c.progress && c.progress_every > 0 && it % c.progress_every == 0) c.progress(phase, it, total);
}

template <typename LogDensity, typename Rng>
McmcChain block_sampler(const LogDensity& target, const Eigen::VectorXd& init, const Eigen::MatrixXd& chol,
                        const SamplerConfig& config, Rng& rng) {
  const Eigen::Index p = init.size();
  if (chol.rows() != p || chol.cols() != p) throw InvalidInput("proposal Cholesky factor has wrong dimension");
  if (!chol.allFinite() || !is_lower_triangular(chol)) throw InvalidInput("proposal factor must be finite and lower-triangular");
  double current = target(init);
  if (!std::isfinite(current)) throw InvalidInput("block sampler: initial value lies outside the support");

  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  McmcChain chain;
  chain.draws.resize(static_cast<Eigen::Index>(config.n_sim), p);
  Eigen::VectorXd x = init, z(p), proposal(p);
  std::size_t accepted = 0;
  for (std::size_t it = 0; it < config.n_sim; ++it) {
    for (Eigen::Index i = 0; i < p; ++i) z[i] = normal(rng);
    proposal.noalias() = x + chol.template triangularView<Eigen::Lower>() * z;
    const double cand = target(proposal);
    if (std::isfinite(cand) && std::log(unif(rng)) < cand - current) {
      x = proposal;
      current = cand;
      ++accepted;
    }
    chain.draws.row(static_cast<Eigen::Index>(it)) = x.transpose();
    report(config, "mcmc", it + 1, config.n_sim);
  }
  chain.accepted = {accepted};
  chain.accept_rate = {static_cast<double>(accepted) / static_cast<double>(config.n_sim)};
  chain.phase_log.push_back({"block", config.n_sim, chain.accept_rate, "one-block random-walk Metropolis"});
  return chain;
}

/// One sweep of single-coordinate random-walk updates. Returns per-coordinate acceptance flags via `acc`.
template <typename LogDensity, typename Rng>
void coordinate_sweep(const LogDensity& target, Eigen::VectorXd& x, double& current, const Eigen::VectorXd& sds,
                      Rng& rng, std::vector<std::size_t>& acc) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double old = x[i];
    x[i] = old + sds[i] * normal(rng);
    const double cand = target(x);
    if (std::isfinite(cand) && std::log(unif(rng)) < cand - current) {
      current = cand;
      ++acc[static_cast<std::size_t>(i)];
    } else {
      x[i] = old;
    }
  }
}

inline Eigen::VectorXd initial_sds(const Eigen::VectorXd& init) {
  Eigen::VectorXd sds(init.size());
  for (Eigen::Index i = 0; i < init.size(); ++i) sds[i] = init[i] != 0.0 ? 0.1 * std::abs(init[i]) : 0.1;
  return sds;
}

template <typename LogDensity, typename Rng>
McmcChain per_parameter_sampler(const LogDensity& target, const Eigen::VectorXd& init, const Eigen::VectorXd& sds,
                                const SamplerConfig& config, Rng& rng) {
  const Eigen::Index p = init.size();
  if (sds.size() != p || !sds.allFinite() || (sds.array() <= 0.0).any()) {
    throw InvalidInput("per-parameter proposal scales must be p positive values");
  }
  double current = target(init);
  if (!std::isfinite(current)) throw InvalidInput("per-parameter sampler: initial value lies outside the support");
  McmcChain chain;
  chain.draws.resize(static_cast<Eigen::Index>(config.n_sim), p);
  std::vector<std::size_t> acc(static_cast<std::size_t>(p), 0);
  Eigen::VectorXd x = init;
  for (std::size_t it = 0; it < config.n_sim; ++it) {
    coordinate_sweep(target, x, current, sds, rng, acc);
    chain.draws.row(static_cast<Eigen::Index>(it)) = x.transpose();
    report(config, "mcmc", it + 1, config.n_sim);
  }
  chain.accepted = acc;
  for (std::size_t a : acc) chain.accept_rate.push_back(static_cast<double>(a) / static_cast<double>(config.n_sim));
  chain.phase_log.push_back({"per-parameter", config.n_sim, chain.accept_rate, "single-parameter random-walk Metropolis"});
  return chain;
}

}  // namespace detail

struct PilotResult {
  McmcChain chain;                     // pilot_length x p
  Eigen::MatrixXd proposal_chol;       // block proposal derived from the pilot draws
  Eigen::VectorXd final_sds;           // tuned univariate proposal scales
  std::vector<double> window_accept;   // per-parameter acceptance at the final scale
  std::vector<std::size_t> scale_changes;
};

namespace detail {

template <typename LogDensity, typename Rng>
PilotResult pilot(const LogDensity& target, const Eigen::VectorXd& init, const SamplerConfig& config, Rng& rng) {
  const Eigen::Index p = init.size();
  const auto P = static_cast<std::size_t>(p);
  double current = target(init);
  if (!std::isfinite(current)) throw InvalidInput("run_pilot: log-posterior at the initial value is not finite");

  Eigen::VectorXd sds = config.proposal_sds ? *config.proposal_sds : initial_sds(init);
  if (sds.size() != p || (sds.array() <= 0.0).any()) throw InvalidInput("run_pilot: proposal scales must be p positive values");

  PilotResult out;
  out.chain.draws.resize(static_cast<Eigen::Index>(config.pilot_length), p);
  out.scale_changes.assign(P, 0);
  std::vector<std::size_t> total(P, 0), window(P, 0), segment(P, 0), segment_len(P, 0);
  Eigen::VectorXd x = init;

  for (std::size_t it = 1; it <= config.pilot_length; ++it) {
    std::vector<std::size_t> step(P, 0);
    coordinate_sweep(target, x, current, sds, rng, step);
    for (std::size_t i = 0; i < P; ++i) {
      total[i] += step[i];
      window[i] += step[i];
      segment[i] += step[i];
      ++segment_len[i];
    }
    out.chain.draws.row(static_cast<Eigen::Index>(it - 1)) = x.transpose();
    report(config, "pilot", it, config.pilot_length);

    if (it % config.adapt_interval == 0 && it < config.pilot_length) {
      for (std::size_t i = 0; i < P; ++i) {
        const double rate = static_cast<double>(window[i]) / static_cast<double>(config.adapt_interval);
        const auto ii = static_cast<Eigen::Index>(i);
        if (rate > config.target_accept_high || rate < config.target_accept_low) {
          sds[ii] *= rate > config.target_accept_high ? 2.0 : 0.5;
          segment[i] = 0;
          segment_len[i] = 0;
          ++out.scale_changes[i];
        }
        window[i] = 0;
      }
    }
  }

  out.final_sds = sds;
  out.chain.accepted = total;
  for (std::size_t i = 0; i < P; ++i) {
    out.chain.accept_rate.push_back(static_cast<double>(total[i]) / static_cast<double>(config.pilot_length));
    out.window_accept.push_back(static_cast<double>(segment[i]) / static_cast<double>(segment_len[i]));
  }
  out.chain.phase_log.push_back({"pilot", config.pilot_length, out.window_accept,
                                 "per-parameter random-walk Metropolis; acceptance at the final proposal scale"});

  // Proposal covariance from the second half of the pilot (the first half absorbs transients).
  const Eigen::Index n = out.chain.draws.rows();
  const Eigen::MatrixXd tailpart = out.chain.draws.bottomRows(n - n / 2);
  const Eigen::MatrixXd centered = tailpart.rowwise() - tailpart.colwise().mean();
  const Eigen::MatrixXd S = centered.transpose() * centered / static_cast<double>(std::max<Eigen::Index>(tailpart.rows() - 1, 1));
  const double scale = config.block_scale(P);
  Eigen::LLT<Eigen::MatrixXd> llt(scale * S);
  if (llt.info() != Eigen::Success) {
    const double ridge = 1e-8 * S.trace() / static_cast<double>(p);
    llt.compute(scale * (S + ridge * Eigen::MatrixXd::Identity(p, p)));
  }
  if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
    out.proposal_chol = llt.matrixL();
  } else {
    // Degenerate pilot covariance (e.g. a coordinate never moved): fall back to the tuned scales.
    out.proposal_chol = (std::sqrt(scale) * sds).asDiagonal();
    out.chain.phase_log.back().note += "; sample covariance singular, diagonal proposal used";
  }
  return out;
}

}  // namespace detail

template <typename LogDensity>
PilotResult run_pilot(const LogDensity& target, const Eigen::VectorXd& init, const SamplerConfig& config) {
  require_valid(config);
  std::mt19937_64 rng(config.seed);
  PilotResult r = detail::pilot(target, init, config, rng);
  r.chain.param_names = default_names(static_cast<std::size_t>(init.size()));
  return r;
}

template <typename LogDensity>
McmcChain run_block_sampler(const LogDensity& target, const Eigen::VectorXd& init, const Eigen::MatrixXd& proposal_chol,
                            const SamplerConfig& config) {
  require_valid(config);
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(config.seed);
  McmcChain c = detail::block_sampler(target, init, proposal_chol, config, rng);
  c.param_names = default_names(static_cast<std::size_t>(init.size()));
  c.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

/// Runs the configured sampler. Under Auto: posterior mode and Hessian give the
/// block proposal; if the mode search fails or -H is not positive definite, a
/// tuned per-parameter pilot supplies the proposal instead.
template <typename LogDensity>
McmcChain sample(const LogDensity& target, const Eigen::VectorXd& init, const SamplerConfig& config,
                 std::vector<std::string> names = {}) {
  require_valid(config);
  const auto p = static_cast<std::size_t>(init.size());
  if (names.empty()) names = default_names(p);
  if (names.size() != p) throw InvalidInput("parameter name count does not match the parameter vector");
  if (!std::isfinite(target(init))) throw InvalidInput("initial values lie outside the posterior support");

  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(config.seed);
  std::vector<PhaseRecord> log;
  McmcChain chain;

  switch (config.mode) {
    case SamplerMode::Block: {
      if (!config.proposal_chol) throw InvalidInput("block sampling requires a proposal Cholesky factor (cholCov)");
      const auto& L = *config.proposal_chol;
      if (L.rows() != init.size() || L.cols() != init.size() || !is_lower_triangular(L) ||
          (L.diagonal().array() <= 0.0).any()) {
        throw InvalidInput("cholCov must be a p x p lower-triangular matrix with positive diagonal");
      }
      chain = detail::block_sampler(target, init, L, config, rng);
      break;
    }
    case SamplerMode::PerParameter: {
      if (!config.proposal_sds) throw InvalidInput("per-parameter sampling requires proposal standard deviations (sdSim)");
      chain = detail::per_parameter_sampler(target, init, *config.proposal_sds, config, rng);
      break;
    }
    case SamplerMode::Auto: {
      const ModeResult mode = find_mode(target, init, config.simplex);
      std::optional<Eigen::MatrixXd> L;
      if (mode.converged) L = block_proposal_from_hessian(mode.hessian, config.scale_factor);
      log.push_back({"mode", mode.evaluations, {},
                     std::string(mode.converged ? "simplex converged" : "simplex did not converge") +
                         (L ? "; Hessian proposal accepted" : "; falling back to pilot tuning")});
      Eigen::VectorXd start = mode.mode;
      if (!L) {
        PilotResult pr = detail::pilot(target, init, config, rng);
        log.insert(log.end(), pr.chain.phase_log.begin(), pr.chain.phase_log.end());
        L = pr.proposal_chol;
        start = pr.chain.draws.bottomRows(1).transpose();
      }
      chain = detail::block_sampler(target, start, *L, config, rng);
      break;
    }
  }

  log.insert(log.end(), chain.phase_log.begin(), chain.phase_log.end());
  chain.phase_log = std::move(log);
  chain.param_names = std::move(names);
  chain.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return chain;
}

/// DCC-GARCH posterior sampling with the package pipeline.
inline McmcChain fit(const ReturnsMatrix& data, const PriorSpec& priors, const ParamVector& init,
                     const SamplerConfig& config) {
  data.require_estimable();
  require_valid(config);
  if (!dimensions_consistent(init) || init.dim() != data.dim()) {
    throw InvalidInput("initial values must have one entry per series for omega, alpha, beta and gamma");
  }
  const DccPosterior target(data, priors, init.family);
  return sample(target, to_flat(init), config, param_names(data.dim(), init.family));
}

}  // namespace dccgarch
