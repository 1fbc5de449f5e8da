#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dccgarch/errors.hpp"
#include "dccgarch/model.hpp"
#include "dccgarch/types.hpp"

namespace dccgarch {

/// Normal(location, scale) restricted to the open interval (lower, upper).
struct TruncatedNormal {
  double location = 0.0;
  double scale = 10.0;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool in_support(double x) const noexcept { return x > lower && x < upper; }

  /// Quadratic kernel; the truncation normalizer is a constant and is dropped.
  [[nodiscard]] double log_kernel(double x) const noexcept {
    const double z = (x - location) / scale;
    return -0.5 * z * z;
  }
};

struct PriorSpec {
  std::vector<TruncatedNormal> omega;
  std::vector<TruncatedNormal> alpha;
  std::vector<TruncatedNormal> beta;
  TruncatedNormal a;
  TruncatedNormal b;
  std::vector<TruncatedNormal> gamma;
  std::optional<TruncatedNormal> tail;  // nu on (2, inf) or delta on (0, inf); absent for skew-normal

  [[nodiscard]] std::size_t dim() const noexcept { return omega.size(); }
};

inline void require_valid(const PriorSpec& priors) {
  const auto k = priors.omega.size();
  if (k == 0 || priors.alpha.size() != k || priors.beta.size() != k || priors.gamma.size() != k) {
    throw InvalidInput("prior blocks must all have one entry per series");
  }
  auto check = [](const TruncatedNormal& tn, const char* what) {
    if (!(std::isfinite(tn.location) && std::isfinite(tn.scale) && tn.scale > 0.0)) {
      throw InvalidInput(std::string("prior for ") + what + " needs a finite location and a positive scale");
    }
  };
  for (const auto* block : {&priors.omega, &priors.alpha, &priors.beta, &priors.gamma}) {
    for (const auto& tn : *block) check(tn, "a per-series parameter");
  }
  check(priors.a, "a");
  check(priors.b, "b");
  if (priors.tail) check(*priors.tail, "tail");
}

/// Package control-list defaults: every location 0 except the tail (8);
/// scales 10 except gamma (1.25). Supports follow the parameter domains.
inline PriorSpec default_priors(std::size_t k, Family family) {
  if (k == 0) throw InvalidInput("default_priors: k must be >= 1");
  constexpr double inf = std::numeric_limits<double>::infinity();
  PriorSpec s;
  s.omega.assign(k, TruncatedNormal{0.0, 10.0, 0.0, inf});
  s.alpha.assign(k, TruncatedNormal{0.0, 10.0, 0.0, 1.0});
  s.beta.assign(k, TruncatedNormal{0.0, 10.0, 0.0, 1.0});
  s.a = TruncatedNormal{0.0, 10.0, 0.0, 1.0};
  s.b = TruncatedNormal{0.0, 10.0, 0.0, 1.0};
  s.gamma.assign(k, TruncatedNormal{0.0, 1.25, 0.0, inf});
  if (family == Family::SkewT) s.tail = TruncatedNormal{8.0, 10.0, 2.0, inf};
  if (family == Family::SkewGed) s.tail = TruncatedNormal{8.0, 10.0, 0.0, inf};
  return s;
}

/// Sum of truncated-normal kernels; -inf outside the support, which includes
/// alpha_i + beta_i < 1 and a + b < 1.
inline double log_prior(const ParamVector& p, const PriorSpec& priors) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (!dimensions_consistent(p) || p.dim() != priors.dim()) return neg_inf;
  if (has_tail(p.family) != priors.tail.has_value()) return neg_inf;
  double lp = 0.0;
  auto add = [&lp](const TruncatedNormal& tn, double x) {
    if (!tn.in_support(x)) return false;
    lp += tn.log_kernel(x);
    return true;
  };
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (!add(priors.omega[i], p.omega[i]) || !add(priors.alpha[i], p.alpha[i]) || !add(priors.beta[i], p.beta[i]) ||
        !add(priors.gamma[i], p.gamma[i])) {
      return neg_inf;
    }
    if (!(p.alpha[i] + p.beta[i] < 1.0)) return neg_inf;
  }
  if (!add(priors.a, p.a) || !add(priors.b, p.b) || !(p.a + p.b < 1.0)) return neg_inf;
  if (priors.tail && !add(*priors.tail, p.tail)) return neg_inf;
  // Supports are user-overridable; the model domain still applies.
  if (!satisfies_invariants(p)) return neg_inf;
  return lp;
}

/// log prior + log likelihood; the likelihood is skipped when the prior is -inf.
inline double log_posterior(const ParamVector& p, const ReturnsMatrix& data, const PriorSpec& priors,
                            const Eigen::VectorXd& h1) {
  const double lp = log_prior(p, priors);
  if (!std::isfinite(lp)) return -std::numeric_limits<double>::infinity();
  return lp + log_likelihood(p, data, h1);
}

inline double log_posterior(const ParamVector& p, const ReturnsMatrix& data, const PriorSpec& priors) {
  data.require_estimable();
  return log_posterior(p, data, priors, initial_variances(data));
}

/// Log-posterior as a function of the flat parameter vector, ready for the samplers.
class DccPosterior {
 public:
  DccPosterior(ReturnsMatrix data, PriorSpec priors, Family family)
      : data_(std::move(data)), priors_(std::move(priors)), family_(family) {
    data_.require_estimable();
    require_valid(priors_);
    if (priors_.dim() != data_.dim()) throw InvalidInput("prior dimension does not match the number of series");
    if (has_tail(family_) != priors_.tail.has_value()) {
      throw InvalidInput("prior tail entry must be present exactly when the family has a tail parameter");
    }
    h1_ = initial_variances(data_);
  }

  [[nodiscard]] double operator()(const Eigen::VectorXd& x) const {
    ParamVector p;
    from_flat(x, data_.dim(), family_, p);
    return log_posterior(p, data_, priors_, h1_);
  }

  [[nodiscard]] std::size_t dim() const noexcept { return param_count(data_.dim(), family_); }
  [[nodiscard]] const ReturnsMatrix& data() const noexcept { return data_; }
  [[nodiscard]] const PriorSpec& priors() const noexcept { return priors_; }
  [[nodiscard]] Family family() const noexcept { return family_; }

 private:
  ReturnsMatrix data_;
  PriorSpec priors_;
  Family family_;
  Eigen::VectorXd h1_;
};

}  // namespace dccgarch
