#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dccgarch/errors.hpp"

namespace dccgarch {

/// Error distribution family. Numeric values match the `errorDist` codes of the
/// R package (1 = skew normal, 2 = skew Student-t, 3 = skew GED).
enum class Family : int { SkewNormal = 1, SkewT = 2, SkewGed = 3 };

inline bool has_tail(Family family) noexcept { return family != Family::SkewNormal; }

inline Family family_from_code(int code) {
  switch (code) {
    case 1: return Family::SkewNormal;
    case 2: return Family::SkewT;
    case 3: return Family::SkewGed;
    default: throw InvalidInput("error distribution code must be 1, 2 or 3, got " + std::to_string(code));
  }
}

inline int family_code(Family family) noexcept { return static_cast<int>(family); }

inline const char* family_name(Family family) noexcept {
  switch (family) {
    case Family::SkewNormal: return "skew-normal";
    case Family::SkewT: return "skew-t";
    case Family::SkewGed: return "skew-GED";
  }
  return "unknown";
}

/// T x k matrix of zero-mean log-returns, one column per series.
///
/// Construction enforces k >= 1, T >= 1 and finite entries. Estimation entry
/// points additionally require T >= 2 (see `require_estimable`).
class ReturnsMatrix {
 public:
  ReturnsMatrix() = default;

  explicit ReturnsMatrix(Eigen::MatrixXd values, std::vector<std::string> names = {})
      : values_(std::move(values)), names_(std::move(names)) {
    if (values_.cols() < 1) throw InvalidInput("returns matrix needs at least one series");
    if (values_.rows() < 1) throw InvalidInput("returns matrix needs at least one observation");
    if (!values_.allFinite()) throw InvalidInput("returns matrix contains non-finite entries");
    if (names_.empty()) {
      for (Eigen::Index i = 0; i < values_.cols(); ++i) names_.push_back("y_" + std::to_string(i + 1));
    }
    if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
      throw InvalidInput("series name count does not match column count");
    }
  }

  [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
  [[nodiscard]] double operator()(std::size_t t, std::size_t i) const noexcept {
    return values_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i));
  }
  [[nodiscard]] const std::vector<std::string>& series_names() const noexcept { return names_; }

  void require_estimable() const {
    if (rows() < 2) throw InvalidInput("at least 2 observations are required, got " + std::to_string(rows()));
  }

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
};

/// Full DCC-GARCH(1,1) parameter set.
struct ParamVector {
  Family family = Family::SkewT;
  std::vector<double> omega;
  std::vector<double> alpha;
  std::vector<double> beta;
  double a = 0.03;
  double b = 0.8;
  std::vector<double> gamma;
  double tail = 8.0;  // nu (skew-t) or delta (skew-GED); ignored for skew-normal

  [[nodiscard]] std::size_t dim() const noexcept { return omega.size(); }

  /// Number of free parameters: 4k + 2, plus one for the tail when present.
  [[nodiscard]] std::size_t size() const noexcept { return 4 * dim() + 2 + (has_tail(family) ? 1 : 0); }
};

inline std::size_t param_count(std::size_t k, Family family) noexcept {
  return 4 * k + 2 + (has_tail(family) ? 1 : 0);
}

/// Defaults of the package synopsis: omega 0.03, alpha 0.03, beta 0.8, a 0.03, b 0.8, gamma 1, tail 8.
inline ParamVector default_initial_values(std::size_t k, Family family) {
  ParamVector p;
  p.family = family;
  p.omega.assign(k, 0.03);
  p.alpha.assign(k, 0.03);
  p.beta.assign(k, 0.8);
  p.a = 0.03;
  p.b = 0.8;
  p.gamma.assign(k, 1.0);
  p.tail = 8.0;
  return p;
}

inline bool dimensions_consistent(const ParamVector& p) noexcept {
  const auto k = p.omega.size();
  return k >= 1 && p.alpha.size() == k && p.beta.size() == k && p.gamma.size() == k;
}

namespace detail {

inline bool check_params(const ParamVector& p, bool allow_static_correlation) noexcept {
  if (!dimensions_consistent(p)) return false;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double w = p.omega[i], al = p.alpha[i], be = p.beta[i], g = p.gamma[i];
    if (!(std::isfinite(w) && std::isfinite(al) && std::isfinite(be) && std::isfinite(g))) return false;
    if (!(w > 0.0) || al < 0.0 || be < 0.0 || !(al + be < 1.0) || !(g > 0.0)) return false;
  }
  if (!(std::isfinite(p.a) && std::isfinite(p.b))) return false;
  const bool ab_ok = allow_static_correlation ? p.a >= 0.0 && p.b >= 0.0 : p.a > 0.0 && p.b > 0.0;
  if (!ab_ok || !(p.a + p.b < 1.0)) return false;
  if (p.family == Family::SkewT && !(std::isfinite(p.tail) && p.tail > 2.0)) return false;
  if (p.family == Family::SkewGed && !(std::isfinite(p.tail) && p.tail > 0.0)) return false;
  return true;
}

}  // namespace detail

/// True iff every ParamVector invariant holds (positivity, unit-interval loadings,
/// stationarity of each margin and of the correlation recursion, tail domain).
inline bool satisfies_invariants(const ParamVector& p) noexcept { return detail::check_params(p, false); }

/// The recursions themselves are well defined on the closure a, b >= 0, where
/// a = b = 0 gives constant conditional correlation.
inline bool satisfies_recursion_domain(const ParamVector& p) noexcept { return detail::check_params(p, true); }

inline void require_valid(const ParamVector& p) {
  if (!dimensions_consistent(p)) throw InvalidInput("parameter vectors omega/alpha/beta/gamma must share one length >= 1");
  if (!satisfies_invariants(p)) throw InvalidInput("parameters violate the model constraints");
}

inline void require_recursion_domain(const ParamVector& p) {
  if (!dimensions_consistent(p)) throw InvalidInput("parameter vectors omega/alpha/beta/gamma must share one length >= 1");
  if (!satisfies_recursion_domain(p)) throw InvalidInput("parameters violate the model constraints");
}

/// Column labels in flat order: omega_1..k, alpha_1..k, beta_1..k, a, b, gamma_1..k[, tail].
inline std::vector<std::string> param_names(std::size_t k, Family family) {
  std::vector<std::string> names;
  names.reserve(param_count(k, family));
  for (const char* block : {"omega", "alpha", "beta"}) {
    for (std::size_t i = 0; i < k; ++i) names.push_back(std::string(block) + "_" + std::to_string(i + 1));
  }
  names.emplace_back("a");
  names.emplace_back("b");
  for (std::size_t i = 0; i < k; ++i) names.push_back("gamma_" + std::to_string(i + 1));
  if (has_tail(family)) names.emplace_back("tail");
  return names;
}

inline Eigen::VectorXd to_flat(const ParamVector& p) {
  if (!dimensions_consistent(p)) throw InvalidInput("inconsistent parameter dimensions");
  const auto k = p.dim();
  Eigen::VectorXd x(static_cast<Eigen::Index>(p.size()));
  Eigen::Index j = 0;
  for (std::size_t i = 0; i < k; ++i) x[j++] = p.omega[i];
  for (std::size_t i = 0; i < k; ++i) x[j++] = p.alpha[i];
  for (std::size_t i = 0; i < k; ++i) x[j++] = p.beta[i];
  x[j++] = p.a;
  x[j++] = p.b;
  for (std::size_t i = 0; i < k; ++i) x[j++] = p.gamma[i];
  if (has_tail(p.family)) x[j++] = p.tail;
  return x;
}

/// Inverse of `to_flat`. Writes into `out` so hot loops can reuse its storage.
inline void from_flat(const Eigen::Ref<const Eigen::VectorXd>& x, std::size_t k, Family family, ParamVector& out) {
  if (static_cast<std::size_t>(x.size()) != param_count(k, family)) {
    throw InvalidInput("flat parameter vector has length " + std::to_string(x.size()) + ", expected " +
                       std::to_string(param_count(k, family)));
  }
  out.family = family;
  out.omega.resize(k);
  out.alpha.resize(k);
  out.beta.resize(k);
  out.gamma.resize(k);
  Eigen::Index j = 0;
  for (std::size_t i = 0; i < k; ++i) out.omega[i] = x[j++];
  for (std::size_t i = 0; i < k; ++i) out.alpha[i] = x[j++];
  for (std::size_t i = 0; i < k; ++i) out.beta[i] = x[j++];
  out.a = x[j++];
  out.b = x[j++];
  for (std::size_t i = 0; i < k; ++i) out.gamma[i] = x[j++];
  out.tail = has_tail(family) ? x[j++] : 0.0;
}

inline ParamVector from_flat(const Eigen::Ref<const Eigen::VectorXd>& x, std::size_t k, Family family) {
  ParamVector p;
  from_flat(x, k, family, p);
  return p;
}

}  // namespace dccgarch
