#pragma once

// Spherical base densities (normal, Student-t, GED), the coordinate-wise
// two-piece skewing transform, and exact samplers for both.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dccgarch/errors.hpp"
#include "dccgarch/types.hpp"

namespace dccgarch {

enum class BaseFamily { Normal, StudentT, Ged };

inline BaseFamily base_of(Family family) noexcept {
  switch (family) {
    case Family::SkewT: return BaseFamily::StudentT;
    case Family::SkewGed: return BaseFamily::Ged;
    case Family::SkewNormal: break;
  }
  return BaseFamily::Normal;
}

inline void require_tail_domain(BaseFamily base, double tail) {
  if (base == BaseFamily::StudentT && !(std::isfinite(tail) && tail > 2.0)) {
    throw InvalidInput("Student-t degrees of freedom must exceed 2, got " + std::to_string(tail));
  }
  if (base == BaseFamily::Ged && !(std::isfinite(tail) && tail > 0.0)) {
    throw InvalidInput("GED shape must be positive, got " + std::to_string(tail));
  }
}

/// Standardized spherical density in `dim` dimensions, evaluated through x'x.
///
/// normal:    (2 pi)^{-k/2} exp(-x'x / 2)
/// Student-t: unit covariance, (1 + x'x / (nu - 2))^{-(nu + k)/2}
/// GED:       C exp(-(x'x)^delta / 2); delta = 1 is the normal, covariance is not rescaled
class SymmetricDensity {
 public:
  SymmetricDensity(BaseFamily base, double tail, std::size_t dim) : base_(base), tail_(tail), dim_(dim) {
    if (dim == 0) throw InvalidInput("density dimension must be >= 1");
    require_tail_domain(base, tail);
    const double k = static_cast<double>(dim);
    switch (base) {
      case BaseFamily::Normal:
        log_norm_ = -0.5 * k * std::log(2.0 * std::numbers::pi);
        break;
      case BaseFamily::StudentT:
        log_norm_ = std::lgamma(0.5 * (tail + k)) - std::lgamma(0.5 * tail) -
                    0.5 * k * std::log(std::numbers::pi * (tail - 2.0));
        break;
      case BaseFamily::Ged: {
        const double shape = k / (2.0 * tail);
        log_norm_ = std::log(tail) + std::lgamma(0.5 * k) - 0.5 * k * std::log(std::numbers::pi) -
                    shape * std::log(2.0) - std::lgamma(shape);
        break;
      }
    }
  }

  [[nodiscard]] BaseFamily base() const noexcept { return base_; }
  [[nodiscard]] double tail() const noexcept { return tail_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] double log_normalizer() const noexcept { return log_norm_; }

  /// log f evaluated at any x with x'x == squared_norm.
  [[nodiscard]] double log_density_sq(double squared_norm) const noexcept {
    switch (base_) {
      case BaseFamily::Normal:
        return log_norm_ - 0.5 * squared_norm;
      case BaseFamily::StudentT:
        return log_norm_ - 0.5 * (tail_ + static_cast<double>(dim_)) * std::log1p(squared_norm / (tail_ - 2.0));
      case BaseFamily::Ged:
        return log_norm_ - 0.5 * std::pow(squared_norm, tail_);
    }
    return log_norm_;
  }

  [[nodiscard]] double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (static_cast<std::size_t>(x.size()) != dim_) throw InvalidInput("density argument has wrong dimension");
    return log_density_sq(x.squaredNorm());
  }

 private:
  BaseFamily base_;
  double tail_;
  std::size_t dim_;
  double log_norm_ = 0.0;
};

inline double symmetric_log_density(BaseFamily base, double tail, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return SymmetricDensity(base, tail, static_cast<std::size_t>(x.size())).log_density(x);
}

/// Skewed family: per-margin skewness gamma_i > 0 applied to a spherical base.
struct SkewFamily {
  Family family = Family::SkewNormal;
  std::vector<double> gamma;
  double tail = 0.0;

  [[nodiscard]] std::size_t dim() const noexcept { return gamma.size(); }
};

inline void require_valid(const SkewFamily& fam) {
  if (fam.gamma.empty()) throw InvalidInput("skew family needs at least one margin");
  for (double g : fam.gamma) {
    if (!(std::isfinite(g) && g > 0.0)) throw InvalidInput("skewness parameters must be positive");
  }
  require_tail_domain(base_of(fam.family), fam.tail);
}

/// s(x | gamma) = 2^k prod(gamma_i / (1 + gamma_i^2)) f(x*), with
/// x*_i = x_i / gamma_i for x_i >= 0 and x*_i = x_i * gamma_i otherwise.
class SkewDensity {
 public:
  explicit SkewDensity(SkewFamily fam)
      : fam_((require_valid(fam), std::move(fam))), base_(base_of(fam_.family), fam_.tail, fam_.dim()) {
    inv_gamma_.reserve(fam_.dim());
    for (double g : fam_.gamma) {
      log_prefactor_ += std::log(2.0) + std::log(g / (1.0 + g * g));
      inv_gamma_.push_back(1.0 / g);
    }
  }

  [[nodiscard]] const SkewFamily& family() const noexcept { return fam_; }
  [[nodiscard]] const SymmetricDensity& base() const noexcept { return base_; }
  [[nodiscard]] double log_prefactor() const noexcept { return log_prefactor_; }

  /// Works on any contiguous sequence of dim() doubles.
  template <typename Vec>
  [[nodiscard]] double operator()(const Vec& x) const noexcept {
    double sq = 0.0;
    for (std::size_t i = 0; i < fam_.dim(); ++i) {
      const double xi = x[static_cast<Eigen::Index>(i)];
      const double xs = xi >= 0.0 ? xi * inv_gamma_[i] : xi * fam_.gamma[i];
      sq += xs * xs;
    }
    return log_prefactor_ + base_.log_density_sq(sq);
  }

  [[nodiscard]] double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (static_cast<std::size_t>(x.size()) != fam_.dim()) throw InvalidInput("density argument has wrong dimension");
    return (*this)(x);
  }

 private:
  SkewFamily fam_;
  SymmetricDensity base_;
  std::vector<double> inv_gamma_;
  double log_prefactor_ = 0.0;
};

inline double skew_log_density(const SkewFamily& fam, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return SkewDensity(fam).log_density(x);
}

namespace detail {

template <typename Rng>
void draw_base(const SymmetricDensity& base, Rng& rng, Eigen::Ref<Eigen::VectorXd> out) {
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal(rng);
  switch (base.base()) {
    case BaseFamily::Normal:
      break;
    case BaseFamily::StudentT: {
      const double nu = base.tail();
      std::chi_squared_distribution<double> chisq(nu);
      out *= std::sqrt((nu - 2.0) / chisq(rng));
      break;
    }
    case BaseFamily::Ged: {
      // Radius density ~ r^{k-1} exp(-r^{2 delta} / 2): r^{2 delta} ~ Gamma(k / (2 delta), scale 2).
      const double delta = base.tail();
      const double k = static_cast<double>(out.size());
      std::gamma_distribution<double> gamma(k / (2.0 * delta), 2.0);
      double norm = out.norm();
      while (norm == 0.0) {
        for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal(rng);
        norm = out.norm();
      }
      const double radius = std::pow(gamma(rng), 1.0 / (2.0 * delta));
      out *= radius / norm;
      break;
    }
  }
}

template <typename Rng>
void draw_skew(const SkewDensity& density, Rng& rng, Eigen::Ref<Eigen::VectorXd> out) {
  draw_base(density.base(), rng, out);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto& gamma = density.family().gamma;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double g = gamma[static_cast<std::size_t>(i)];
    const double w = std::abs(out[i]);
    const bool positive = unif(rng) < g * g / (1.0 + g * g);
    out[i] = positive ? g * w : -w / g;
  }
}

}  // namespace detail

/// n x dim draws from the spherical base family.
inline Eigen::MatrixXd base_sample(BaseFamily base, double tail, std::size_t dim, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("sample size must be >= 1");
  const SymmetricDensity density(base, tail, dim);
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  Eigen::VectorXd z(static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    detail::draw_base(density, rng, z);
    out.row(r) = z.transpose();
  }
  return out;
}

/// n x k draws from the skewed family. Exact: the spherical base is invariant to
/// coordinate sign flips, so |z_i| is reassigned a side with Pr(+) = gamma^2 / (1 + gamma^2).
inline Eigen::MatrixXd skew_sample(const SkewFamily& fam, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("sample size must be >= 1");
  const SkewDensity density(fam);
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(fam.dim()));
  Eigen::VectorXd z(static_cast<Eigen::Index>(fam.dim()));
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    detail::draw_skew(density, rng, z);
    out.row(r) = z.transpose();
  }
  return out;
}

}  // namespace dccgarch
