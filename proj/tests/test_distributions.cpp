#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dccgarch/distributions.hpp"
#include "support/numerics.hpp"

using namespace dccgarch;
namespace ts = testsupport;

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

double density1(const SkewFamily& fam, double x) { return std::exp(skew_log_density(fam, vec({x}))); }

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  return {m.col(c).data(), m.col(c).data() + m.rows()};
}

}  // namespace

TEST(SymmetricDensity, StandardNormalAtZero) {
  EXPECT_NEAR(symmetric_log_density(BaseFamily::Normal, 0.0, vec({0.0})), -kLogSqrt2Pi, 1e-15);
}

TEST(SymmetricDensity, GedWithUnitShapeIsNormal) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (int k = 1; k <= 4; ++k) {
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::VectorXd x(k);
      for (int i = 0; i < k; ++i) x[i] = nd(rng);
      EXPECT_NEAR(symmetric_log_density(BaseFamily::Ged, 1.0, x), symmetric_log_density(BaseFamily::Normal, 0.0, x),
                  1e-12);
    }
  }
  // Normalizer at x = 0 is the k-dimensional standard normal constant.
  EXPECT_NEAR(symmetric_log_density(BaseFamily::Ged, 1.0, Eigen::VectorXd::Zero(3)), -3.0 * kLogSqrt2Pi, 1e-13);
}

TEST(SymmetricDensity, StudentTUnitVarianceValue) {
  // scipy.stats.t.logpdf(1, df=5, scale=sqrt(3/5)), see tests/oracles/freeze_values.py
  EXPECT_NEAR(symmetric_log_density(BaseFamily::StudentT, 5.0, vec({1.0})), -1.5762529945270716, 1e-13);
  const double area = ts::integrate_line(
      [](double x) { return std::exp(symmetric_log_density(BaseFamily::StudentT, 5.0, vec({x}))); });
  EXPECT_NEAR(area, 1.0, 1e-10);
  const double var = ts::integrate_line(
      [](double x) { return x * x * std::exp(symmetric_log_density(BaseFamily::StudentT, 5.0, vec({x}))); });
  EXPECT_NEAR(var, 1.0, 1e-8);
}

TEST(SymmetricDensity, TailDomainIsChecked) {
  EXPECT_THROW(symmetric_log_density(BaseFamily::StudentT, 2.0, vec({0.0})), InvalidInput);
  EXPECT_THROW(symmetric_log_density(BaseFamily::StudentT, 1.5, vec({0.0})), InvalidInput);
  EXPECT_THROW(symmetric_log_density(BaseFamily::Ged, 0.0, vec({0.0})), InvalidInput);
  EXPECT_THROW(symmetric_log_density(BaseFamily::Ged, -1.0, vec({0.0})), InvalidInput);
  EXPECT_NO_THROW(symmetric_log_density(BaseFamily::Normal, -3.0, vec({0.0})));
}

TEST(SymmetricDensity, ExtremeTailsStayFinite) {
  EXPECT_TRUE(std::isfinite(symmetric_log_density(BaseFamily::StudentT, 1e6, vec({3.0, -1.0}))));
  EXPECT_TRUE(std::isfinite(symmetric_log_density(BaseFamily::StudentT, 2.0001, vec({1e5}))));
  EXPECT_TRUE(std::isfinite(symmetric_log_density(BaseFamily::Ged, 0.05, vec({10.0, 2.0}))));
  EXPECT_TRUE(std::isfinite(symmetric_log_density(BaseFamily::Ged, 50.0, vec({0.5}))));
}

TEST(SkewDensity, UnitGammaRecoversBaseExactly) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd(0.0, 1.5);
  for (auto [family, tail] : {std::pair{Family::SkewNormal, 0.0}, {Family::SkewT, 6.0}, {Family::SkewGed, 0.8}}) {
    for (int rep = 0; rep < 50; ++rep) {
      const Eigen::VectorXd x = vec({nd(rng), nd(rng)});
      const SkewFamily fam{family, {1.0, 1.0}, tail};
      EXPECT_EQ(skew_log_density(fam, x), symmetric_log_density(base_of(family), tail, x));
    }
  }
}

TEST(SkewDensity, PrefactorAtZero) {
  const SkewFamily fam{Family::SkewNormal, {2.0}, 0.0};
  EXPECT_NEAR(skew_log_density(fam, vec({0.0})), std::log(0.8 * 0.3989422804014327), 1e-14);
}

TEST(SkewDensity, ContinuousAtZero) {
  for (auto [family, tail] : {std::pair{Family::SkewNormal, 0.0}, {Family::SkewT, 4.0}, {Family::SkewGed, 2.0}}) {
    const SkewFamily fam{family, {0.6, 1.7}, tail};
    const double at0 = skew_log_density(fam, vec({0.0, 0.3}));
    EXPECT_NEAR(skew_log_density(fam, vec({1e-12, 0.3})), at0, 1e-10);
    EXPECT_NEAR(skew_log_density(fam, vec({-1e-12, 0.3})), at0, 1e-10);
  }
}

TEST(SkewDensity, TieAtZeroUsesPositiveBranch) {
  const SkewFamily fam{Family::SkewNormal, {3.0}, 0.0};
  const double expect = std::log(2.0 * 3.0 / 10.0) - kLogSqrt2Pi;
  EXPECT_NEAR(skew_log_density(fam, vec({0.0})), expect, 1e-15);
}

TEST(SkewDensity, NormalizesAndSplitsMassByGammaSquared) {
  for (auto [family, tail] : {std::pair{Family::SkewNormal, 0.0}, {Family::SkewT, 4.0}, {Family::SkewT, 8.0},
                              {Family::SkewGed, 0.7}, {Family::SkewGed, 1.0}, {Family::SkewGed, 2.0}}) {
    for (double g : {0.5, 1.0, 2.0}) {
      const SkewFamily fam{family, {g}, tail};
      const double pos = ts::integrate_positive([&](double x) { return density1(fam, x); });
      const double neg = ts::integrate_negative([&](double x) { return density1(fam, x); });
      EXPECT_NEAR(pos + neg, 1.0, 1e-6) << family_name(family) << " tail=" << tail << " gamma=" << g;
      EXPECT_NEAR(pos / neg, g * g, 1e-6) << family_name(family) << " tail=" << tail << " gamma=" << g;
    }
  }
}

TEST(SkewDensity, BivariateNormalization) {
  const SkewFamily fam{Family::SkewT, {0.7, 1.6}, 5.0};
  const SkewDensity dens(fam);
  Eigen::VectorXd x(2);
  const double area = ts::integrate_plane([&](double a, double b) {
    x << a, b;
    return std::exp(dens(x));
  });
  EXPECT_NEAR(area, 1.0, 1e-4);
}

TEST(SkewDensity, RejectsBadParameters) {
  EXPECT_THROW(skew_log_density(SkewFamily{Family::SkewNormal, {0.0}, 0.0}, vec({0.0})), InvalidInput);
  EXPECT_THROW(skew_log_density(SkewFamily{Family::SkewNormal, {-1.0}, 0.0}, vec({0.0})), InvalidInput);
  EXPECT_THROW(skew_log_density(SkewFamily{Family::SkewT, {1.0}, 2.0}, vec({0.0})), InvalidInput);
  EXPECT_THROW(skew_log_density(SkewFamily{Family::SkewGed, {1.0}, 0.0}, vec({0.0})), InvalidInput);
  EXPECT_THROW(skew_log_density(SkewFamily{Family::SkewNormal, {1.0, 1.0}, 0.0}, vec({0.0})), InvalidInput);
}

TEST(Samplers, DeterministicGivenSeed) {
  const SkewFamily fam{Family::SkewT, {0.9, 1.1}, 6.0};
  EXPECT_EQ(skew_sample(fam, 100, 3), skew_sample(fam, 100, 3));
  EXPECT_NE(skew_sample(fam, 100, 3), skew_sample(fam, 100, 4));
  EXPECT_EQ(base_sample(BaseFamily::Ged, 1.3, 2, 50, 8), base_sample(BaseFamily::Ged, 1.3, 2, 50, 8));
}

TEST(Samplers, NormalCovarianceIsIdentity) {
  const Eigen::MatrixXd x = base_sample(BaseFamily::Normal, 0.0, 2, 100000, 21);
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(x.rows() - 1);
  EXPECT_LT((cov - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.02);
}

TEST(Samplers, StudentTHasUnitVariance) {
  const Eigen::MatrixXd x = base_sample(BaseFamily::StudentT, 8.0, 1, 1000000, 22);
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / static_cast<double>(x.rows() - 1);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(Samplers, GedUnitShapeMatchesNormalSampler) {
  const Eigen::MatrixXd g = base_sample(BaseFamily::Ged, 1.0, 3, 100000, 23);
  const Eigen::MatrixXd n = base_sample(BaseFamily::Normal, 0.0, 3, 100000, 24);
  const double crit = ts::ks_critical_01(1e5, 1e5);
  for (Eigen::Index c = 0; c < 3; ++c) EXPECT_LT(ts::ks_two_sample(column(g, c), column(n, c)), crit);
  std::vector<double> rg, rn;
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    rg.push_back(g.row(r).squaredNorm());
    rn.push_back(n.row(r).squaredNorm());
  }
  EXPECT_LT(ts::ks_two_sample(rg, rn), crit);
}

TEST(Samplers, UnitGammaSkewSampleMatchesBase) {
  const Eigen::MatrixXd s = skew_sample(SkewFamily{Family::SkewT, {1.0, 1.0}, 5.0}, 50000, 31);
  const Eigen::MatrixXd b = base_sample(BaseFamily::StudentT, 5.0, 2, 50000, 32);
  const double crit = ts::ks_critical_01(5e4, 5e4);
  for (Eigen::Index c = 0; c < 2; ++c) EXPECT_LT(ts::ks_two_sample(column(s, c), column(b, c)), crit);
}

TEST(Samplers, SignOddsEqualGammaSquared) {
  const Eigen::MatrixXd x = skew_sample(SkewFamily{Family::SkewGed, {2.0}, 1.5}, 1000000, 41);
  const double pos = static_cast<double>((x.array() >= 0.0).count());
  const double neg = static_cast<double>(x.rows()) - pos;
  EXPECT_NEAR(pos / neg / 4.0, 1.0, 0.05);
}

TEST(Samplers, SkewNormalKolmogorovSmirnov) {
  const SkewFamily fam{Family::SkewNormal, {1.5}, 0.0};
  const Eigen::MatrixXd x = skew_sample(fam, 100000, 51);
  auto pdf = [&](double v) { return density1(fam, v); };
  const double d = ts::ks_statistic(
      column(x, 0),
      [&](double first) {
        return ts::integrate_negative([&](double v) { return pdf(v + first); });
      },
      [&](double a, double b) { return ts::integrate_short(pdf, a, b); });
  EXPECT_LT(d, ts::ks_critical_01(1e5));
}

TEST(Samplers, ChiSquareAgainstDensityEveryFamily) {
  struct Case {
    SkewFamily fam;
    std::uint64_t seed;
  };
  const std::vector<Case> cases = {{{Family::SkewNormal, {0.7}, 0.0}, 61},
                                   {{Family::SkewT, {1.4}, 4.5}, 62},
                                   {{Family::SkewGed, {0.8}, 0.7}, 63},
                                   {{Family::SkewGed, {1.3}, 2.0}, 64}};
  for (const auto& c : cases) {
    const Eigen::MatrixXd x = skew_sample(c.fam, 100000, c.seed);
    std::vector<double> edges;
    for (int i = -15; i <= 15; ++i) edges.push_back(0.2 * i);
    auto pdf = [&](double v) { return density1(c.fam, v); };
    std::vector<double> probs;
    probs.push_back(ts::integrate_negative([&](double v) { return pdf(v + edges.front()); }));
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) probs.push_back(ts::integrate_interval(pdf, edges[i], edges[i + 1]));
    probs.push_back(ts::integrate_positive([&](double v) { return pdf(v + edges.back()); }));
    const double stat = ts::chi_square_statistic(column(x, 0), edges, probs);
    EXPECT_LT(stat, ts::chi_square_quantile(static_cast<double>(probs.size() - 1), 0.99)) << family_name(c.fam.family);
  }
}

TEST(Samplers, RejectEmptyAndBadTail) {
  EXPECT_THROW(base_sample(BaseFamily::StudentT, 1.0, 1, 10, 1), InvalidInput);
  EXPECT_THROW(base_sample(BaseFamily::Normal, 0.0, 1, 0, 1), InvalidInput);
  EXPECT_THROW(skew_sample(SkewFamily{Family::SkewNormal, {1.0}, 0.0}, 0, 1), InvalidInput);
}
