#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "dccgarch/prior.hpp"

using namespace dccgarch;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ParamVector bivariate_t() {
  ParamVector p = default_initial_values(2, Family::SkewT);
  p.omega = {0.05, 0.08};
  p.alpha = {0.07, 0.04};
  p.beta = {0.85, 0.9};
  p.a = 0.04;
  p.b = 0.92;
  p.gamma = {0.8, 1.3};
  p.tail = 6.0;
  return p;
}

}  // namespace

TEST(DefaultPriors, PackageDefaults) {
  const PriorSpec s = default_priors(3, Family::SkewT);
  ASSERT_TRUE(s.tail.has_value());
  EXPECT_EQ(s.tail->location, 8.0);
  EXPECT_EQ(s.tail->scale, 10.0);
  EXPECT_EQ(s.tail->lower, 2.0);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(s.gamma[i].scale, 1.25);
    EXPECT_EQ(s.omega[i].scale, 10.0);
    EXPECT_EQ(s.alpha[i].scale, 10.0);
    EXPECT_EQ(s.beta[i].scale, 10.0);
    for (const auto* tn : {&s.omega[i], &s.alpha[i], &s.beta[i], &s.gamma[i]}) EXPECT_EQ(tn->location, 0.0);
  }
  EXPECT_EQ(s.a.location, 0.0);
  EXPECT_EQ(s.b.location, 0.0);
  EXPECT_EQ(s.a.scale, 10.0);
  EXPECT_EQ(s.b.scale, 10.0);
  EXPECT_EQ(s.alpha[0].upper, 1.0);
  EXPECT_TRUE(std::isinf(s.omega[0].upper));
}

TEST(DefaultPriors, TailEntryFollowsFamily) {
  EXPECT_FALSE(default_priors(1, Family::SkewNormal).tail.has_value());
  const PriorSpec ged = default_priors(2, Family::SkewGed);
  ASSERT_TRUE(ged.tail.has_value());
  EXPECT_EQ(ged.tail->lower, 0.0);
  EXPECT_EQ(ged.tail->location, 8.0);
  EXPECT_THROW(default_priors(0, Family::SkewT), InvalidInput);
}

TEST(LogPrior, SupportViolations) {
  const PriorSpec s = default_priors(2, Family::SkewT);
  const ParamVector ok = bivariate_t();
  EXPECT_TRUE(std::isfinite(log_prior(ok, s)));
  auto bad = ok;
  bad.omega[0] = 0.0;
  EXPECT_EQ(log_prior(bad, s), kNegInf);
  bad = ok;
  bad.omega[1] = -1.0;
  EXPECT_EQ(log_prior(bad, s), kNegInf);
  bad = ok;
  bad.alpha[0] = 0.2;  // alpha + beta >= 1 with both inside (0, 1)
  EXPECT_EQ(log_prior(bad, s), kNegInf);
  bad = ok;
  bad.a = 0.1;  // a + b >= 1
  EXPECT_EQ(log_prior(bad, s), kNegInf);
  bad = ok;
  bad.gamma[1] = 0.0;
  EXPECT_EQ(log_prior(bad, s), kNegInf);
  bad = ok;
  bad.tail = 2.0;
  EXPECT_EQ(log_prior(bad, s), kNegInf);
  bad = ok;
  bad.beta[0] = std::nan("");
  EXPECT_EQ(log_prior(bad, s), kNegInf);
}

TEST(LogPrior, MaximalAtLocations) {
  PriorSpec s = default_priors(1, Family::SkewNormal);
  s.omega[0].location = 0.2;
  s.alpha[0].location = 0.1;
  s.beta[0].location = 0.7;
  s.a.location = 0.05;
  s.b.location = 0.9;
  s.gamma[0].location = 1.1;
  ParamVector p = default_initial_values(1, Family::SkewNormal);
  p.omega = {0.2};
  p.alpha = {0.1};
  p.beta = {0.7};
  p.a = 0.05;
  p.b = 0.9;
  p.gamma = {1.1};
  EXPECT_EQ(log_prior(p, s), 0.0);
}

TEST(LogPrior, HandComputedKernels) {
  const PriorSpec s = default_priors(1, Family::SkewT);
  ParamVector p = default_initial_values(1, Family::SkewT);
  p.omega = {0.3};
  p.alpha = {0.1};
  p.beta = {0.6};
  p.a = 0.05;
  p.b = 0.9;
  p.gamma = {1.5};
  p.tail = 5.0;
  const double expect = -(0.3 * 0.3 + 0.1 * 0.1 + 0.6 * 0.6 + 0.05 * 0.05 + 0.9 * 0.9) / 200.0 -
                        1.5 * 1.5 / (2 * 1.5625) - 9.0 / 200.0;
  EXPECT_NEAR(log_prior(p, s), expect, 1e-15);
}

TEST(LogPrior, FiniteExactlyOnInteriorOfInvariants) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-0.5, 1.5);
  const PriorSpec s = default_priors(2, Family::SkewGed);
  int finite = 0;
  for (int rep = 0; rep < 20000; ++rep) {
    ParamVector p = default_initial_values(2, Family::SkewGed);
    p.omega = {U(rng), U(rng)};
    p.alpha = {U(rng) * 0.5, U(rng) * 0.5};
    p.beta = {U(rng), U(rng)};
    p.a = U(rng) * 0.5;
    p.b = U(rng);
    p.gamma = {U(rng), U(rng)};
    p.tail = U(rng) * 3;
    const bool lp_finite = std::isfinite(log_prior(p, s));
    EXPECT_EQ(lp_finite, satisfies_invariants(p));
    finite += lp_finite;
  }
  EXPECT_GT(finite, 10);
}

TEST(LogPrior, StrictlyDecreasesAwayFromLocation) {
  PriorSpec s = default_priors(1, Family::SkewT);
  s.beta[0].location = 0.5;
  ParamVector p = default_initial_values(1, Family::SkewT);
  p.alpha = {0.05};
  double prev = kNegInf;
  for (double beta : {0.9, 0.8, 0.7, 0.6, 0.5}) {
    p.beta = {beta};
    const double lp = log_prior(p, s);
    EXPECT_GT(lp, prev);
    prev = lp;
  }
  for (double beta : {0.4, 0.3, 0.2, 0.1}) {
    p.beta = {beta};
    const double lp = log_prior(p, s);
    EXPECT_LT(lp, prev);
    prev = lp;
  }
}

TEST(LogPrior, ValidatesSpec) {
  PriorSpec s = default_priors(2, Family::SkewT);
  s.gamma[1].scale = 0.0;
  EXPECT_THROW(require_valid(s), InvalidInput);
  s = default_priors(2, Family::SkewT);
  s.beta.pop_back();
  EXPECT_THROW(require_valid(s), InvalidInput);
}

TEST(LogPosterior, IsPriorPlusLikelihood) {
  const ParamVector p = bivariate_t();
  const ReturnsMatrix y = simulate_path(p, 200, 3);
  const PriorSpec s = default_priors(2, Family::SkewT);
  EXPECT_DOUBLE_EQ(log_posterior(p, y, s), log_prior(p, s) + log_likelihood(p, y));

  auto q = p;
  q.beta = {0.8, 0.88};
  q.gamma = {1.1, 0.9};
  const double d_post = log_posterior(q, y, s) - log_posterior(p, y, s);
  const double d_parts = (log_prior(q, s) - log_prior(p, s)) + (log_likelihood(q, y) - log_likelihood(p, y));
  EXPECT_NEAR(d_post, d_parts, 1e-12);
}

TEST(LogPosterior, ShortCircuitsOutsideSupport) {
  const ParamVector p = bivariate_t();
  const ReturnsMatrix y = simulate_path(p, 400000, 3);
  const PriorSpec s = default_priors(2, Family::SkewT);
  const Eigen::VectorXd h1 = initial_variances(y);
  auto bad = p;
  bad.a = 0.5;

  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  const double valid = log_posterior(p, y, s, h1);
  const auto valid_time = clock::now() - t0;
  t0 = clock::now();
  const double invalid = log_posterior(bad, y, s, h1);
  const auto invalid_time = clock::now() - t0;
  EXPECT_TRUE(std::isfinite(valid));
  EXPECT_EQ(invalid, kNegInf);
  EXPECT_LT(invalid_time * 1000, valid_time);
}

TEST(LogPosterior, WidePriorsPreserveLikelihoodArgmaxOnGrid) {
  ParamVector truth = default_initial_values(1, Family::SkewNormal);
  truth.omega = {0.1};
  truth.alpha = {0.1};
  truth.beta = {0.8};
  truth.gamma = {1.2};
  const ReturnsMatrix y = simulate_path(truth, 50, 17);
  PriorSpec wide = default_priors(1, Family::SkewNormal);
  for (auto* block : {&wide.omega, &wide.alpha, &wide.beta, &wide.gamma}) (*block)[0].scale = 1e6;
  wide.a.scale = wide.b.scale = 1e6;

  double best_ll = kNegInf, best_lp = kNegInf;
  std::array<double, 4> arg_ll{}, arg_lp{};
  for (double w : {0.02, 0.05, 0.1, 0.2, 0.4}) {
    for (double al : {0.02, 0.1, 0.2, 0.3}) {
      for (double be : {0.1, 0.4, 0.6, 0.8}) {
        if (al + be >= 1.0) continue;
        for (double g : {0.6, 0.9, 1.2, 1.6}) {
          ParamVector p = truth;
          p.omega = {w};
          p.alpha = {al};
          p.beta = {be};
          p.gamma = {g};
          const double ll = log_likelihood(p, y);
          const double lp = log_posterior(p, y, wide);
          if (ll > best_ll) best_ll = ll, arg_ll = {w, al, be, g};
          if (lp > best_lp) best_lp = lp, arg_lp = {w, al, be, g};
        }
      }
    }
  }
  EXPECT_EQ(arg_ll, arg_lp);
}

TEST(DccPosterior, FlatInterfaceMatchesStructInterface) {
  const ParamVector p = bivariate_t();
  const ReturnsMatrix y = simulate_path(p, 100, 7);
  const PriorSpec s = default_priors(2, Family::SkewT);
  const DccPosterior post(y, s, Family::SkewT);
  EXPECT_EQ(post.dim(), 11u);
  EXPECT_DOUBLE_EQ(post(to_flat(p)), log_posterior(p, y, s));
  EXPECT_THROW(DccPosterior(y, default_priors(2, Family::SkewNormal), Family::SkewT), InvalidInput);
  EXPECT_THROW(DccPosterior(y, default_priors(3, Family::SkewT), Family::SkewT), InvalidInput);
}
