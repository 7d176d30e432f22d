#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dfpp/estimators.hpp"

using namespace dfpp;

namespace {
constexpr double kPi = std::numbers::pi;
const ConeEstimate kWideCone{0.8, 0.5, 0.3, 1.25};
}  // namespace

TEST(Estimators, PointMassIsDeterministic) {
  const auto d = EdgeTimeDistribution::point_mass(2.0);
  for (double theta : {0.0, kPi / 2}) {
    const MuEstimate e = estimate_mu(d, theta, {16, 64}, 5, 1, 1);
    EXPECT_EQ(e.mu_hat, 2.0);
    EXPECT_EQ(e.mu_stderr, 0.0);
  }
  const MuEstimate diag = estimate_mu(d, kPi / 4, {100, 400}, 3, 1, 1);
  EXPECT_NEAR(diag.mu_hat, 2.0 * std::numbers::sqrt2, 2.0 / 400);
  EXPECT_TRUE(diag.inf_characterization);
}

TEST(Estimators, AllZeroWeights) {
  const MuEstimate e = estimate_mu(EdgeTimeDistribution::bernoulli01(1.0), 0.7, {32, 64}, 4, 1, 1);
  EXPECT_EQ(e.mu_hat, 0.0);
  EXPECT_EQ(e.trend_slope, 0.0);
}

TEST(Estimators, ScheduleValidation) {
  const auto d = EdgeTimeDistribution::bernoulli01(0.5);
  EXPECT_THROW(estimate_mu(d, 0.5, {64, 32}, 4, 1, 1), std::invalid_argument);
  EXPECT_THROW(estimate_mu(d, 2.0, {64}, 4, 1, 1), std::invalid_argument);
  EXPECT_THROW(estimate_mu(d, 0.5, {}, 4, 1, 1), std::invalid_argument);
}

TEST(Estimators, ShiftAddsManhattanLengthPerReplicate) {
  const auto base = EdgeTimeDistribution::atoms({{0.0, 0.5}, {1.0, 0.3}, {2.0, 0.2}});
  const auto shifted = EdgeTimeDistribution::shifted(base, 0.75);
  const double theta = 0.6;
  const MuEstimate a = estimate_mu(base, theta, {40, 80}, 20, 9, 1);
  const MuEstimate b = estimate_mu(shifted, theta, {40, 80}, 20, 9, 1);
  for (std::size_t k = 0; k < a.radii.size(); ++k) {
    const Vertex v = a.targets[k];
    for (std::size_t i = 0; i < a.passage_times[k].size(); ++i)
      EXPECT_NEAR(b.passage_times[k][i], a.passage_times[k][i] + 0.75 * static_cast<double>(v.x + v.y), 1e-9);
  }
}

TEST(Estimators, SmallerLawGivesSmallerTimesPerReplicate) {
  const auto f1 = EdgeTimeDistribution::atoms({{0.0, 0.3}, {1.0, 0.4}, {3.0, 0.3}});
  const auto f2 = EdgeTimeDistribution::atoms({{0.0, 0.5}, {1.0, 0.4}, {2.0, 0.1}});
  ASSERT_TRUE(stochastically_dominates(f1, f2, {0.5, 1.5, 2.5}));
  const MuEstimate a = estimate_mu(f1, 0.9, {30, 60}, 30, 4, 1);
  const MuEstimate b = estimate_mu(f2, 0.9, {30, 60}, 30, 4, 1);
  for (std::size_t k = 0; k < a.radii.size(); ++k)
    for (std::size_t i = 0; i < a.passage_times[k].size(); ++i) EXPECT_LE(b.passage_times[k][i], a.passage_times[k][i]);
  EXPECT_LE(b.mu_hat, a.mu_hat);
}

TEST(Estimators, TailTrivialCases) {
  const TailEstimate none = tail_probability(EdgeTimeDistribution::point_mass(1.0), 0.0, 0.5, 20, 50, 1, 1);
  EXPECT_EQ(none.hits, 0u);
  EXPECT_EQ(none.ci.lo, 0.0);
  EXPECT_GT(none.ci.hi, 0.0);
  const TailEstimate all = tail_probability(EdgeTimeDistribution::bernoulli01(1.0), 1.0, 0.01, 20, 50, 1, 1);
  EXPECT_EQ(all.frequency, 1.0);
  EXPECT_THROW(tail_probability(EdgeTimeDistribution::point_mass(1.0), 0.0, 0.0, 20, 5, 1, 1), std::invalid_argument);
}

TEST(Estimators, SubcriticalTailDecays) {
  const auto d = EdgeTimeDistribution::bernoulli01(0.4);
  const MuEstimate pilot = estimate_mu(d, kPi / 4, {128}, 100, 2, 1);
  ASSERT_GT(pilot.lower_bound(0.99), 0.0);
  const double delta = pilot.mu_hat / 2;
  const TailEstimate near = tail_probability(d, kPi / 4, delta, 32, 2000, 3, 1);
  const TailEstimate far = tail_probability(d, kPi / 4, delta, 128, 2000, 3, 1);
  EXPECT_LE(far.frequency, near.frequency);
}

TEST(Estimators, MomentsRequireTheCone) {
  const auto d = EdgeTimeDistribution::bernoulli01(0.8);
  EXPECT_THROW(moment_plateau(d, 0.1, 1, {16, 32}, 10, 1, kWideCone, 0.6445, 1), std::invalid_argument);
  EXPECT_THROW(moment_plateau(EdgeTimeDistribution::bernoulli01(0.5), kPi / 4, 1, {16, 32}, 10, 1, kWideCone, 0.6445, 1),
               std::invalid_argument);
  const ConeEstimate full{1.0, 1.0, 0.0, kPi / 2};
  const MomentPlateau z = moment_plateau(EdgeTimeDistribution::bernoulli01(1.0), 0.2, 3, {16, 32}, 10, 1, full, 0.6445, 1);
  for (const auto& pt : z.points) EXPECT_EQ(pt.moment, 0.0);
  EXPECT_TRUE(z.plateau);
}

TEST(Estimators, SigmaTrivialCases) {
  const ConeEstimate full{1.0, 1.0, 0.0, kPi / 2};
  const SigmaTail zero = sigma_tail(EdgeTimeDistribution::bernoulli01(1.0), 0.4, 30, 20, 1, full, 0.6445, 1);
  EXPECT_EQ(zero.survival.size(), 1u);
  EXPECT_EQ(zero.survival[0], 1.0);
}

TEST(Estimators, SigmaOfPositiveWeightsIsPathLength) {
  // With F(0) = 0 every edge counts, so sigma = x + y. The estimator
  // normally refuses F(0) <= p_c; pass p_c = -1 to exercise the count.
  const auto d = EdgeTimeDistribution::exponential(1.0);
  const Vertex v = polar_target(20, 0.5);
  const SigmaTail s = sigma_tail(d, 0.5, 20, 10, 1, kWideCone, -1.0, 1);
  const auto len = static_cast<std::size_t>(v.x + v.y);
  ASSERT_EQ(s.survival.size(), len + 1);
  EXPECT_EQ(s.survival[len], 1.0);
}

namespace {
MuEstimate fake(double theta, double mu, double se = 0.0) {
  MuEstimate e;
  e.theta = theta;
  e.mu_hat = mu;
  e.mu_stderr = se;
  return e;
}
}  // namespace

TEST(Estimators, ConvexityOfL1Norm) {
  std::vector<MuEstimate> ests, zeros, bumped;
  for (double t : default_theta_grid()) {
    ests.push_back(fake(t, std::cos(t) + std::sin(t)));
    zeros.push_back(fake(t, 0.0));
    bumped.push_back(fake(t, std::abs(t - kPi / 4) < 1e-9 ? 3.0 : std::cos(t) + std::sin(t)));
  }
  EXPECT_TRUE(convexity_check(ests).passes());
  EXPECT_TRUE(convexity_check(zeros).passes());
  const ConvexityReport bad = convexity_check(bumped);
  ASSERT_EQ(bad.violations.size(), 1u);
  EXPECT_NEAR(bad.violations[0].theta_mid, kPi / 4, 1e-12);
  EXPECT_THROW(convexity_check({fake(0, 1), fake(1, 1)}), std::invalid_argument);
}

TEST(Estimators, SubcriticalConvexity) {
  const auto d = EdgeTimeDistribution::bernoulli01(0.4);
  std::vector<MuEstimate> ests;
  for (double t : {0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2}) ests.push_back(estimate_mu(d, t, {96}, 60, 6, 1));
  EXPECT_TRUE(convexity_check(ests).passes());
}

TEST(Estimators, PhaseOfFullyOpenLaw) {
  PhaseBudget budget;
  budget.radii = {16, 32};
  budget.replicates = 4;
  budget.workers = 1;
  const PhaseReport rep = classify_phase(EdgeTimeDistribution::bernoulli01(1.0), 0.6445, default_theta_grid(), budget);
  EXPECT_EQ(rep.phase, Phase::kSupercritical);
  ASSERT_TRUE(rep.cone.has_value());
  EXPECT_EQ(rep.cone->theta_minus, 0.0);
  EXPECT_EQ(rep.cone->theta_plus, kPi / 2);
  for (const auto& e : rep.estimates) EXPECT_EQ(e.mu_hat, 0.0);
  EXPECT_TRUE(rep.consistent());
}

TEST(Estimators, PhaseNearCriticalityNeedsForcing) {
  PhaseBudget budget;
  budget.radii = {16, 32};
  budget.replicates = 4;
  budget.workers = 1;
  const auto d = EdgeTimeDistribution::bernoulli01(0.645);
  EXPECT_THROW(classify_phase(d, 0.6445, {kPi / 4}, budget), PhaseInconclusive);
  const PhaseReport forced = classify_phase(d, 0.6445, {kPi / 4}, budget, Phase::kCritical);
  EXPECT_EQ(forced.phase, Phase::kCritical);
  ASSERT_EQ(forced.verdicts.size(), 1u);
  EXPECT_EQ(forced.verdicts[0].expected, Expectation::kVanishing);
}

TEST(Estimators, SubcriticalPhaseHasPositiveBounds) {
  PhaseBudget budget;
  budget.radii = {32, 128};
  budget.replicates = 60;
  budget.workers = 1;
  const PhaseReport rep = classify_phase(EdgeTimeDistribution::bernoulli01(0.4), 0.6445,
                                         {0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2}, budget);
  EXPECT_EQ(rep.phase, Phase::kSubcritical);
  EXPECT_FALSE(rep.cone.has_value());
  for (const auto& v : rep.verdicts) EXPECT_GT(v.lower_bound, 0.0);
  EXPECT_TRUE(rep.consistent());
}

TEST(Estimators, CriticalDivergenceReportShape) {
  const CriticalReport rep = critical_divergence(0.6445, {16, 64, 256}, 40, 1, 1);
  ASSERT_EQ(rep.mean_t.size(), 3u);
  EXPECT_TRUE(rep.strictly_increasing);
  EXPECT_LT(rep.ratio_last_first, 1.0);
  EXPECT_THROW(critical_divergence(0.6445, {16}, 4, 1, 1), std::invalid_argument);
}
