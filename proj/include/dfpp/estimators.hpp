#pragma once

// Monte Carlo estimators built on the passage-time DP: time constants,
// lower-tail frequencies, moment plateaus, the sigma survival function,
// convexity, the critical growth diagnostics and phase classification.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfpp/distributions.hpp"
#include "dfpp/lattice.hpp"
#include "dfpp/oriented.hpp"
#include "dfpp/parallel.hpp"
#include "dfpp/passage.hpp"
#include "dfpp/stats.hpp"

namespace dfpp {

inline constexpr double kQuarterPi = std::numbers::pi / 4;
inline constexpr double kHalfPi = std::numbers::pi / 2;

inline std::vector<double> default_theta_grid() {
  constexpr double pi = std::numbers::pi;
  return {0.0, pi / 12, pi / 8, pi / 6, pi / 4, pi / 3, 3 * pi / 8, 5 * pi / 12, pi / 2};
}

inline Vertex polar_target(double r, double theta) { return nearest_vertex(PolarPoint(r, theta)); }

/// T(0, v) for one replicate, drawn straight from the coordinate-keyed uniforms.
inline double replicate_passage_time(const Sampler& sample, std::uint64_t seed, std::uint32_t replicate, Vertex target) {
  return streaming_passage_time(seed, replicate, target, [&](double u) { return sample(u); });
}

/// sigma = T_tau(0, v) for one replicate.
inline double replicate_tau_time(const Sampler& sample, std::uint64_t seed, std::uint32_t replicate, Vertex target) {
  return streaming_passage_time(seed, replicate, target, [&](double u) { return sample(u) > 0.0 ? 1.0 : 0.0; });
}

/// Replicate-by-radius table of T(0, (r, theta)).
inline std::vector<std::vector<double>> sample_passage_times(const EdgeTimeDistribution& dist, double theta,
                                                             const std::vector<double>& radii, int replicates,
                                                             std::uint64_t seed, unsigned workers, bool tau = false) {
  const Sampler sample(dist);
  std::vector<std::vector<double>> out;
  for (double r : radii) {
    const Vertex target = polar_target(r, theta);
    out.push_back(parallel_map(static_cast<std::size_t>(replicates), workers, [&](std::size_t i) {
      const auto rep = static_cast<std::uint32_t>(i);
      return tau ? replicate_tau_time(sample, seed, rep, target) : replicate_passage_time(sample, seed, rep, target);
    }));
  }
  return out;
}

inline void check_schedule(const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("radius schedule must not be empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw std::invalid_argument("radius schedule entries must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw std::invalid_argument("radius schedule must be strictly increasing");
  }
}

inline void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= kHalfPi + 1e-12)) throw std::invalid_argument("theta must lie in [0, pi/2]");
}

struct MuEstimate {
  double theta = 0.0;
  std::vector<double> radii;
  std::vector<Vertex> targets;
  std::vector<std::vector<double>> passage_times;  // [radius][replicate]
  std::vector<double> mean_ratio;                  // mean of T / r per radius
  std::vector<double> stderr_ratio;
  double mu_hat = 0.0;     // last-radius mean of T / r
  double mu_stderr = 0.0;
  double trend_slope = 0.0;  // slope of mean T / r against 1 / r
  bool inf_characterization = true;  // means nonincreasing in r within 2 combined stderr

  double lower_bound(double level) const { return stats::lower_confidence_bound(mu_hat, mu_stderr, level); }
};

inline MuEstimate summarize_mu(double theta, const std::vector<double>& radii,
                               std::vector<std::vector<double>> passage_times) {
  MuEstimate est;
  est.theta = theta;
  est.radii = radii;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    est.targets.push_back(polar_target(radii[k], theta));
    std::vector<double> ratios;
    for (double t : passage_times[k]) ratios.push_back(t / radii[k]);
    est.mean_ratio.push_back(stats::mean(ratios));
    est.stderr_ratio.push_back(stats::stderr_of_mean(ratios));
  }
  est.passage_times = std::move(passage_times);
  est.mu_hat = est.mean_ratio.back();
  est.mu_stderr = est.stderr_ratio.back();
  if (radii.size() >= 2) {
    std::vector<double> inv;
    for (double r : radii) inv.push_back(1.0 / r);
    const bool flat = std::all_of(est.mean_ratio.begin(), est.mean_ratio.end(),
                                  [&](double m) { return m == est.mean_ratio.front(); });
    est.trend_slope = flat ? 0.0 : stats::least_squares(inv, est.mean_ratio).slope;
    for (std::size_t k = 1; k < radii.size(); ++k) {
      const double slack =
          2.0 * std::hypot(est.stderr_ratio[k - 1], est.stderr_ratio[k]);
      if (est.mean_ratio[k] > est.mean_ratio[k - 1] + slack) est.inf_characterization = false;
    }
  }
  return est;
}

/// Time constant estimate along direction theta over an increasing schedule.
inline MuEstimate estimate_mu(const EdgeTimeDistribution& dist, double theta, const std::vector<double>& radii,
                              int replicates, std::uint64_t seed, unsigned workers = 0) {
  check_theta(theta);
  check_schedule(radii);
  if (replicates < 2) throw std::invalid_argument("estimate_mu: need at least 2 replicates");
  return summarize_mu(theta, radii, sample_passage_times(dist, theta, radii, replicates, seed, workers));
}

struct TailEstimate {
  double delta = 0.0;
  double r = 0.0;
  double theta = 0.0;
  std::uint64_t hits = 0;  // replicates with T <= delta r
  std::uint64_t replicates = 0;
  double frequency = 0.0;
  stats::Interval ci{0.0, 1.0};  // 95% Clopper-Pearson
};

inline TailEstimate tail_probability(const EdgeTimeDistribution& dist, double theta, double delta, double r,
                                     int replicates, std::uint64_t seed, unsigned workers = 0) {
  check_theta(theta);
  if (!(delta > 0.0)) throw std::invalid_argument("tail_probability: delta must be positive");
  const auto times = sample_passage_times(dist, theta, {r}, replicates, seed, workers).front();
  TailEstimate est{delta, r, theta, 0, static_cast<std::uint64_t>(replicates), 0.0, {}};
  est.hits = static_cast<std::uint64_t>(std::count_if(times.begin(), times.end(), [&](double t) { return t <= delta * r; }));
  est.frequency = static_cast<double>(est.hits) / replicates;
  est.ci = stats::clopper_pearson(est.hits, est.replicates, 0.95);
  return est;
}

inline void require_inside_cone(const EdgeTimeDistribution& dist, double theta, const ConeEstimate& cone,
                                double pc_hat, const char* who) {
  if (!(dist.atom_at_zero() > pc_hat)) throw std::invalid_argument(std::string(who) + ": requires F(0) > p_c");
  if (!cone.contains(theta)) throw std::invalid_argument(std::string(who) + ": theta lies outside the percolation cone");
}

struct MomentPoint {
  double r;
  double moment;  // sample mean of T^m
  double stderr_;  // bootstrap standard error
  stats::Interval ci;
};

struct MomentPlateau {
  double theta = 0.0;
  int m = 1;
  std::vector<MomentPoint> points;
  double range = 0.0;          // max - min of the per-radius moments
  double pooled_stderr = 0.0;  // stderr of the difference max - min
  bool plateau = false;        // range <= 3 pooled stderr
  bool endpoints_agree = false;  // last minus first within combined 95% CI
};

inline MomentPlateau moment_plateau(const EdgeTimeDistribution& dist, double theta, int m,
                                    const std::vector<double>& radii, int replicates, std::uint64_t seed,
                                    const ConeEstimate& cone, double pc_hat, unsigned workers = 0) {
  check_theta(theta);
  check_schedule(radii);
  if (m < 1) throw std::invalid_argument("moment_plateau: m must be >= 1");
  require_inside_cone(dist, theta, cone, pc_hat, "moment_plateau");
  const auto table = sample_passage_times(dist, theta, radii, replicates, seed, workers);
  MomentPlateau out;
  out.theta = theta;
  out.m = m;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    std::vector<double> powers;
    for (double t : table[k]) powers.push_back(std::pow(t, m));
    const auto boot = stats::bootstrap_mean(powers, 1000, 0.95, seed, static_cast<std::uint32_t>(k));
    out.points.push_back({radii[k], boot.estimate, boot.stderr_, boot.ci});
  }
  const auto [lo, hi] = std::minmax_element(out.points.begin(), out.points.end(),
                                            [](const auto& a, const auto& b) { return a.moment < b.moment; });
  out.range = hi->moment - lo->moment;
  out.pooled_stderr = std::hypot(hi->stderr_, lo->stderr_);
  out.plateau = out.range <= 3.0 * out.pooled_stderr;
  const auto& first = out.points.front();
  const auto& last = out.points.back();
  out.endpoints_agree =
      std::abs(last.moment - first.moment) <= stats::normal_quantile(0.975) * std::hypot(first.stderr_, last.stderr_);
  return out;
}

struct SigmaTail {
  double theta = 0.0;
  double r = 0.0;
  int replicates = 0;
  std::vector<double> survival;  // survival[k] = frequency of {sigma >= k}
  stats::LinearFit fit;          // log survival against k over frequencies >= min_frequency
  int fitted_points = 0;
};

inline SigmaTail sigma_tail(const EdgeTimeDistribution& dist, double theta, double r, int replicates,
                            std::uint64_t seed, const ConeEstimate& cone, double pc_hat, unsigned workers = 0,
                            double min_frequency = 1e-3) {
  check_theta(theta);
  require_inside_cone(dist, theta, cone, pc_hat, "sigma_tail");
  const auto sigmas = sample_passage_times(dist, theta, {r}, replicates, seed, workers, true).front();
  SigmaTail out;
  out.theta = theta;
  out.r = r;
  out.replicates = replicates;
  const auto max_sigma = static_cast<std::size_t>(*std::max_element(sigmas.begin(), sigmas.end()));
  out.survival.assign(max_sigma + 1, 0.0);
  for (double s : sigmas)
    for (std::size_t k = 0; k <= static_cast<std::size_t>(s); ++k) out.survival[k] += 1.0;
  for (double& f : out.survival) f /= replicates;
  std::vector<double> ks, logs;
  for (std::size_t k = 0; k < out.survival.size(); ++k)
    if (out.survival[k] >= min_frequency) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(out.survival[k]));
    }
  out.fitted_points = static_cast<int>(ks.size());
  if (ks.size() >= 2) out.fit = stats::least_squares(ks, logs);
  return out;
}

struct ConvexityViolation {
  double theta_left, theta_mid, theta_right;
  double excess;  // chord defect minus allowed slack
};

struct ConvexityReport {
  std::vector<ConvexityViolation> violations;
  int triples_checked = 0;
  bool passes() const { return violations.empty(); }
};

/// Discrete convexity of the homogeneous extension g(r, theta) = r mu(theta).
/// For neighbouring angles a < b < c the point on ray b of the chord between
/// the unit vectors at a and c must satisfy g <= the chord interpolation of g,
/// within `slack_sigmas` combined standard errors.
inline ConvexityReport convexity_check(const std::vector<MuEstimate>& by_theta, double slack_sigmas = 2.0) {
  if (by_theta.size() < 5) throw std::invalid_argument("convexity_check: need at least 5 directions");
  std::vector<const MuEstimate*> sorted;
  for (const auto& e : by_theta) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->theta < b->theta; });
  ConvexityReport rep;
  for (std::size_t i = 1; i + 1 < sorted.size(); ++i) {
    const MuEstimate& a = *sorted[i - 1];
    const MuEstimate& b = *sorted[i];
    const MuEstimate& c = *sorted[i + 1];
    // lambda u(a) + (1 - lambda) u(c) = s u(b)
    const double ax = std::cos(a.theta), ay = std::sin(a.theta);
    const double cx = std::cos(c.theta), cy = std::sin(c.theta);
    const double bx = std::cos(b.theta), by = std::sin(b.theta);
    // cross(lambda a + (1 - lambda) c, b) = 0
    const double cross_a = ax * by - ay * bx;
    const double cross_c = cx * by - cy * bx;
    const double lambda = -cross_c / (cross_a - cross_c);
    const double px = lambda * ax + (1 - lambda) * cx;
    const double py = lambda * ay + (1 - lambda) * cy;
    const double s = std::hypot(px, py);
    const double lhs = s * b.mu_hat;
    const double rhs = lambda * a.mu_hat + (1 - lambda) * c.mu_hat;
    const double se = std::sqrt(s * s * b.mu_stderr * b.mu_stderr + lambda * lambda * a.mu_stderr * a.mu_stderr +
                                (1 - lambda) * (1 - lambda) * c.mu_stderr * c.mu_stderr);
    const double excess = lhs - rhs - slack_sigmas * se;
    ++rep.triples_checked;
    if (excess > 1e-12 * std::max(1.0, std::abs(rhs))) rep.violations.push_back({a.theta, b.theta, c.theta, excess});
  }
  return rep;
}

struct CriticalReport {
  double p = 0.0;
  std::vector<double> radii;
  std::vector<double> mean_t;
  std::vector<double> stderr_t;
  bool strictly_increasing = false;  // mean T grows at every step
  double ratio_last_first = 0.0;     // (mean T / r) at the last radius over the first
  bool ratio_below_quarter = false;
  double loglog_slope = 0.0;  // slope of log mean T against log r
  bool slope_ok = false;      // <= 0.75
};

/// Growth of the diagonal passage time at the critical point for 0/1 weights.
inline CriticalReport critical_divergence(double pc_hat, const std::vector<double>& radii, int replicates,
                                          std::uint64_t seed, unsigned workers = 0) {
  check_schedule(radii);
  if (radii.size() < 2) throw std::invalid_argument("critical_divergence: need at least two radii");
  const auto dist = EdgeTimeDistribution::bernoulli01(pc_hat);
  const MuEstimate est = estimate_mu(dist, kQuarterPi, radii, replicates, seed, workers);
  CriticalReport rep;
  rep.p = pc_hat;
  rep.radii = radii;
  for (const auto& times : est.passage_times) {
    rep.mean_t.push_back(stats::mean(times));
    rep.stderr_t.push_back(stats::stderr_of_mean(times));
  }
  rep.strictly_increasing = true;
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(rep.mean_t[k] > rep.mean_t[k - 1])) rep.strictly_increasing = false;
  rep.ratio_last_first = est.mean_ratio.front() > 0.0 ? est.mean_ratio.back() / est.mean_ratio.front() : 0.0;
  rep.ratio_below_quarter = est.mean_ratio.back() < 0.25 * est.mean_ratio.front();
  std::vector<double> lr, lt;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (rep.mean_t[k] <= 0.0) continue;
    lr.push_back(std::log(radii[k]));
    lt.push_back(std::log(rep.mean_t[k]));
  }
  if (lr.size() >= 2) rep.loglog_slope = stats::least_squares(lr, lt).slope;
  rep.slope_ok = lr.size() >= 2 && rep.loglog_slope <= 0.75;
  return rep;
}

// ---------------------------------------------------------------------------
// Phase classification

enum class Phase : std::uint8_t { kSubcritical, kCritical, kSupercritical };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::kSubcritical: return "subcritical";
    case Phase::kCritical: return "critical";
    case Phase::kSupercritical: return "supercritical";
  }
  return "?";
}

class PhaseInconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhaseBudget {
  std::vector<double> radii{32, 64, 128, 256};
  int replicates = 200;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  double phase_tolerance = 0.01;  // |F(0) - p_c| below this is undecidable
  std::int64_t cone_levels = 4000;
  int cone_replicates = 32;
  double cone_edge_guard = 0.05;  // directions this close to a cone edge carry no expectation
  double confidence = 0.99;
};

enum class Expectation : std::uint8_t { kPositive, kVanishing, kNone };

struct DirectionVerdict {
  double theta = 0.0;
  Expectation expected = Expectation::kNone;
  double lower_bound = 0.0;  // one-sided bound on T / r at the last radius
  double trend_ratio = 0.0;  // (T / r)_last / (T / r)_first
  bool pass = true;
};

struct PhaseReport {
  std::string distribution_id;
  double f0 = 0.0;
  double pc_hat = 0.0;
  Phase phase = Phase::kSubcritical;
  std::optional<ConeEstimate> cone;
  std::vector<MuEstimate> estimates;
  std::vector<DirectionVerdict> verdicts;
  bool consistent() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass; });
  }
};

/// Compares F(0) with p_c, then checks that the time constant is positive
/// where the phase says so and trends to zero on the cone (or diagonal).
/// Vanishing is operationalized as (T / r) dropping to at most half its
/// first-radius value across the schedule.
inline PhaseReport classify_phase(const EdgeTimeDistribution& dist, double pc_hat, const std::vector<double>& thetas,
                                  const PhaseBudget& budget, std::optional<Phase> forced = std::nullopt) {
  PhaseReport rep;
  rep.distribution_id = dist.id();
  rep.f0 = dist.atom_at_zero();
  rep.pc_hat = pc_hat;
  if (forced) {
    rep.phase = *forced;
  } else if (rep.f0 < pc_hat - budget.phase_tolerance) {
    rep.phase = Phase::kSubcritical;
  } else if (rep.f0 > pc_hat + budget.phase_tolerance) {
    rep.phase = Phase::kSupercritical;
  } else {
    throw PhaseInconclusive("classify_phase: F(0) is within tolerance of p_c; force a phase to proceed");
  }
  if (rep.phase == Phase::kSupercritical) {
    if (rep.f0 >= 1.0) {
      rep.cone = ConeEstimate{1.0, 1.0, 0.0, kHalfPi};
    } else {
      rep.cone = estimate_cone(rep.f0, budget.cone_levels, budget.cone_replicates, budget.seed, budget.workers);
    }
  }
  for (double theta : thetas) {
    MuEstimate est = estimate_mu(dist, theta, budget.radii, budget.replicates, budget.seed, budget.workers);
    DirectionVerdict v;
    v.theta = theta;
    v.lower_bound = est.lower_bound(budget.confidence);
    v.trend_ratio = est.mean_ratio.front() > 0.0 ? est.mean_ratio.back() / est.mean_ratio.front() : 0.0;
    switch (rep.phase) {
      case Phase::kSubcritical:
        v.expected = Expectation::kPositive;
        break;
      case Phase::kCritical:
        v.expected = std::abs(theta - kQuarterPi) < 1e-9 ? Expectation::kVanishing : Expectation::kPositive;
        break;
      case Phase::kSupercritical: {
        const auto& c = *rep.cone;
        const bool full = c.theta_minus <= 0.0 && c.theta_plus >= kHalfPi;
        const bool near_edge = !full && (std::abs(theta - c.theta_minus) < budget.cone_edge_guard ||
                                         std::abs(theta - c.theta_plus) < budget.cone_edge_guard);
        if (near_edge) v.expected = Expectation::kNone;
        else v.expected = c.contains(theta) ? Expectation::kVanishing : Expectation::kPositive;
        break;
      }
    }
    if (v.expected == Expectation::kPositive) v.pass = v.lower_bound > 0.0;
    if (v.expected == Expectation::kVanishing) v.pass = est.mean_ratio.front() == 0.0 || v.trend_ratio <= 0.5;
    rep.verdicts.push_back(v);
    rep.estimates.push_back(std::move(est));
  }
  return rep;
}

}  // namespace dfpp
