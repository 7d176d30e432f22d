#pragma once

// Acceptance suites. Each criterion is a function returning a verdict plus
// the data behind it; suites bundle criteria and render deterministic files.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dfpp/distributions.hpp"
#include "dfpp/estimators.hpp"
#include "dfpp/growth.hpp"
#include "dfpp/io.hpp"
#include "dfpp/lattice.hpp"
#include "dfpp/oriented.hpp"
#include "dfpp/passage.hpp"
#include "dfpp/philox.hpp"
#include "dfpp/stats.hpp"

namespace dfpp::verify {

using nlohmann::json;

struct Options {
  std::uint64_t seed = 20240601;
  unsigned workers = 0;
  std::optional<double> pc_hat;  // computed by estimate_pc(10^4, 0.01) when absent
};

struct Verdict {
  std::string id;  // "C1" ... "C13"
  std::string name;
  bool pass = false;
  std::string detail;
  json data = json::object();
};

struct SuiteResult {
  std::string suite;
  std::vector<Verdict> verdicts;
  std::map<std::string, std::string> files;  // file name -> content
  bool passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }
};

class UnknownSuite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string num(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", d);
  return buf;
}

inline constexpr double kPi = std::numbers::pi;

inline double resolve_pc(const Options& opt) {
  if (opt.pc_hat) return *opt.pc_hat;
  PcOptions po;
  po.workers = opt.workers;
  return estimate_pc(10000, 0.01, opt.seed, po).p_hat;
}

// ---------------------------------------------------------------------------
// Independent oracles

/// Minimum weight over every monotone path to `target`, by enumerating the
/// positions of the east steps.
inline double brute_force_passage(const EdgeField& f, Vertex target) {
  const auto steps = static_cast<int>(target.x + target.y);
  if (steps > 24) throw std::invalid_argument("brute_force_passage: target too far");
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << steps); ++mask) {
    if (std::popcount(mask) != target.x) continue;
    double total = 0.0;
    std::int64_t x = 0, y = 0;
    for (int s = 0; s < steps; ++s) {
      if (mask & (1u << s)) total += f.east(x++, y);
      else total += f.north(x, y++);
    }
    best = std::min(best, total);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Criteria

inline Verdict check_dp_correctness(const Options& opt) {
  const auto discrete = EdgeTimeDistribution::atoms({{0.0, 0.3}, {1.0, 0.3}, {2.0, 0.2}, {3.5, 0.2}});
  const auto expo = EdgeTimeDistribution::exponential(1.5);
  const Sampler sd(discrete), se(expo);
  int mismatches = 0;
  std::int64_t vertices = 0;
  for (std::uint32_t i = 0; i < 1000; ++i) {
    rng::CounterStream stream(opt.seed, i, rng::Stream::kResample, 1);
    const GridSpec grid(1 + static_cast<std::int64_t>(stream.below(4)), 1 + static_cast<std::int64_t>(stream.below(4)));
    const EdgeField f = build_field(grid, opt.seed, i, {"mixed", opt.seed, i}, [&](double u, double aux) {
      return aux < 0.5 ? sd(u) : se(u);
    });
    const PassageField pf = compute_passage(f);
    for (std::int64_t y = 0; y <= grid.height; ++y)
      for (std::int64_t x = 0; x <= grid.width; ++x) {
        ++vertices;
        if (pf.at(x, y) != brute_force_passage(f, {x, y})) ++mismatches;
      }
  }
  Verdict v{"C1", "DP equals brute-force path enumeration", mismatches == 0, "", {}};
  v.detail = "grids=1000 vertices=" + std::to_string(vertices) + " mismatches=" + std::to_string(mismatches);
  v.data = {{"grids", 1000}, {"vertices", vertices}, {"mismatches", mismatches}};
  return v;
}

inline Verdict check_point_mass(const Options& opt) {
  bool ok = true;
  double worst = 0.0;
  json rows = json::array();
  for (double c : {1.0, 1.5}) {
    const auto dist = EdgeTimeDistribution::point_mass(c);
    for (double theta : default_theta_grid()) {
      const MuEstimate est = estimate_mu(dist, theta, {64, 256, 1024}, 4, opt.seed, opt.workers);
      for (std::size_t k = 0; k < est.radii.size(); ++k) {
        const double r = est.radii[k];
        const double expected = c * (std::cos(theta) + std::sin(theta));
        const double err = std::abs(est.mean_ratio[k] - expected);
        const bool lattice_dir = theta == 0.0 || theta == kPi / 2;
        const bool cell_ok = est.stderr_ratio[k] == 0.0 && (lattice_dir ? err == 0.0 : err <= c / r);
        ok = ok && cell_ok;
        worst = std::max(worst, err * r / c);
        rows.push_back({{"c", c}, {"theta", theta}, {"r", r}, {"mean_t_over_r", est.mean_ratio[k]}, {"expected", expected}});
      }
    }
  }
  Verdict v{"C2", "point mass time constant", ok, "max |T/r - c(cos+sin)| * r / c = " + num(worst), {}};
  v.data = {{"rows", rows}, {"worst_scaled_error", worst}};
  return v;
}

struct BallSample {
  double p0;
  std::uint32_t replicate;
  std::int32_t t;
  bool connected, boundary_values, resample_invariant;
};

/// Samples balls B_tau(t) and checks connectivity, boundary values and
/// insensitivity to resampling every edge whose tail lies outside the ball.
inline Verdict check_ball_structure(const Options& opt, int per_law = 250) {
  const GridSpec grid(200, 200);
  std::vector<BallSample> samples;
  int skipped = 0;
  for (double p0 : {0.5, 0.7}) {
    const auto dist = EdgeTimeDistribution::bernoulli01(p0);
    const Sampler sample(dist);
    int taken = 0;
    for (std::uint32_t rep = 0; taken < per_law; ++rep) {
      rng::CounterStream pick(opt.seed, rep, rng::Stream::kResample, 2);
      auto t = static_cast<std::int32_t>(pick.below(21));
      const EdgeField f = generate_field(grid, dist, opt.seed, rep);
      const TauField tf = compute_tau(f);
      std::optional<DirectedSet> b;
      for (; t >= 0 && !b; --t) {
        try {
          b = ball(tf, t);
        } catch (const BallTruncated&) {
        }
      }
      if (!b) {
        ++skipped;
        continue;
      }
      ++t;
      const Boundaries bd = boundaries(*b);
      bool values = true;
      for (const Vertex& v : bd.inner) values = values && tf.at(v) == t;
      for (const Vertex& v : bd.outer) values = values && tf.at(v) == t + 1;
      EdgeField g = f;
      for (const Edge& e : f.edges()) {
        if (edge_decides_set(*b, e)) continue;
        const auto u = rng::site_uniforms(opt.seed, rep, e.from.x, e.from.y, rng::Stream::kResample);
        g.weight(e) = sample(e.dir == Orientation::kEast ? u[0] : u[1]);
      }
      const bool invariant = sublevel_set(compute_tau(g), t) == *b;
      samples.push_back({p0, rep, t, b->is_directly_connected(), values, invariant});
      ++taken;
    }
  }
  const auto count = [&](auto member) {
    return std::count_if(samples.begin(), samples.end(), [&](const BallSample& s) { return s.*member; });
  };
  const auto n = static_cast<std::int64_t>(samples.size());
  const auto connected = count(&BallSample::connected);
  const auto values = count(&BallSample::boundary_values);
  const auto invariant = count(&BallSample::resample_invariant);
  Verdict v{"C9", "ball structure", connected == n && values == n && invariant == n, "", {}};
  v.detail = "balls=" + std::to_string(n) + " connected=" + std::to_string(connected) +
             " boundary_values=" + std::to_string(values) + " resample_invariant=" + std::to_string(invariant) +
             " skipped_replicates=" + std::to_string(skipped);
  v.data = {{"balls", n}, {"connected", connected}, {"boundary_values", values}, {"resample_invariant", invariant},
            {"skipped_replicates", skipped}};
  return v;
}

inline Verdict check_subcritical(const Options& opt) {
  const auto dist = EdgeTimeDistribution::bernoulli01(0.4);
  const std::vector<double> thetas{0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2};
  bool ok = true;
  json rows = json::array();
  std::string detail;
  for (double theta : thetas) {
    const MuEstimate est = estimate_mu(dist, theta, {512}, 200, opt.seed, opt.workers);
    const double lcb = est.lower_bound(0.99);
    const double delta = est.mu_hat / 2;
    const TailEstimate tail = tail_probability(dist, theta, delta, 256, 10000, opt.seed + 1, opt.workers);
    ok = ok && lcb > 0.0 && tail.hits == 0;
    rows.push_back({{"theta", theta}, {"mu_hat", est.mu_hat}, {"lcb99", lcb}, {"delta", delta}, {"tail_hits", tail.hits},
                    {"tail_replicates", tail.replicates}});
    detail += (detail.empty() ? "" : "; ") + num(theta) + ": lcb=" + num(lcb) + " hits=" + std::to_string(tail.hits);
  }
  return {"C3", "subcritical positivity and tail", ok, detail, {{"rows", rows}}};
}

inline ConeEstimate supercritical_cone(double p, const Options& opt) {
  return estimate_cone(p, 4000, 32, opt.seed, opt.workers);
}

inline Verdict check_supercritical_cone(const Options& opt, double pc_hat) {
  const auto dist = EdgeTimeDistribution::bernoulli01(0.8);
  const ConeEstimate cone = supercritical_cone(0.8, opt);
  const std::vector<double> radii{64, 128, 256, 512};
  const MomentPlateau m1 = moment_plateau(dist, kPi / 4, 1, radii, 200, opt.seed, cone, pc_hat, opt.workers);
  const MomentPlateau m2 = moment_plateau(dist, kPi / 4, 2, radii, 200, opt.seed, cone, pc_hat, opt.workers);
  const SigmaTail st = sigma_tail(dist, kPi / 4, 256, 20000, opt.seed + 2, cone, pc_hat, opt.workers);
  const bool tail_ok = st.fitted_points >= 3 && st.fit.slope < 0.0 && st.fit.r_squared >= 0.95;
  Verdict v{"C4", "supercritical cone: bounded moments and sigma tail", m1.plateau && m2.plateau && tail_ok, "", {}};
  v.detail = "m1 range=" + num(m1.range) + " (3se=" + num(3 * m1.pooled_stderr) + "); m2 range=" + num(m2.range) +
             " (3se=" + num(3 * m2.pooled_stderr) + "); sigma slope=" + num(st.fit.slope) +
             " R2=" + num(st.fit.r_squared) + " points=" + std::to_string(st.fitted_points);
  json moments = json::array();
  for (const auto* m : {&m1, &m2})
    for (const auto& pt : m->points)
      moments.push_back({{"m", m->m}, {"r", pt.r}, {"moment", pt.moment}, {"stderr", pt.stderr_},
                         {"ci_lo", pt.ci.lo}, {"ci_hi", pt.ci.hi}});
  v.data = {{"moments", moments},
            {"sigma_survival", st.survival},
            {"sigma_slope", st.fit.slope},
            {"sigma_r_squared", st.fit.r_squared},
            {"cone", {cone.alpha_hat, cone.theta_minus, cone.theta_plus}}};
  return v;
}

inline Verdict check_supercritical_off_cone(const Options& opt) {
  const auto dist = EdgeTimeDistribution::bernoulli01(0.8);
  const ConeEstimate cone = supercritical_cone(0.8, opt);
  const double theta = 0.1;
  const MuEstimate est = estimate_mu(dist, theta, {512}, 200, opt.seed, opt.workers);
  const double lcb = est.lower_bound(0.99);
  const double delta = lcb / 2;
  std::optional<TailEstimate> tail;
  if (delta > 0.0) tail = tail_probability(dist, theta, delta, 512, 10000, opt.seed + 3, opt.workers);
  const bool ok = theta < cone.theta_minus && lcb > 0.0 && tail && tail->hits == 0;
  Verdict v{"C5", "supercritical off-cone positivity and tail", ok, "", {}};
  v.detail = "theta_minus=" + num(cone.theta_minus) + " mu_hat=" + num(est.mu_hat) + " lcb99=" + num(lcb) +
             " delta*r=" + num(delta * 512) +
             " hits=" + (tail ? std::to_string(tail->hits) + "/" + std::to_string(tail->replicates) : "n/a");
  v.data = {{"theta_minus", cone.theta_minus}, {"mu_hat", est.mu_hat}, {"lcb99", lcb}, {"delta", delta}};
  if (tail) v.data["tail_hits"] = tail->hits, v.data["tail_ci_hi"] = tail->ci.hi;
  return v;
}

/// Frequency with which the zero-reachable vertices on the ring
/// r <= |v| < r + 1 span angles covering [lo, hi].
inline double fan_coverage(double p, double r, double lo, double hi, int replicates, const Options& opt) {
  const auto side = static_cast<std::int64_t>(std::ceil(r)) + 1;
  const GridSpec grid(side, side);
  const auto dist = EdgeTimeDistribution::bernoulli01(p);
  const auto covered = parallel_map(static_cast<std::size_t>(replicates), opt.workers, [&](std::size_t i) {
    const TauField tf = compute_tau(generate_field(grid, dist, opt.seed, static_cast<std::uint32_t>(i)));
    double amin = 10.0, amax = -1.0;
    for (std::int64_t y = 0; y <= side; ++y)
      for (std::int64_t x = 0; x <= side; ++x) {
        const double norm = std::hypot(static_cast<double>(x), static_cast<double>(y));
        if (norm < r || norm >= r + 1 || tf.at(x, y) != 0) continue;
        const double a = std::atan2(static_cast<double>(y), static_cast<double>(x));
        amin = std::min(amin, a);
        amax = std::max(amax, a);
      }
    return amin <= lo && amax >= hi ? 1 : 0;
  });
  return static_cast<double>(std::count(covered.begin(), covered.end(), 1)) / replicates;
}

inline Verdict check_cone_calibration(const Options& opt) {
  const ConeAngles at_zero = cone_angles(0.0);
  const bool zero_ok = at_zero.theta_minus == kPi / 4 && at_zero.theta_plus == kPi / 4;
  const EdgeSpeed full = estimate_edge_speed(1.0, 200, 4, opt.seed, opt.workers);
  const ConeAngles at_one = cone_angles(full.alpha_hat);
  const bool one_ok = at_one.theta_minus == 0.0 && at_one.theta_plus == kPi / 2;
  const ConeEstimate cone = supercritical_cone(0.8, opt);
  const bool interior = cone.theta_minus > 0.0 && cone.theta_minus < kPi / 4;
  const double lo = cone.theta_minus + 0.05, hi = cone.theta_plus - 0.05;
  const double coverage = fan_coverage(0.8, 256, lo, hi, 1000, opt);
  Verdict v{"C8", "cone calibration and zero fan", zero_ok && one_ok && interior && coverage >= 0.9, "", {}};
  v.detail = std::string("alpha=0 -> (pi/4,pi/4) ") + (zero_ok ? "exact" : "inexact") + "; p=1 alpha=" +
             num(full.alpha_hat) + " -> (0,pi/2) " + (one_ok ? "exact" : "inexact") + "; theta_minus(0.8)=" +
             num(cone.theta_minus) + " theta_plus=" + num(cone.theta_plus) + "; fan coverage=" + num(coverage);
  v.data = {{"alpha_hat", cone.alpha_hat},  {"theta_minus", cone.theta_minus}, {"theta_plus", cone.theta_plus},
            {"fan_coverage", coverage},     {"alpha_p1", full.alpha_hat},      {"zero_exact", zero_ok},
            {"p1_exact", one_ok}};
  return v;
}

inline Verdict check_critical(const Options& opt, double pc_hat) {
  const CriticalReport rep = critical_divergence(pc_hat, {64, 128, 256, 512, 1024, 2048, 4096}, 200, opt.seed, opt.workers);
  Verdict v{"C6", "critical divergence", rep.strictly_increasing && rep.ratio_below_quarter && rep.slope_ok, "", {}};
  v.detail = "p=" + num(pc_hat) + " increasing=" + (rep.strictly_increasing ? "yes" : "no") +
             " ratio=" + num(rep.ratio_last_first) + " loglog_slope=" + num(rep.loglog_slope);
  v.data = {{"p", pc_hat}, {"radii", rep.radii}, {"mean_t", rep.mean_t}, {"stderr_t", rep.stderr_t},
            {"ratio", rep.ratio_last_first}, {"loglog_slope", rep.loglog_slope}};
  return v;
}

/// r_n(p1) <= r_n(p2) at every level for p1 < p2 under shared uniforms.
inline int coupled_right_edge_violations(int trials, std::int64_t levels, const Options& opt) {
  const auto bad = parallel_map(static_cast<std::size_t>(trials), opt.workers, [&](std::size_t i) {
    const auto rep = static_cast<std::uint32_t>(i);
    rng::CounterStream pick(opt.seed, rep, rng::Stream::kResample, 3);
    double p1 = 0.5 + 0.4 * pick.next(), p2 = 0.5 + 0.4 * pick.next();
    if (p1 > p2) std::swap(p1, p2);
    const RightEdgeTrace a = right_edge_trace(p1, levels, opt.seed, rep);
    const RightEdgeTrace b = right_edge_trace(p2, levels, opt.seed, rep);
    for (std::size_t n = 0; n < a.r.size(); ++n) {
      const bool a_dead = !a.r[n], b_dead = !b.r[n];
      if (b_dead && !a_dead) return 1;
      if (!a_dead && !b_dead && *a.r[n] > *b.r[n]) return 1;
    }
    return 0;
  });
  return static_cast<int>(std::count(bad.begin(), bad.end(), 1));
}

inline Verdict check_right_edge(const Options& opt, std::vector<double>* estimates_out = nullptr) {
  std::vector<double> estimates;
  PcOptions po;
  po.workers = opt.workers;
  for (std::uint64_t k = 0; k < 5; ++k) estimates.push_back(estimate_pc(10000, 0.01, opt.seed + k, po).p_hat);
  const auto [lo, hi] = std::minmax_element(estimates.begin(), estimates.end());
  const double spread = *hi - *lo;
  const int violations = coupled_right_edge_violations(1000, 500, opt);
  Verdict v{"C7", "critical probability and right-edge monotonicity", spread <= 0.01 && violations == 0, "", {}};
  std::string list;
  for (double e : estimates) list += (list.empty() ? "" : ",") + num(e);
  v.detail = "p_c estimates=[" + list + "] spread=" + num(spread) + " literature=" + num(kLiteraturePc) +
             " coupled violations=" + std::to_string(violations) + "/1000";
  v.data = {{"estimates", estimates}, {"spread", spread}, {"literature", kLiteraturePc}, {"violations", violations}};
  if (estimates_out) *estimates_out = estimates;
  return v;
}

inline Verdict check_coupling(const Options& opt) {
  const double pc = opt.pc_hat.value_or(kLiteraturePc);
  const double h = 1.0, eps = 0.05;
  const auto base = EdgeTimeDistribution::atoms({{0.0, pc}, {h, 0.2}, {2.0, 0.8 - pc}});
  const GEpsilonSpec spec(base, h, eps);
  const Sampler sample(base);
  constexpr std::uint64_t kDraws = 1000000;
  std::uint64_t zero = 0, at_h = 0, above = 0, edge_violations = 0;
  rng::CounterStream stream(opt.seed, 0, rng::Stream::kCouplingDraws);
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    const double t = sample(stream.next());
    const CoupledPair pr = couple_g_epsilon(spec, t, stream.next());
    if (pr.g == 0.0) ++zero;
    else if (pr.g == h) ++at_h;
    else ++above;
    const double bound = pr.g + ((pr.t == h && pr.g == 0.0) ? h : 0.0);
    if (!(pr.t <= bound)) ++edge_violations;
  }
  const double expected[3] = {pc + eps, 0.2 - eps, 1.0 - (pc + 0.2)};
  const std::uint64_t counts[3] = {zero, at_h, above};
  double worst_z = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double n = static_cast<double>(kDraws);
    const double sd = std::sqrt(expected[k] * (1 - expected[k]) / n);
    worst_z = std::max(worst_z, std::abs(static_cast<double>(counts[k]) / n - expected[k]) / sd);
  }
  // Pathwise ordering: the coupled g-field against its t-field, and
  // inverse-CDF pairs with F1 <= F2.
  const GridSpec grid(48, 48);
  int field_violations = 0;
  const std::vector<std::pair<EdgeTimeDistribution, EdgeTimeDistribution>> pairs{
      {EdgeTimeDistribution::bernoulli01(0.5), EdgeTimeDistribution::bernoulli01(0.7)},
      {EdgeTimeDistribution::exponential(1.0), EdgeTimeDistribution::exponential(2.0)},
      {base, spec.g_distribution()}};
  for (std::uint32_t rep = 0; rep < 100; ++rep) {
    const EdgeField t_field = generate_field(grid, base, opt.seed, rep);
    const EdgeField g_field = build_field(grid, opt.seed, rep, {"g", opt.seed, rep}, [&](double u, double aux) {
      return couple_g_epsilon(spec, sample(u), aux).g;
    });
    const PassageField tt = compute_passage(t_field), tg = compute_passage(g_field);
    bool ok = true;
    for (std::size_t i = 0; i < tt.time.size(); ++i) ok = ok && tg.time[i] <= tt.time[i];
    for (const auto& [f1, f2] : pairs) {
      const PassageField a = compute_passage(generate_field(grid, f1, opt.seed, rep));
      const PassageField b = compute_passage(generate_field(grid, f2, opt.seed, rep));
      for (std::size_t i = 0; i < a.time.size(); ++i) ok = ok && b.time[i] <= a.time[i];
    }
    if (!ok) ++field_violations;
  }
  const bool pass = worst_z <= 4.0 && edge_violations == 0 && field_violations == 0;
  Verdict v{"C10", "coupling marginals and pathwise ordering", pass, "", {}};
  v.detail = "freq(g=0)=" + num(zero / 1e6) + " freq(g=h)=" + num(at_h / 1e6) + " freq(g>h)=" + num(above / 1e6) +
             " max|z|=" + num(worst_z) + " edge violations=" + std::to_string(edge_violations) +
             " field violations=" + std::to_string(field_violations) + "/100";
  v.data = {{"p_c", pc},         {"counts", {zero, at_h, above}},      {"expected", {expected[0], expected[1], expected[2]}},
            {"max_z", worst_z}, {"edge_violations", edge_violations}, {"field_violations", field_violations}};
  return v;
}

inline Verdict check_growth(const Options& opt) {
  constexpr int kSplit = 10000;
  const auto second = parallel_map(kSplit, opt.workers, [&](std::size_t i) {
    return grow(2, opt.seed, static_cast<std::uint32_t>(i)).trajectory[1].x == 1 ? 1 : 0;
  });
  const double horizontal = static_cast<double>(std::count(second.begin(), second.end(), 1)) / kSplit;
  const double z = std::abs(horizontal - 0.5) / std::sqrt(0.25 / kSplit);
  double enum_gap = 0.0;
  for (std::int64_t n = 1; n <= 4; ++n) {
    const auto chain = enumerate_growth_law(n, GrowthRule::kEdgeProportional);
    const auto race = enumerate_race_law(n, false);
    if (chain.size() != race.size()) enum_gap = 1.0;
    for (const auto& [shape, prob] : chain) {
      const auto it = race.find(shape);
      enum_gap = std::max(enum_gap, it == race.end() ? 1.0 : std::abs(it->second - prob));
    }
  }
  const Occupancy direct = growth_occupancy(10, 5000, opt.seed, opt.workers);
  const Occupancy edge_fpp = fpp_occupancy(10, 5000, opt.seed + 1, opt.workers, false);
  const Occupancy vertex_fpp = fpp_occupancy(10, 5000, opt.seed + 1, opt.workers, true);
  const double tv = total_variation(direct, edge_fpp);
  const double tv_vertex = total_variation(direct, vertex_fpp);
  const bool pass = z <= 4.0 && enum_gap <= 1e-12 && tv < 0.05;
  Verdict v{"C11", "growth model", pass, "", {}};
  v.detail = "horizontal split=" + num(horizontal) + " (|z|=" + num(z) + "); enumeration gap=" + num(enum_gap) +
             "; TV(growth, edge-clock fpp)=" + num(tv) + "; TV(growth, vertex-clock fpp)=" + num(tv_vertex);
  v.data = {{"horizontal", horizontal}, {"z", z}, {"enumeration_gap", enum_gap}, {"tv", tv}, {"tv_vertex_clocks", tv_vertex}};
  return v;
}

/// Discrete convexity and transposition symmetry of mu-hat over the default
/// grid for p0 = 0.4 and 0.8.
inline Verdict check_convexity_symmetry(const Options& opt) {
  bool ok = true;
  std::string detail;
  json laws = json::array();
  const auto grid = default_theta_grid();
  const double z = stats::normal_quantile(0.995);
  for (double p0 : {0.4, 0.8}) {
    const auto dist = EdgeTimeDistribution::bernoulli01(p0);
    std::vector<MuEstimate> ests;
    for (double theta : grid) ests.push_back(estimate_mu(dist, theta, {256, 512}, 200, opt.seed, opt.workers));
    const ConvexityReport conv = convexity_check(ests);
    int asym = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size() / 2; ++i) {
      const MuEstimate& a = ests[i];
      const MuEstimate& b = ests[grid.size() - 1 - i];
      const double gap = std::abs(a.mu_hat - b.mu_hat) / std::max(1e-300, std::hypot(a.mu_stderr, b.mu_stderr));
      worst = std::max(worst, a.mu_hat == b.mu_hat ? 0.0 : gap);
      if (a.mu_hat != b.mu_hat && gap > z) ++asym;
    }
    ok = ok && conv.passes() && asym == 0;
    json mus = json::array();
    for (const auto& e : ests) mus.push_back({{"theta", e.theta}, {"mu_hat", e.mu_hat}, {"stderr", e.mu_stderr}});
    laws.push_back({{"p0", p0}, {"mu", mus}, {"convexity_violations", conv.violations.size()}, {"asymmetric_pairs", asym}});
    detail += (detail.empty() ? "" : "; ") + ("p0=" + num(p0) + " convexity violations=" +
                                              std::to_string(conv.violations.size()) + " max symmetry z=" + num(worst));
  }
  return {"C12", "convexity and symmetry of mu-hat", ok, detail, {{"laws", laws}}};
}

// ---------------------------------------------------------------------------
// Suites

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"structure", "subcritical", "supercritical", "critical",
                                              "oriented",  "coupling",    "growth"};
  return names;
}

inline void render_suite(SuiteResult& res, const Options& opt) {
  const json config = {{"suite", res.suite}, {"seed", opt.seed}, {"pc_hat", opt.pc_hat ? json(*opt.pc_hat) : json()}};
  const std::string hash = io::config_hash(config);
  io::CsvTable table({"criterion", "name", "pass", "detail"});
  json verdicts = json::array();
  for (const Verdict& v : res.verdicts) {
    table.add(v.id, v.name, v.pass, v.detail);
    verdicts.push_back({{"criterion", v.id}, {"name", v.name}, {"pass", v.pass}, {"detail", v.detail}, {"data", v.data}});
  }
  res.files[res.suite + "_verdicts.csv"] = table.render(hash);
  res.files[res.suite + "_report.json"] = io::render_json({{"config", config}, {"verdicts", verdicts}}, hash);
}

inline SuiteResult run_suite(const std::string& name, Options opt) {
  SuiteResult res;
  res.suite = name;
  auto& v = res.verdicts;
  if (name == "structure") {
    v = {check_dp_correctness(opt), check_point_mass(opt), check_ball_structure(opt)};
  } else if (name == "subcritical") {
    v = {check_subcritical(opt), check_convexity_symmetry(opt)};
  } else if (name == "supercritical") {
    opt.pc_hat = resolve_pc(opt);
    v = {check_supercritical_cone(opt, *opt.pc_hat), check_supercritical_off_cone(opt), check_cone_calibration(opt)};
  } else if (name == "critical") {
    opt.pc_hat = resolve_pc(opt);
    v = {check_critical(opt, *opt.pc_hat)};
  } else if (name == "oriented") {
    v = {check_right_edge(opt)};
  } else if (name == "coupling") {
    v = {check_coupling(opt)};
  } else if (name == "growth") {
    v = {check_growth(opt)};
  } else {
    throw UnknownSuite("unknown suite '" + name + "'");
  }
  render_suite(res, opt);
  return res;
}

}  // namespace dfpp::verify
