#pragma once

// Oriented bond percolation on the rotated lattice L = {(x, n) : x = n mod 2},
// edges (x, n) -> (x +/- 1, n + 1). Fronts, right edges, edge speed, the
// critical-probability bisection, cone angles, cluster sizes and slope-limited
// connectivity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfpp/lattice.hpp"
#include "dfpp/parallel.hpp"
#include "dfpp/philox.hpp"
#include "dfpp/stats.hpp"

namespace dfpp {

enum class SourceKind : std::uint8_t { kOrigin, kHalfLine };

inline constexpr std::int64_t kDefaultMargin = 200;

/// Literature value of the oriented bond threshold on the square lattice;
/// reported next to estimates as a sanity anchor, never used as a gate.
inline constexpr double kLiteraturePc = 0.6447;

/// Occupied sites at one level. For the half-line source, sites left of the
/// window are treated as occupied.
struct FrontState {
  std::int64_t level = 0;
  std::int64_t x_min = 0;
  std::vector<std::uint8_t> occupied;  // occupied[i] <-> site x_min + i
  SourceKind source = SourceKind::kOrigin;
  std::int64_t margin = kDefaultMargin;

  static FrontState origin() { return {0, 0, {1}, SourceKind::kOrigin, kDefaultMargin}; }

  /// (-inf, 0] restricted to L, truncated `margin` sites left of the edge.
  static FrontState half_line(std::int64_t margin = kDefaultMargin) {
    if (margin < 2) throw std::invalid_argument("half_line: margin must be >= 2");
    FrontState s{0, -margin, std::vector<std::uint8_t>(static_cast<std::size_t>(margin + 1), 0), SourceKind::kHalfLine,
                 margin};
    for (std::int64_t x = -margin; x <= 0; ++x)
      if (x % 2 == 0) s.occupied[static_cast<std::size_t>(x + margin)] = 1;
    return s;
  }

  std::int64_t x_max() const { return x_min + static_cast<std::int64_t>(occupied.size()) - 1; }

  bool contains(std::int64_t x) const {
    if (x < x_min) return source == SourceKind::kHalfLine && parity_ok(x);
    if (x > x_max()) return false;
    return occupied[static_cast<std::size_t>(x - x_min)] != 0;
  }

  bool parity_ok(std::int64_t x) const { return ((x - level) % 2 + 2) % 2 == 0; }

  bool extinct() const {
    return source == SourceKind::kOrigin && std::find(occupied.begin(), occupied.end(), 1) == occupied.end();
  }

  /// sup of the occupied set; nullopt encodes -infinity.
  std::optional<std::int64_t> right_edge() const {
    for (std::int64_t i = static_cast<std::int64_t>(occupied.size()) - 1; i >= 0; --i)
      if (occupied[static_cast<std::size_t>(i)]) return x_min + i;
    if (source == SourceKind::kHalfLine) return x_min - 1 - (parity_ok(x_min - 1) ? 0 : 1);
    return std::nullopt;
  }

  std::int64_t count() const { return std::count(occupied.begin(), occupied.end(), 1); }
};

/// Open/closed state of the two out-edges of (x, n); shared across p so that
/// fronts at different p are coupled through common uniforms.
struct OrientedEdgeDraw {
  double up_right;
  double up_left;
};

inline OrientedEdgeDraw oriented_uniforms(std::uint64_t seed, std::uint32_t replicate, std::int64_t x, std::int64_t n) {
  const auto u = rng::site_uniforms(seed, replicate, x, n, rng::Stream::kOriented);
  return {u[0], u[1]};
}

/// One level of the front. Each open edge is an independent Bernoulli(p)
/// draw keyed by the edge's tail site.
inline FrontState evolve_front(const FrontState& state, double p, std::uint64_t seed, std::uint32_t replicate) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("evolve_front: p must lie in [0, 1]");
  FrontState next;
  next.level = state.level + 1;
  next.source = state.source;
  next.margin = state.margin;
  if (state.extinct()) {
    next.x_min = 0;
    return next;
  }
  const std::int64_t r = *state.right_edge();
  // Sources considered: window sites plus the treated site(s) just left of it.
  const std::int64_t src_lo = state.source == SourceKind::kHalfLine ? state.x_min - 2 : state.x_min;
  const std::int64_t lo = src_lo - 1;
  const std::int64_t hi = r + 1;
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(hi - lo + 1), 0);
  for (std::int64_t x = src_lo; x <= r; ++x) {
    if (!state.contains(x)) continue;
    const auto draw = oriented_uniforms(seed, replicate, x, state.level);
    if (draw.up_right < p) buf[static_cast<std::size_t>(x + 1 - lo)] = 1;
    if (draw.up_left < p) buf[static_cast<std::size_t>(x - 1 - lo)] = 1;
  }
  if (state.source == SourceKind::kOrigin) {
    std::int64_t first = -1, last = -1;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(buf.size()); ++i)
      if (buf[static_cast<std::size_t>(i)]) {
        if (first < 0) first = i;
        last = i;
      }
    if (first < 0) {
      next.x_min = 0;
      return next;
    }
    next.x_min = lo + first;
    next.occupied.assign(buf.begin() + first, buf.begin() + last + 1);
    return next;
  }
  // Half-line: every site below src_lo + 1 has an unprocessed in-edge from the
  // treated region, so it is treated as occupied at the new level.
  const std::int64_t treated_below = src_lo + 1;
  std::int64_t new_r = treated_below - 1;
  for (std::int64_t x = hi; x >= treated_below; --x)
    if (buf[static_cast<std::size_t>(x - lo)]) {
      new_r = x;
      break;
    }
  if (!next.parity_ok(new_r)) --new_r;
  next.x_min = new_r - next.margin;
  next.occupied.assign(static_cast<std::size_t>(next.margin + 1), 0);
  for (std::int64_t x = next.x_min; x <= new_r; ++x) {
    const bool occ = x < treated_below ? next.parity_ok(x) : buf[static_cast<std::size_t>(x - lo)] != 0;
    next.occupied[static_cast<std::size_t>(x - next.x_min)] = occ ? 1 : 0;
  }
  return next;
}

struct RightEdgeTrace {
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t replicate = 0;
  std::vector<std::optional<std::int64_t>> r;  // r_1..r_n; nullopt = -infinity

  /// r_n / n; only meaningful while the edge is finite.
  std::optional<double> alpha_hat() const {
    if (r.empty() || !r.back()) return std::nullopt;
    return static_cast<double>(*r.back()) / static_cast<double>(r.size());
  }
};

inline RightEdgeTrace right_edge_trace(double p, std::int64_t levels, std::uint64_t seed, std::uint32_t replicate,
                                       std::int64_t margin = kDefaultMargin,
                                       SourceKind source = SourceKind::kHalfLine) {
  if (levels < 1) throw std::invalid_argument("right_edge_trace: need at least one level");
  FrontState s = source == SourceKind::kHalfLine ? FrontState::half_line(margin) : FrontState::origin();
  RightEdgeTrace trace{p, seed, replicate, {}};
  trace.r.reserve(static_cast<std::size_t>(levels));
  for (std::int64_t n = 0; n < levels; ++n) {
    s = evolve_front(s, p, seed, replicate);
    trace.r.push_back(s.right_edge());
  }
  return trace;
}

/// r_n for the half-line source, without storing the trace.
inline std::int64_t final_right_edge(double p, std::int64_t levels, std::uint64_t seed, std::uint32_t replicate,
                                     std::int64_t margin = kDefaultMargin) {
  FrontState s = FrontState::half_line(margin);
  for (std::int64_t n = 0; n < levels; ++n) s = evolve_front(s, p, seed, replicate);
  return *s.right_edge();
}

struct EdgeSpeed {
  double p = 0.0;
  std::int64_t levels = 0;
  double alpha_hat = 0.0;
  double stderr_ = 0.0;
  std::vector<std::int64_t> final_edges;  // r_n per replicate
};

inline EdgeSpeed estimate_edge_speed(double p, std::int64_t levels, int replicates, std::uint64_t seed,
                                     unsigned workers = 0, std::int64_t margin = kDefaultMargin,
                                     std::uint32_t first_replicate = 0) {
  EdgeSpeed out{p, levels, 0.0, 0.0, {}};
  out.final_edges = parallel_map(static_cast<std::size_t>(replicates), workers, [&](std::size_t i) {
    return final_right_edge(p, levels, seed, first_replicate + static_cast<std::uint32_t>(i), margin);
  });
  std::vector<double> speeds;
  for (auto rn : out.final_edges) speeds.push_back(static_cast<double>(rn) / static_cast<double>(levels));
  out.alpha_hat = stats::mean(speeds);
  out.stderr_ = stats::stderr_of_mean(speeds);
  return out;
}

// ---------------------------------------------------------------------------
// Critical probability

enum class DriftVerdict : std::uint8_t { kSubcritical, kSupercritical, kUndecided };

struct PcProbe {
  double p;
  std::int64_t levels;
  int positives;  // replicates with r_n > 0
  int replicates;
  double mean_speed;
  DriftVerdict verdict;
};

struct PcEstimate {
  double p_hat = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<PcProbe> probes;
};

struct PcOptions {
  int replicates = 32;
  int max_doublings = 4;  // n grows to levels * 2^max_doublings before giving up
  double confidence = 0.95;
  double lo = 0.0;
  double hi = 1.0;
  std::int64_t margin = kDefaultMargin;
  unsigned workers = 0;
};

class PcInconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sign test on the drift: the Wilson interval of P[r_n > 0] must exclude 1/2.
inline PcProbe classify_drift(double p, std::int64_t levels, std::uint64_t seed, const PcOptions& opt) {
  const EdgeSpeed speed = estimate_edge_speed(p, levels, opt.replicates, seed, opt.workers, opt.margin);
  const int positives =
      static_cast<int>(std::count_if(speed.final_edges.begin(), speed.final_edges.end(), [](auto r) { return r > 0; }));
  const auto ci = stats::wilson_interval(static_cast<std::uint64_t>(positives),
                                         static_cast<std::uint64_t>(opt.replicates), opt.confidence);
  DriftVerdict v = DriftVerdict::kUndecided;
  if (ci.lo > 0.5) v = DriftVerdict::kSupercritical;
  else if (ci.hi < 0.5) v = DriftVerdict::kSubcritical;
  return {p, levels, positives, opt.replicates, speed.alpha_hat, v};
}

/// Bisection on p using the right-edge drift sign; n doubles on undecided
/// probes. Returns the bracket midpoint once the bracket is narrower than
/// `tolerance`.
inline PcEstimate estimate_pc(std::int64_t levels, double tolerance, std::uint64_t seed, const PcOptions& opt = {}) {
  if (tolerance < 1e-3) throw std::invalid_argument("estimate_pc: tolerance must be >= 1e-3");
  if (levels < 1) throw std::invalid_argument("estimate_pc: levels must be positive");
  PcEstimate est{0.0, opt.lo, opt.hi, {}};
  while (est.hi - est.lo >= tolerance) {
    const double mid = 0.5 * (est.lo + est.hi);
    PcProbe probe{};
    std::int64_t n = levels;
    for (int d = 0;; ++d, n *= 2) {
      probe = classify_drift(mid, n, seed, opt);
      est.probes.push_back(probe);
      if (probe.verdict != DriftVerdict::kUndecided) break;
      if (d == opt.max_doublings)
        throw PcInconclusive("estimate_pc: drift sign undecided at p = " + std::to_string(mid) +
                             " with n = " + std::to_string(n));
    }
    (probe.verdict == DriftVerdict::kSupercritical ? est.hi : est.lo) = mid;
  }
  est.p_hat = 0.5 * (est.lo + est.hi);
  return est;
}

// ---------------------------------------------------------------------------
// Percolation cone

/// Converts the lattice-L edge speed (r_n counted in L sites, so alpha = 1 at
/// p = 1) to the alpha_p of the cone formula. Fixed by the p = 1 anchor, where
/// the cone must be the full quadrant.
inline const double kConeConventionScale = 1.0 / std::numbers::sqrt2;

struct ConeEstimate {
  double p = 0.0;
  double alpha_hat = 0.0;
  double theta_minus = 0.0;
  double theta_plus = 0.0;
  bool contains(double theta) const { return theta >= theta_minus && theta <= theta_plus; }
};

struct ConeAngles {
  double theta_minus;
  double theta_plus;
};

inline ConeAngles cone_angles(double alpha_hat, double convention_scale = kConeConventionScale) {
  constexpr double kRounding = 1e-12;
  const double a = convention_scale * alpha_hat / std::numbers::sqrt2;
  double lo = 0.5 - a;
  double hi = 0.5 + a;
  if (lo < -kRounding || hi < -kRounding) throw std::domain_error("cone_angles: edge speed outside the physical range");
  // 1/sqrt2 * 1/sqrt2 is not exactly 1/2 in floating point.
  if (std::abs(lo) <= kRounding) lo = 0.0;
  if (std::abs(hi) <= kRounding) hi = 0.0;
  const double half_pi = std::numbers::pi / 2;
  const double theta_minus = std::clamp(std::atan2(std::max(lo, 0.0), std::max(hi, 0.0)), 0.0, half_pi);
  const double theta_plus = std::clamp(std::atan2(std::max(hi, 0.0), std::max(lo, 0.0)), 0.0, half_pi);
  return {theta_minus, theta_plus};
}

inline ConeEstimate estimate_cone(double p, std::int64_t levels, int replicates, std::uint64_t seed,
                                  unsigned workers = 0, std::int64_t margin = kDefaultMargin) {
  const EdgeSpeed speed = estimate_edge_speed(p, levels, replicates, seed, workers, margin);
  const double alpha = std::clamp(speed.alpha_hat, 0.0, 1.0);
  const ConeAngles angles = cone_angles(alpha);
  return {p, speed.alpha_hat, angles.theta_minus, angles.theta_plus};
}

// ---------------------------------------------------------------------------
// Clusters and slope-limited connectivity

struct ClusterSize {
  std::int64_t size = 0;
  bool exceeded = false;  // exploration stopped at the cap
};

/// |C_0| for the cluster of the origin, explored level by level.
inline ClusterSize cluster_size(double p, std::int64_t cap, std::uint64_t seed, std::uint32_t replicate) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("cluster_size: need 0 <= p < 1");
  if (cap < 1) throw std::invalid_argument("cluster_size: cap must be positive");
  FrontState s = FrontState::origin();
  std::int64_t total = 1;
  while (total < cap) {
    s = evolve_front(s, p, seed, replicate);
    if (s.extinct()) return {total, false};
    total += s.count();
  }
  return {total, true};
}

/// Frequency with which a zero-time NE path from the origin reaches some
/// vertex u with u_x >= extent and slope u_y / u_x <= a. Edges are zero-time
/// with probability p, drawn from the same uniforms as bernoulli01(p) fields.
/// The search window is [0, 2 extent] x [0, a * 2 extent].
inline double slope_reach_frequency(double p, double a, std::int64_t extent, int replicates, std::uint64_t seed,
                                    unsigned workers = 0) {
  if (extent < 0) throw std::invalid_argument("slope_connectivity: extent must be nonnegative");
  if (extent == 0) return 1.0;
  const std::int64_t width = 2 * extent;
  const auto height = static_cast<std::int64_t>(std::floor(a * static_cast<double>(width)));
  const auto hits = parallel_map(static_cast<std::size_t>(replicates), workers, [&](std::size_t i) {
    const auto rep = static_cast<std::uint32_t>(i);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(width + 1), 0);
    std::vector<std::uint8_t> north_open(static_cast<std::size_t>(width + 1), 0);
    for (std::int64_t y = 0; y <= height; ++y) {
      std::uint8_t west_reach = 0;
      for (std::int64_t x = 0; x <= width; ++x) {
        const auto u = edge_uniforms(seed, rep, x, y);
        const auto xi = static_cast<std::size_t>(x);
        std::uint8_t reach;
        if (y == 0 && x == 0) reach = 1;
        else reach = static_cast<std::uint8_t>((y > 0 && row[xi] && north_open[xi]) || west_reach);
        row[xi] = reach;
        if (reach && x >= extent && static_cast<double>(y) <= a * static_cast<double>(x)) return 1;
        west_reach = static_cast<std::uint8_t>(reach && u[0] < p);
        north_open[xi] = static_cast<std::uint8_t>(u[1] < p);
      }
    }
    return 0;
  });
  return static_cast<double>(std::count(hits.begin(), hits.end(), 1)) / replicates;
}

/// Slope-limited connectivity; the slope bound must lie strictly below
/// the lower cone edge tan(theta_minus).
inline double slope_connectivity(double p, double a, std::int64_t extent, int replicates, std::uint64_t seed,
                                 double theta_minus_hat, unsigned workers = 0) {
  if (!(a > 0.0) || !(a < std::tan(theta_minus_hat)))
    throw std::invalid_argument("slope_connectivity: need 0 < a < tan(theta_minus)");
  return slope_reach_frequency(p, a, extent, replicates, seed, workers);
}

}  // namespace dfpp
