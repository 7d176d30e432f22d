#pragma once

// Directed passage times by dynamic programming over the NE DAG, optimal
// paths, tau-passage times, the balls B_tau(t), their directed boundaries and
// shape radii along rays.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dfpp/distributions.hpp"
#include "dfpp/lattice.hpp"

namespace dfpp {

enum class Parent : std::uint8_t { kOrigin, kFromWest, kFromSouth, kUnreachable };

template <class T>
constexpr T unreachable_time() {
  if constexpr (std::numeric_limits<T>::has_infinity) return std::numeric_limits<T>::infinity();
  else return std::numeric_limits<T>::max() / 2;
}

/// DP table over a window: `time` is the passage time from `root`, `parent`
/// the achieving predecessor (ties go to the west neighbour).
template <class T>
struct PassageTable {
  GridSpec grid;
  Vertex root;
  std::vector<T> time;
  std::vector<Parent> parent;

  T at(Vertex v) const { return time[grid.index(v)]; }
  T at(std::int64_t x, std::int64_t y) const { return time[grid.index({x, y})]; }
  Parent parent_of(Vertex v) const { return parent[grid.index(v)]; }
};

using PassageField = PassageTable<double>;
using TauField = PassageTable<std::int32_t>;

namespace detail {

template <class T, class EastW, class NorthW>
PassageTable<T> sweep(const GridSpec& grid, Vertex root, EastW&& east, NorthW&& north) {
  if (!grid.contains(root)) throw std::out_of_range("passage: root outside grid");
  constexpr T kInf = unreachable_time<T>();
  PassageTable<T> out{grid, root, std::vector<T>(grid.vertex_count(), kInf),
                      std::vector<Parent>(grid.vertex_count(), Parent::kUnreachable)};
  out.time[grid.index(root)] = T{0};
  out.parent[grid.index(root)] = Parent::kOrigin;
  for (std::int64_t y = root.y; y <= grid.height; ++y) {
    for (std::int64_t x = root.x; x <= grid.width; ++x) {
      if (x == root.x && y == root.y) continue;
      T best = kInf;
      Parent via = Parent::kUnreachable;
      if (x > root.x) {
        best = out.time[grid.index({x - 1, y})] + east(x - 1, y);
        via = Parent::kFromWest;
      }
      if (y > root.y) {
        const T cand = out.time[grid.index({x, y - 1})] + north(x, y - 1);
        if (cand < best) {
          best = cand;
          via = Parent::kFromSouth;
        }
      }
      out.time[grid.index({x, y})] = best;
      out.parent[grid.index({x, y})] = via;
    }
  }
  return out;
}

}  // namespace detail

/// T(0, v) for every vertex of the window, one row-major sweep.
inline PassageField compute_passage(const EdgeField& field) {
  return detail::sweep<double>(
      field.grid(), {0, 0}, [&](auto x, auto y) { return field.east(x, y); },
      [&](auto x, auto y) { return field.north(x, y); });
}

/// T(root, v); vertices not NE of the root stay unreachable.
inline PassageField compute_passage_from(const EdgeField& field, Vertex root) {
  return detail::sweep<double>(
      field.grid(), root, [&](auto x, auto y) { return field.east(x, y); },
      [&](auto x, auto y) { return field.north(x, y); });
}

/// Passage times for tau(e) = 1{t(e) > 0}: the fewest positive-weight edges
/// on any NE path.
inline TauField compute_tau(const EdgeField& field) {
  return detail::sweep<std::int32_t>(
      field.grid(), {0, 0}, [&](auto x, auto y) { return field.east(x, y) > 0.0 ? 1 : 0; },
      [&](auto x, auto y) { return field.north(x, y) > 0.0 ? 1 : 0; });
}

/// T(0, target) without materializing the field: weights are drawn on the fly
/// from the coordinate-keyed uniforms, keeping one row of times and one row of
/// north weights. `weight` maps a uniform to an edge time.
template <class WeightOfUniform>
double streaming_passage_time(std::uint64_t seed, std::uint32_t replicate, Vertex target, WeightOfUniform&& weight) {
  if (target.x < 0 || target.y < 0) throw std::out_of_range("streaming_passage_time: target outside quadrant");
  const auto w = static_cast<std::size_t>(target.x);
  std::vector<double> row(w + 1, 0.0);
  std::vector<double> north(w + 1, 0.0);
  for (std::int64_t y = 0; y <= target.y; ++y) {
    double west = 0.0;
    for (std::size_t x = 0; x <= w; ++x) {
      const auto u = edge_uniforms(seed, replicate, static_cast<std::int64_t>(x), y);
      double t;
      if (y == 0) {
        t = x == 0 ? 0.0 : west;
      } else {
        t = row[x] + north[x];
        if (x > 0) t = std::min(t, west);
      }
      row[x] = t;
      if (x < w) west = t + weight(u[0]);
      north[x] = weight(u[1]);
    }
  }
  return row[w];
}

/// Vertices of the NE path from the root to `target` selected by the
/// back-pointers; length x + y + 1 when rooted at the origin.
template <class T>
std::vector<Vertex> optimal_path(const PassageTable<T>& table, Vertex target) {
  if (!table.grid.contains(target)) throw std::out_of_range("optimal_path: target outside grid");
  if (table.parent_of(target) == Parent::kUnreachable) throw std::out_of_range("optimal_path: target unreachable");
  std::vector<Vertex> path{target};
  Vertex v = target;
  while (table.parent_of(v) != Parent::kOrigin) {
    v = table.parent_of(v) == Parent::kFromWest ? Vertex{v.x - 1, v.y} : Vertex{v.x, v.y - 1};
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

/// Consecutive edges of a vertex path.
inline std::vector<Edge> path_edges(const std::vector<Vertex>& path) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < path.size(); ++i)
    edges.push_back({path[i - 1], path[i].x > path[i - 1].x ? Orientation::kEast : Orientation::kNorth});
  return edges;
}

inline double path_weight(const EdgeField& field, const std::vector<Vertex>& path) {
  double total = 0.0;
  for (const Edge& e : path_edges(path)) total += field.weight(e);
  return total;
}

// ---------------------------------------------------------------------------
// Directed sets and balls

/// Membership bitmap over the window vertices.
class DirectedSet {
 public:
  DirectedSet(GridSpec grid, std::int64_t threshold) : grid_(grid), member_(grid.vertex_count(), 0), threshold_(threshold) {}

  const GridSpec& grid() const { return grid_; }
  std::int64_t threshold() const { return threshold_; }
  bool contains(Vertex v) const { return grid_.contains(v) && member_[grid_.index(v)] != 0; }
  void insert(Vertex v) { member_[grid_.index(v)] = 1; }
  void erase(Vertex v) { member_[grid_.index(v)] = 0; }

  std::size_t size() const { return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), 1)); }

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    for (std::int64_t y = 0; y <= grid_.height; ++y)
      for (std::int64_t x = 0; x <= grid_.width; ++x)
        if (member_[grid_.index({x, y})]) out.push_back({x, y});
    return out;
  }

  /// Every member is reached from the origin by a NE path inside the set.
  bool is_directly_connected() const {
    if (!contains({0, 0})) return false;
    std::vector<std::uint8_t> reach(member_.size(), 0);
    for (std::int64_t y = 0; y <= grid_.height; ++y) {
      for (std::int64_t x = 0; x <= grid_.width; ++x) {
        const auto i = grid_.index({x, y});
        if (!member_[i]) continue;
        const bool r = (x == 0 && y == 0) || (x > 0 && reach[grid_.index({x - 1, y})]) ||
                       (y > 0 && reach[grid_.index({x, y - 1})]);
        reach[i] = r ? 1 : 0;
        if (!r) return false;
      }
    }
    return true;
  }

  const std::vector<std::uint8_t>& bitmap() const { return member_; }

  friend bool operator==(const DirectedSet& a, const DirectedSet& b) {
    return a.grid_ == b.grid_ && a.member_ == b.member_;
  }

 private:
  GridSpec grid_;
  std::vector<std::uint8_t> member_;
  std::int64_t threshold_;
};

class BallTruncated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RayTruncated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {v in window : T(v) <= t} with no truncation check.
template <class T>
DirectedSet sublevel_set(const PassageTable<T>& table, T t) {
  DirectedSet s(table.grid, static_cast<std::int64_t>(t));
  for (std::int64_t y = 0; y <= table.grid.height; ++y)
    for (std::int64_t x = 0; x <= table.grid.width; ++x)
      if (table.at(x, y) <= t) s.insert({x, y});
  return s;
}

/// B_tau(t). Throws BallTruncated when a member touches x = W or y = H, since
/// the window then no longer represents the ball of the infinite lattice.
inline DirectedSet ball(const TauField& tf, std::int32_t t) {
  if (t < 0) throw std::invalid_argument("ball: t must be nonnegative");
  DirectedSet s = sublevel_set(tf, t);
  const auto& g = tf.grid;
  for (std::int64_t x = 0; x <= g.width; ++x)
    if (s.contains({x, g.height})) throw BallTruncated("ball: member on the top window edge");
  for (std::int64_t y = 0; y <= g.height; ++y)
    if (s.contains({g.width, y})) throw BallTruncated("ball: member on the right window edge");
  return s;
}

struct Boundaries {
  std::vector<Vertex> inner;  // members with a non-member N or E neighbour
  std::vector<Vertex> outer;  // those non-member neighbours
  std::vector<Edge> edges;    // the NE edges joining them
};

/// Directed boundary sets. Neighbours beyond the window are reported by
/// coordinate; a set that is not a truncated ball never produces them.
inline Boundaries boundaries(const DirectedSet& s) {
  if (!s.contains({0, 0})) throw std::invalid_argument("boundaries: set must contain the origin");
  Boundaries b;
  for (const Vertex& v : s.members()) {
    bool is_boundary = false;
    for (Orientation dir : {Orientation::kEast, Orientation::kNorth}) {
      const Edge e{v, dir};
      if (!s.contains(e.to())) {
        is_boundary = true;
        b.edges.push_back(e);
        b.outer.push_back(e.to());
      }
    }
    if (is_boundary) b.inner.push_back(v);
  }
  std::sort(b.outer.begin(), b.outer.end());
  b.outer.erase(std::unique(b.outer.begin(), b.outer.end()), b.outer.end());
  std::sort(b.edges.begin(), b.edges.end());
  return b;
}

/// Edges whose weights decide the event {B = set}: edges with both ends in
/// the set plus the outgoing boundary edges. Everything else may be resampled.
inline bool edge_decides_set(const DirectedSet& s, const Edge& e) { return s.contains(e.from); }

/// Radius of the last vertex on the ray at angle theta that lies in C'_t.
/// The ray is scanned at unit steps in r, then the exit point is bisected to
/// 1e-3; the returned value is the Euclidean norm of the boundary vertex found.
inline double shape_boundary_radius(const PassageField& pf, double t, double theta) {
  constexpr double kResolution = 1e-3;
  const auto in_shape = [&](double r) {
    const Vertex v = nearest_vertex(PolarPoint(r, theta));
    return pf.grid.contains(v) && pf.at(v) <= t;
  };
  double last_in = 0.0;
  for (double r = 0.0;; r += 1.0) {
    const Vertex v = nearest_vertex(PolarPoint(r, theta));
    if (!pf.grid.contains(v)) break;
    if (pf.at(v) <= t) {
      if (pf.grid.on_far_boundary(v)) throw RayTruncated("shape_boundary_radius: shape reaches the window edge");
      last_in = r;
    }
  }
  double lo = last_in;
  double hi = last_in + 1.0;
  while (hi - lo > kResolution) {
    const double mid = 0.5 * (lo + hi);
    (in_shape(mid) ? lo : hi) = mid;
  }
  const Vertex v = nearest_vertex(PolarPoint(lo, theta));
  return std::hypot(static_cast<double>(v.x), static_cast<double>(v.y));
}

}  // namespace dfpp
