#pragma once

// Directed growth of unit cells and its first-passage representation.
// Cell (i, j) is identified with vertex (i, j).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "dfpp/lattice.hpp"
#include "dfpp/parallel.hpp"
#include "dfpp/philox.hpp"

namespace dfpp {

using Cell = Vertex;

inline constexpr std::uint8_t kFromWest = 1;   // the east edge of (x-1, y) is exposed
inline constexpr std::uint8_t kFromSouth = 2;  // the north edge of (x, y-1) is exposed

/// How a boundary cell is weighted when the next cell is chosen.
enum class GrowthRule : std::uint8_t {
  kEdgeProportional,  // one unit per exposed NE edge
  kCellUniform,       // one unit per boundary cell
};

struct GrowthState {
  std::set<Cell> occupied;
  std::map<Cell, std::uint8_t> boundary;  // unoccupied cell -> exposed NE edges leading into it
  std::vector<Cell> trajectory;           // cells in order of occupation
  std::int64_t n() const { return static_cast<std::int64_t>(occupied.size()); }

  static GrowthState initial() {
    GrowthState s;
    s.occupied.insert({0, 0});
    s.trajectory.push_back({0, 0});
    s.boundary[{1, 0}] = kFromWest;
    s.boundary[{0, 1}] = kFromSouth;
    return s;
  }

  std::int64_t exposed_edges() const {
    std::int64_t total = 0;
    for (const auto& [cell, mask] : boundary) total += std::popcount(mask);
    return total;
  }
};

/// NE boundary rebuilt from the occupied set alone.
inline std::map<Cell, std::uint8_t> recompute_boundary(const std::set<Cell>& occupied) {
  std::map<Cell, std::uint8_t> out;
  for (const Cell& c : occupied) {
    const Cell east{c.x + 1, c.y};
    const Cell north{c.x, c.y + 1};
    if (!occupied.contains(east)) out[east] |= kFromWest;
    if (!occupied.contains(north)) out[north] |= kFromSouth;
  }
  return out;
}

inline double selection_weight(std::uint8_t mask, GrowthRule rule) {
  return rule == GrowthRule::kEdgeProportional ? std::popcount(mask) : 1.0;
}

/// Occupies `cell` (which must be on the boundary) and updates the boundary.
inline void occupy(GrowthState& s, const Cell& cell) {
  if (!s.boundary.erase(cell)) throw std::invalid_argument("occupy: cell is not on the NE boundary");
  s.occupied.insert(cell);
  s.trajectory.push_back(cell);
  const Cell east{cell.x + 1, cell.y};
  const Cell north{cell.x, cell.y + 1};
  if (!s.occupied.contains(east)) s.boundary[east] |= kFromWest;
  if (!s.occupied.contains(north)) s.boundary[north] |= kFromSouth;
}

/// One step of the growth chain; `u` is a uniform in (0, 1).
inline void growth_step(GrowthState& s, double u, GrowthRule rule = GrowthRule::kEdgeProportional) {
  double total = 0.0;
  for (const auto& [cell, mask] : s.boundary) total += selection_weight(mask, rule);
  double target = u * total;
  Cell chosen = s.boundary.rbegin()->first;
  for (const auto& [cell, mask] : s.boundary) {
    const double w = selection_weight(mask, rule);
    if (target < w) {
      chosen = cell;
      break;
    }
    target -= w;
  }
  occupy(s, chosen);
}

/// A_n for one replicate, driven by the growth stream.
inline GrowthState grow(std::int64_t n, std::uint64_t seed, std::uint32_t replicate,
                        GrowthRule rule = GrowthRule::kEdgeProportional) {
  if (n < 1) throw std::invalid_argument("grow: n must be >= 1");
  GrowthState s = GrowthState::initial();
  rng::CounterStream stream(seed, replicate, rng::Stream::kGrowth);
  while (s.n() < n) growth_step(s, stream.next(), rule);
  return s;
}

// ---------------------------------------------------------------------------
// First-passage representation

class WindowExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponential(1) clock per vertex of a window.
class VertexClockField {
 public:
  VertexClockField(GridSpec grid, std::uint64_t seed, std::uint32_t replicate) : grid_(grid), clock_(grid.vertex_count()) {
    for (std::int64_t y = 0; y <= grid.height; ++y)
      for (std::int64_t x = 0; x <= grid.width; ++x) {
        const double u = rng::site_uniforms(seed, replicate, x, y, rng::Stream::kVertexClock)[0];
        clock_[grid.index({x, y})] = -std::log1p(-u);
      }
  }
  const GridSpec& grid() const { return grid_; }
  double clock(Vertex v) const { return clock_[grid_.index(v)]; }

 private:
  GridSpec grid_;
  std::vector<double> clock_;
};

struct FppGrowth {
  std::vector<Cell> cells;  // in order of occupation; cells[0] is the origin
  double t_n = 0.0;         // occupation time of the n-th cell
};

namespace detail {

/// Dijkstra over NE adjacency; `cost(from, to)` is the delay for `to`
/// once `from` is occupied.
template <class Cost>
FppGrowth dijkstra_growth(const GridSpec& grid, std::int64_t n, Cost&& cost) {
  if (n < 1) throw std::invalid_argument("fpp_growth: n must be >= 1");
  using Item = std::pair<double, Cell>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<double> best(grid.vertex_count(), std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> done(grid.vertex_count(), 0);
  FppGrowth out;
  heap.push({0.0, {0, 0}});
  best[grid.index({0, 0})] = 0.0;
  while (static_cast<std::int64_t>(out.cells.size()) < n) {
    if (heap.empty()) throw WindowExceeded("fpp_growth: no reachable cells left");
    const auto [t, c] = heap.top();
    heap.pop();
    const auto ci = grid.index(c);
    if (done[ci]) continue;
    if (grid.on_far_boundary(c)) throw WindowExceeded("fpp_growth: growth reached the window edge");
    done[ci] = 1;
    out.cells.push_back(c);
    out.t_n = t;
    for (const Cell next : {Cell{c.x + 1, c.y}, Cell{c.x, c.y + 1}}) {
      const double cand = t + cost(c, next);
      auto& b = best[grid.index(next)];
      if (cand < b) {
        b = cand;
        heap.push({cand, next});
      }
    }
  }
  return out;
}

}  // namespace detail

/// Vertex clocks: a vertex is occupied one clock after its first NE
/// predecessor. Every boundary cell races at rate 1, so this realizes the
/// cell-uniform chain.
inline FppGrowth fpp_growth(const VertexClockField& clocks, std::int64_t n) {
  return detail::dijkstra_growth(clocks.grid(), n, [&](Cell, Cell to) { return clocks.clock(to); });
}

/// Edge clocks: an Exp(1) passage time per NE edge; a cell with two exposed
/// edges races at rate 2, which realizes the edge-proportional chain.
inline FppGrowth fpp_growth(const EdgeField& field, std::int64_t n) {
  return detail::dijkstra_growth(field.grid(), n, [&](Cell from, Cell to) {
    return to.x > from.x ? field.east(from.x, from.y) : field.north(from.x, from.y);
  });
}

inline EdgeField exponential_edge_clocks(GridSpec grid, std::uint64_t seed, std::uint32_t replicate) {
  return generate_field(grid, EdgeTimeDistribution::exponential(1.0), seed, replicate);
}

/// A window that always contains the first n cells of any growth.
inline GridSpec growth_window(std::int64_t n) { return GridSpec(n + 1, n + 1); }

// ---------------------------------------------------------------------------
// Exact laws for small n

using Shape = std::set<Cell>;

/// Law of A_n under the growth chain, by enumerating every trajectory.
inline std::map<Shape, double> enumerate_growth_law(std::int64_t n, GrowthRule rule) {
  std::map<Shape, double> out;
  const std::function<void(const GrowthState&, double)> walk = [&](const GrowthState& s, double prob) {
    if (s.n() == n) {
      out[s.occupied] += prob;
      return;
    }
    double total = 0.0;
    for (const auto& [cell, mask] : s.boundary) total += selection_weight(mask, rule);
    for (const auto& [cell, mask] : s.boundary) {
      GrowthState next = s;
      occupy(next, cell);
      walk(next, prob * selection_weight(mask, rule) / total);
    }
  };
  walk(GrowthState::initial(), 1.0);
  return out;
}

/// Law of the first n occupied cells under exponential races, with the rate
/// of each candidate counted from its occupied NE predecessors: one clock per
/// predecessor edge for edge clocks, one clock per cell for vertex clocks.
inline std::map<Shape, double> enumerate_race_law(std::int64_t n, bool vertex_clocks) {
  std::map<Shape, double> out;
  const std::function<void(const Shape&, double)> walk = [&](const Shape& occ, double prob) {
    if (static_cast<std::int64_t>(occ.size()) == n) {
      out[occ] += prob;
      return;
    }
    std::map<Cell, double> rate;
    for (const Cell& c : occ)
      for (const Cell next : {Cell{c.x + 1, c.y}, Cell{c.x, c.y + 1}})
        if (!occ.contains(next)) rate[next] = vertex_clocks ? 1.0 : rate[next] + 1.0;
    double total = 0.0;
    for (const auto& [cell, r] : rate) total += r;
    for (const auto& [cell, r] : rate) {
      Shape next = occ;
      next.insert(cell);
      walk(next, prob * r / total);
    }
  };
  walk({{0, 0}}, 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Occupancy histograms

/// Per-cell occupation counts over replicates, with total replicate count.
struct Occupancy {
  std::int64_t n = 0;
  std::int64_t replicates = 0;
  std::map<Cell, std::int64_t> counts;

  double frequency(const Cell& c) const {
    const auto it = counts.find(c);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(replicates);
  }
};

template <class CellsOf>
Occupancy occupancy(std::int64_t n, int replicates, unsigned workers, CellsOf&& cells_of) {
  const auto all = parallel_map(static_cast<std::size_t>(replicates), workers,
                                [&](std::size_t i) { return cells_of(static_cast<std::uint32_t>(i)); });
  Occupancy occ{n, replicates, {}};
  for (const auto& cells : all)
    for (const Cell& c : cells) ++occ.counts[c];
  return occ;
}

inline Occupancy growth_occupancy(std::int64_t n, int replicates, std::uint64_t seed, unsigned workers = 0,
                                  GrowthRule rule = GrowthRule::kEdgeProportional) {
  return occupancy(n, replicates, workers, [&](std::uint32_t rep) { return grow(n, seed, rep, rule).trajectory; });
}

inline Occupancy fpp_occupancy(std::int64_t n, int replicates, std::uint64_t seed, unsigned workers = 0,
                               bool vertex_clocks = false) {
  const GridSpec grid = growth_window(n);
  return occupancy(n, replicates, workers, [&](std::uint32_t rep) {
    return vertex_clocks ? fpp_growth(VertexClockField(grid, seed, rep), n).cells
                         : fpp_growth(exponential_edge_clocks(grid, seed, rep), n).cells;
  });
}

/// Total variation between occupancy histograms normalized to probability
/// distributions over cells.
inline double total_variation(const Occupancy& a, const Occupancy& b) {
  std::set<Cell> cells;
  for (const auto& [c, k] : a.counts) cells.insert(c);
  for (const auto& [c, k] : b.counts) cells.insert(c);
  double sum = 0.0;
  for (const Cell& c : cells)
    sum += std::abs(a.frequency(c) / static_cast<double>(a.n) - b.frequency(c) / static_cast<double>(b.n));
  return 0.5 * sum;
}

/// TV distance between the histograms of n^{-1/2} A_n and (2n)^{-1/2} A_{2n},
/// binned on a square grid of side `bin`, for each n in `sizes`.
inline std::vector<double> scaling_diagnostic(const std::vector<std::int64_t>& sizes, int replicates,
                                              std::uint64_t seed, unsigned workers = 0, double bin = 0.25) {
  const auto binned = [&](std::int64_t n) {
    const Occupancy occ = growth_occupancy(n, replicates, seed, workers);
    std::map<Cell, double> h;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (const auto& [c, k] : occ.counts) {
      const Cell b{static_cast<std::int64_t>(std::floor(c.x * scale / bin)),
                   static_cast<std::int64_t>(std::floor(c.y * scale / bin))};
      h[b] += static_cast<double>(k) / static_cast<double>(n * replicates);
    }
    return h;
  };
  std::vector<double> out;
  for (std::int64_t n : sizes) {
    auto a = binned(n);
    const auto b = binned(2 * n);
    for (const auto& [c, f] : b) a[c] -= f;
    double sum = 0.0;
    for (const auto& [c, f] : a) sum += std::abs(f);
    out.push_back(0.5 * sum);
  }
  return out;
}

}  // namespace dfpp
