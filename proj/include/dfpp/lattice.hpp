#pragma once

// First-quadrant window of Z^2, realized NE edge weights and the polar-point
// to vertex map.

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <algorithm>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfpp/distributions.hpp"
#include "dfpp/philox.hpp"

namespace dfpp {

struct Vertex {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

enum class Orientation : std::uint8_t { kEast, kNorth };

/// A NE edge, identified by its tail vertex and direction.
struct Edge {
  Vertex from;
  Orientation dir;
  Vertex to() const { return dir == Orientation::kEast ? Vertex{from.x + 1, from.y} : Vertex{from.x, from.y + 1}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Vertices (x, y) with 0 <= x <= width, 0 <= y <= height.
struct GridSpec {
  std::int64_t width = 1;
  std::int64_t height = 1;

  GridSpec() = default;
  GridSpec(std::int64_t w, std::int64_t h) : width(w), height(h) {
    if (w < 1 || h < 1) throw std::invalid_argument("GridSpec: width and height must be >= 1");
  }

  std::size_t vertex_count() const { return static_cast<std::size_t>((width + 1) * (height + 1)); }
  std::size_t east_count() const { return static_cast<std::size_t>(width * (height + 1)); }
  std::size_t north_count() const { return static_cast<std::size_t>((width + 1) * height); }
  bool contains(Vertex v) const { return v.x >= 0 && v.y >= 0 && v.x <= width && v.y <= height; }
  bool on_far_boundary(Vertex v) const { return v.x == width || v.y == height; }
  std::size_t index(Vertex v) const { return static_cast<std::size_t>(v.y * (width + 1) + v.x); }
  bool has_edge(const Edge& e) const { return contains(e.from) && contains(e.to()); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct FieldProvenance {
  std::string distribution_id;
  std::uint64_t seed = 0;
  std::uint32_t replicate = 0;
};

/// Passage times on every NE edge of a window. East edge (x,y)->(x+1,y) for
/// 0 <= x < W, 0 <= y <= H; north edge (x,y)->(x,y+1) for 0 <= x <= W, 0 <= y < H.
/// Both arrays are row-major in y.
class EdgeField {
 public:
  EdgeField(GridSpec grid, FieldProvenance provenance)
      : grid_(grid), east_(grid.east_count(), 0.0), north_(grid.north_count(), 0.0), provenance_(std::move(provenance)) {}

  const GridSpec& grid() const { return grid_; }
  const FieldProvenance& provenance() const { return provenance_; }

  double east(std::int64_t x, std::int64_t y) const { return east_[east_index(x, y)]; }
  double north(std::int64_t x, std::int64_t y) const { return north_[north_index(x, y)]; }
  double& east(std::int64_t x, std::int64_t y) { return east_[east_index(x, y)]; }
  double& north(std::int64_t x, std::int64_t y) { return north_[north_index(x, y)]; }

  double weight(const Edge& e) const {
    return e.dir == Orientation::kEast ? east(e.from.x, e.from.y) : north(e.from.x, e.from.y);
  }
  double& weight(const Edge& e) {
    return e.dir == Orientation::kEast ? east(e.from.x, e.from.y) : north(e.from.x, e.from.y);
  }

  const std::vector<double>& east_data() const { return east_; }
  const std::vector<double>& north_data() const { return north_; }
  std::vector<double>& east_data() { return east_; }
  std::vector<double>& north_data() { return north_; }

  /// All east edges (row-major), then all north edges.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(east_.size() + north_.size());
    for (std::int64_t y = 0; y <= grid_.height; ++y)
      for (std::int64_t x = 0; x < grid_.width; ++x) out.push_back({{x, y}, Orientation::kEast});
    for (std::int64_t y = 0; y < grid_.height; ++y)
      for (std::int64_t x = 0; x <= grid_.width; ++x) out.push_back({{x, y}, Orientation::kNorth});
    return out;
  }

 private:
  std::size_t east_index(std::int64_t x, std::int64_t y) const {
    return static_cast<std::size_t>(y * grid_.width + x);
  }
  std::size_t north_index(std::int64_t x, std::int64_t y) const {
    return static_cast<std::size_t>(y * (grid_.width + 1) + x);
  }

  GridSpec grid_;
  std::vector<double> east_;
  std::vector<double> north_;
  FieldProvenance provenance_;
};

/// The four per-vertex uniforms (east, north, east aux, north aux). A pure
/// function of (seed, replicate, x, y), shared by every distribution.
inline std::array<double, 4> edge_uniforms(std::uint64_t seed, std::uint32_t replicate, std::int64_t x,
                                           std::int64_t y) {
  return rng::site_uniforms(seed, replicate, x, y, rng::Stream::kEdgeField);
}

/// Builds a field from a per-edge rule `weight(u_main, u_aux)`; both edges at a
/// vertex draw from the same counter block.
template <class WeightRule>
EdgeField build_field(GridSpec grid, std::uint64_t seed, std::uint32_t replicate, FieldProvenance provenance,
                      WeightRule&& weight) {
  EdgeField field(grid, std::move(provenance));
  for (std::int64_t y = 0; y <= grid.height; ++y) {
    for (std::int64_t x = 0; x <= grid.width; ++x) {
      const auto u = edge_uniforms(seed, replicate, x, y);
      if (x < grid.width) field.east(x, y) = weight(u[0], u[2]);
      if (y < grid.height) field.north(x, y) = weight(u[1], u[3]);
    }
  }
  return field;
}

inline EdgeField generate_field(GridSpec grid, const EdgeTimeDistribution& dist, std::uint64_t seed,
                                std::uint32_t replicate) {
  const Sampler sample(dist);
  return build_field(grid, seed, replicate, {dist.id(), seed, replicate},
                     [&](double u, double) { return sample(u); });
}

struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;

  PolarPoint() = default;
  PolarPoint(double radius, double angle) : r(radius), theta(angle) {
    constexpr double kHalfPi = 1.5707963267948966;
    if (!(r >= 0.0) || !(theta >= 0.0 && theta <= kHalfPi + 1e-12))
      throw std::invalid_argument("PolarPoint: need r >= 0 and theta in [0, pi/2]");
  }
};

/// Closest vertex of Z^2 to (r cos t, r sin t); exact ties go to the
/// lexicographically smaller vertex. Result is clamped to the first quadrant.
inline Vertex nearest_vertex(const PolarPoint& p) {
  const double px = p.r * std::cos(p.theta);
  const double py = p.r * std::sin(p.theta);
  const auto fx = static_cast<std::int64_t>(std::floor(px));
  const auto fy = static_cast<std::int64_t>(std::floor(py));
  Vertex best{fx, fy};
  double best_d = std::numeric_limits<double>::infinity();
  for (std::int64_t dx = 0; dx <= 1; ++dx) {
    for (std::int64_t dy = 0; dy <= 1; ++dy) {
      const Vertex v{fx + dx, fy + dy};
      const double ex = px - static_cast<double>(v.x);
      const double ey = py - static_cast<double>(v.y);
      const double d = ex * ex + ey * ey;
      if (d < best_d || (d == best_d && v < best)) {
        best = v;
        best_d = d;
      }
    }
  }
  best.x = std::max<std::int64_t>(best.x, 0);
  best.y = std::max<std::int64_t>(best.y, 0);
  return best;
}

// ---------------------------------------------------------------------------
// Debug dump: u64 W, u64 H, u64 seed, u64 replicate, u64 id length, id bytes,
// then east and north arrays as little-endian IEEE doubles.

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(bytes, 8);
}

inline std::uint64_t get_u64(std::istream& is) {
  unsigned char bytes[8];
  if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw std::runtime_error("field dump: truncated input");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

inline void put_f64(std::ostream& os, double d) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &d, sizeof d);
  put_u64(os, bits);
}

inline double get_f64(std::istream& is) {
  const std::uint64_t bits = get_u64(is);
  double d = 0.0;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

}  // namespace detail

inline void write_field_dump(std::ostream& os, const EdgeField& field) {
  const auto& g = field.grid();
  const auto& prov = field.provenance();
  detail::put_u64(os, static_cast<std::uint64_t>(g.width));
  detail::put_u64(os, static_cast<std::uint64_t>(g.height));
  detail::put_u64(os, prov.seed);
  detail::put_u64(os, prov.replicate);
  detail::put_u64(os, prov.distribution_id.size());
  os.write(prov.distribution_id.data(), static_cast<std::streamsize>(prov.distribution_id.size()));
  for (double d : field.east_data()) detail::put_f64(os, d);
  for (double d : field.north_data()) detail::put_f64(os, d);
}

inline EdgeField read_field_dump(std::istream& is) {
  const auto w = static_cast<std::int64_t>(detail::get_u64(is));
  const auto h = static_cast<std::int64_t>(detail::get_u64(is));
  FieldProvenance prov;
  prov.seed = detail::get_u64(is);
  prov.replicate = static_cast<std::uint32_t>(detail::get_u64(is));
  const auto len = detail::get_u64(is);
  if (len > (1u << 20)) throw std::runtime_error("field dump: implausible id length");
  prov.distribution_id.resize(len);
  if (!is.read(prov.distribution_id.data(), static_cast<std::streamsize>(len)))
    throw std::runtime_error("field dump: truncated id");
  EdgeField field(GridSpec(w, h), prov);
  for (double& d : field.east_data()) d = detail::get_f64(is);
  for (double& d : field.north_data()) d = detail::get_f64(is);
  return field;
}

}  // namespace dfpp
