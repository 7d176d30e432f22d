#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Every random quantity in the library is a pure function of
// (master seed, counter). Counters carry lattice coordinates, the replicate
// index and a stream tag, so a realization never depends on draw order,
// window size or worker count.

#include <array>
#include <cstdint>

namespace dfpp::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;
using Block = std::array<std::uint32_t, 4>;

namespace detail {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

constexpr Block round(Block ctr, Key key) {
  std::uint32_t hi0 = 0, lo0 = 0, hi1 = 0, lo1 = 0;
  mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
  mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

constexpr Block philox4x32(Counter ctr, Key key) {
  for (int i = 0; i < 9; ++i) {
    ctr = detail::round(ctr, key);
    key[0] += detail::kPhiloxW0;
    key[1] += detail::kPhiloxW1;
  }
  return detail::round(ctr, key);
}

constexpr Key key_from_seed(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Maps a 32-bit word to the open interval (0, 1).
constexpr double to_unit(std::uint32_t word) {
  return (static_cast<double>(word) + 0.5) * 0x1p-32;
}

/// Stream tags occupy the last counter word. Distinct purposes never share
/// a counter, so adding a consumer cannot perturb existing realizations.
enum class Stream : std::uint32_t {
  kEdgeField = 0,     // lanes: east, north, east aux, north aux
  kResample = 1,      // replacement edge weights (locality checks)
  kOriented = 2,      // lanes: up-right, up-left
  kGrowth = 3,        // sequential growth choices
  kBootstrap = 4,
  kCouplingDraws = 5,
  kVertexClock = 6,
};

constexpr std::uint32_t stream_word(Stream s, std::uint32_t replicate_hi = 0) {
  return static_cast<std::uint32_t>(s) | (replicate_hi << 8);
}

/// Four uniforms attached to one lattice site.
inline std::array<double, 4> site_uniforms(std::uint64_t seed, std::uint32_t replicate,
                                           std::int64_t x, std::int64_t y, Stream stream) {
  const Block b = philox4x32({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                              replicate, stream_word(stream)},
                             key_from_seed(seed));
  return {to_unit(b[0]), to_unit(b[1]), to_unit(b[2]), to_unit(b[3])};
}

/// Sequential uniforms for inherently ordered processes (growth, bootstrap).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t replicate, Stream stream, std::uint32_t tag = 0)
      : key_(key_from_seed(seed)), replicate_(replicate), stream_(stream), tag_(tag) {}

  double next() {
    if (lane_ == 4) {
      block_ = philox4x32({static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32),
                           replicate_, stream_word(stream_, tag_)},
                          key_);
      ++index_;
      lane_ = 0;
    }
    return to_unit(block_[lane_++]);
  }

  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const auto k = static_cast<std::uint64_t>(next() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

 private:
  Key key_;
  std::uint32_t replicate_;
  Stream stream_;
  std::uint32_t tag_;
  std::uint64_t index_ = 0;
  Block block_{};
  int lane_ = 4;
};

}  // namespace dfpp::rng
