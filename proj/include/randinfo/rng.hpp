#pragma once

// Counter-based random streams.
//
// Every stream is Philox4x64-10 keyed by (master_seed, stream_index); the
// counter is the block number. Output is a pure function of the key and
// the position in the stream, so trials that own distinct stream indices
// can be evaluated in any order or on any thread and still reproduce
// bit-for-bit. Conversions to doubles and normals are done here rather
// than through <random> distributions, whose algorithms are
// implementation-defined.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace randinfo {

namespace detail {

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

/// Philox4x64 with 10 rounds (Salmon et al., SC'11 reference constants).
using PhiloxBlock = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

inline PhiloxBlock philox4x64(PhiloxBlock ctr, PhiloxKey key) {
  constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    detail::mulhilo64(kMul0, ctr[0], hi0, lo0);
    detail::mulhilo64(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// A reproducible random stream identified by (master_seed, stream_index).
///
/// Models std::uniform_random_bit_generator, but all distribution helpers
/// used by the library live on the class so results do not depend on the
/// standard library vendor.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : key_{master_seed, stream_index} {}

  std::uint64_t master_seed() const { return key_[0]; }
  std::uint64_t stream_index() const { return key_[1]; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      buffer_ = philox4x64({block_, 0, 0, 0}, key_);
      ++block_;
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, bound), bound >= 1 (Lemire's multiply-and-reject).
  std::uint64_t uniform_index(std::uint64_t bound) {
    std::uint64_t hi, lo;
    detail::mulhilo64(next_u64(), bound, hi, lo);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) detail::mulhilo64(next_u64(), bound, hi, lo);
    }
    return hi;
  }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  void fill_normal(std::span<double> out) {
    for (double& x : out) x = normal();
  }

 private:
  PhiloxKey key_;
  std::uint64_t block_ = 0;
  PhiloxBlock buffer_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stream index for trial `trial` of experiment point `group`.
constexpr std::uint64_t stream_id(std::uint64_t group, std::uint64_t trial) {
  return (group << 32) ^ trial;
}

/// The stream owned by trial `trial` of a Monte Carlo run whose base
/// stream is `base`. Independent of evaluation order.
inline RngStream trial_stream(const RngStream& base, std::uint64_t trial) {
  return RngStream(base.master_seed(), stream_id(base.stream_index(), trial));
}

}  // namespace randinfo
