#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <stdexcept>

#include "gslrec/numerics/matrix.hpp"

namespace gslrec::numerics {

/// Output format version of RngStream. Bump whenever the draw sequence for a
/// given (seed, stream_id) changes; frozen known-answer tests pin version 1.
inline constexpr int kRngStreamVersion = 1;

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer (Steele, Lea & Flood mixing constants).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + kGolden + (h << 6) + (h >> 2)));
}

}  // namespace detail

/// Combines integer coordinates (study, grid indices, trial, ...) into a
/// stream id, so every task in a sweep owns an independent stream.
inline std::uint64_t combine_stream_id(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0;
  for (std::uint64_t p : parts) h = detail::hash_combine(h, p);
  return h;
}

/// Counter-based pseudo-random stream.
///
/// Draw i of stream (seed, stream_id) is
///   mix64(key + i * kGolden),  key = mix64(mix64(seed + kGolden) ^ mix64(stream_id)),
/// where mix64 is the SplitMix64 finalizer. Uniform doubles take the top 53
/// bits mapped to (0, 1]; normals use the Box-Muller transform (pairs, second
/// value cached). The sequence for a given (seed, stream_id) is part of the
/// library's versioned contract (kRngStreamVersion) and is bit-stable.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed),
        stream_id_(stream_id),
        key_(detail::mix64(detail::mix64(seed + detail::kGolden) ^ detail::mix64(stream_id))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Child stream with the counter reset; children with distinct tags are
  /// independent of each other and of the parent.
  RngStream derived(std::uint64_t tag) const {
    return RngStream(seed_, detail::hash_combine(stream_id_, tag));
  }

  std::uint64_t next_u64() { return detail::mix64(key_ + (++counter_) * detail::kGolden); }

  /// Uniform draw in (0, 1].
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Modulo bias is below bound/2^64.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: zero bound");
    return next_u64() % bound;
  }

  /// Standard normal draw.
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

/// Matrix with i.i.d. N(0, std^2) entries, drawn in row-major order.
inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, double std_dev, RngStream& rng) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("gaussian_matrix: zero dimension");
  if (!(std_dev > 0.0)) throw std::invalid_argument("gaussian_matrix: std must be > 0");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = std_dev * rng.next_normal();
  return m;
}

inline Vector gaussian_vector(std::size_t len, double std_dev, RngStream& rng) {
  if (len == 0) throw std::invalid_argument("gaussian_vector: zero length");
  if (!(std_dev > 0.0)) throw std::invalid_argument("gaussian_vector: std must be > 0");
  Vector v(len);
  for (std::size_t i = 0; i < len; ++i) v[i] = std_dev * rng.next_normal();
  return v;
}

}  // namespace gslrec::numerics
