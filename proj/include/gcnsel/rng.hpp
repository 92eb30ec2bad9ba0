#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gcnsel {

/// SplitMix64 (Steele, Lea & Flood 2014). Every random stream in the library is
/// derived from this generator so that results are reproducible across
/// platforms and implementations: the state advances by the golden-ratio
/// increment 0x9E3779B97F4A7C15 and each output is the Stafford "mix13"
/// finalizer of the new state.
///
/// Derived values:
///   uniform()        = (next() >> 11) * 2^-53, in [0, 1)
///   uniform_below(n) = rejection sampling on next() (no modulo bias)
///   normal()         = Box-Muller on two uniforms, cosine branch only
///   split(k)         = SplitMix64 seeded with mix(state ^ mix(k + golden))
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix(state_);
  }

  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % n;
  }

  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  constexpr SplitMix64 split(std::uint64_t stream) const noexcept {
    return SplitMix64(mix(state_ ^ mix(stream + kGolden)));
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

// Named sub-streams, so that e.g. the dropout stream of a run never overlaps
// with its split stream.
enum class Stream : std::uint64_t {
  kInit = 1,
  kSelection = 2,
  kSplit = 3,
  kDropout = 4,
  kGraph = 5,
  kFeatures = 6,
};

inline SplitMix64 stream_rng(std::uint64_t seed, Stream s) noexcept {
  return SplitMix64(seed).split(static_cast<std::uint64_t>(s));
}

}  // namespace gcnsel
