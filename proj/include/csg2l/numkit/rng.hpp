#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace csg {

/// Deterministic random stream built on std::mt19937_64.
///
/// The engine's output sequence is fixed by the C++ standard, but the
/// standard distributions are not, so every derived quantity (uniforms,
/// normals, integers, shuffles) is computed here from raw 64-bit draws.
/// Identical seed plus identical call sequence gives identical draws on
/// every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the Box-Muller transform (one draw per two uniforms).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// Unbiased integer in [0, n) by rejection sampling. n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Fisher-Yates shuffle driven by below().
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Independent child stream keyed by `stream`; does not advance this one.
  Rng derive(std::uint64_t stream) const;
  Rng derive(std::string_view tag) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used for seed derivation.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace csg
