#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace morphoseq {

/// Counter-based generator: output i of a stream is splitmix64(key + i * golden).
/// Streams are split by hashing a label into a new key, so every stage of a run
/// can own an independent sequence derived from one user seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t next_u64() { return mix(key_ + (counter_++) * kGolden); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  bool coin() { return (next_u64() >> 63) != 0; }

  /// Independent generator keyed by (this key, label).
  Rng split(std::string_view label) const;

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct indices from [0, n), in ascending order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  static std::uint64_t mix(std::uint64_t z);

private:
  struct RawKey {};
  Rng(RawKey, std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Sub-seed for a named stage of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace morphoseq
