#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace hcad {

// One splitmix64 step. Used to derive independent stream seeds from a base
// seed plus a salt, so that e.g. the SMOTE draws for cluster 2 never overlap
// the undersampling draws for cluster 0.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt_a,
                          std::uint64_t salt_b);

// Deterministic RNG. mt19937_64 itself is pinned by the standard, but the
// std::uniform_* distributions are not, so the uniform draws are done by
// hand here. Identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (both values used, cached).
  double next_normal();

  // Uniform integer in [0, n). Rejection sampling keeps it exactly uniform.
  std::size_t next_index(std::size_t n);

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = next_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // n distinct indices drawn from [0, pool), returned in ascending order.
  std::vector<std::size_t> sample_without_replacement(std::size_t pool,
                                                      std::size_t n);

 private:
  std::mt19937_64 gen_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace hcad
