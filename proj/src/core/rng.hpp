#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace labelbias {

// Seed derivation for independent substreams. Every parallel unit of work
// (grid point, train/test half, simulation replicate) gets its seed from a
// splitmix64 fold of the base seed and a fixed index path, so results do not
// depend on scheduling order or thread count.
uint64_t splitmix64(uint64_t x);
uint64_t derive_seed(uint64_t base, const uint64_t* path, size_t path_len);
uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> path);

// Deterministic random source with a pinned stream: the engine is mt19937_64
// (bit-exact by the standard) and all variate transforms are implemented
// here rather than via std::*_distribution, whose streams vary by platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1): 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]: safe as a log() argument.
  double uniform_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller, second variate cached.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  // Inclusive integer range, rejection sampled (no modulo bias).
  int64_t uniform_int(int64_t lo, int64_t hi);

  // Knuth's method in log space; exact for any finite mean at desk scale.
  int64_t poisson(double mean);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace labelbias
