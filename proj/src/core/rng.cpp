#include "core/rng.hpp"

#include <cmath>

#include "core/common.hpp"

namespace labelbias {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t base, const uint64_t* path, size_t path_len) {
  uint64_t s = splitmix64(base);
  for (size_t i = 0; i < path_len; ++i) {
    s = splitmix64(s ^ splitmix64(path[i] + 0x632be59bd9b4e019ULL));
  }
  return s;
}

uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> path) {
  return derive_seed(base, path.begin(), path.size());
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform_open();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

int64_t Rng::uniform_int(int64_t lo, int64_t hi) {
  if (lo > hi) fail(ErrorCode::invalid_argument, "uniform_int: empty range");
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<int64_t>(next_u64());  // full 64-bit range
  uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return lo + static_cast<int64_t>(draw % span);
}

int64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    fail(ErrorCode::invalid_argument, "poisson: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  int64_t k = 0;
  double log_prod = 0.0;
  do {
    ++k;
    log_prod += std::log(uniform_open());
  } while (log_prod > -mean);
  return k - 1;
}

}  // namespace labelbias
