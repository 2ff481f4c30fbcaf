// Seeded randomness helpers.  std::mt19937_64 output is pinned by the
// standard, but the standard distributions are not, so the few draws we
// need are implemented here to keep generated streams and clustering
// restarts byte-identical across toolchains.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lobflow {

// splitmix64; used to derive independent child seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix_seed(master ^ mix_seed(stream + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) {
    // rejection sampling keeps the draw unbiased
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // uniform integer in [lo, hi] inclusive
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(double p) { return uniform() < p; }

  // exponential with given rate (mean 1/rate)
  double exponential(double rate) {
    return -std::log(1.0 - uniform()) / rate;
  }

  // geometric on {0,1,2,...} with success probability p in (0,1]
  std::int64_t geometric(double p) {
    if (p >= 1.0) return 0;
    return static_cast<std::int64_t>(std::floor(std::log(1.0 - uniform()) / std::log(1.0 - p)));
  }

 private:
  std::mt19937_64 engine_;
};

} // namespace lobflow
