#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "track6d/common.hpp"

namespace track6d {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the distribution transforms are written
// out here because std::normal_distribution and friends are
// implementation-defined and would break cross-toolchain reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Derive an independent stream seed from (master, id). splitmix64
  // scrambling keeps child streams distinct even for consecutive ids. The
  // seed is exposed so it can be recorded and the stream rebuilt later.
  static std::uint64_t child_seed(std::uint64_t master, std::uint64_t id) {
    std::uint64_t s = splitmix64(master);
    return splitmix64(s ^ (0x9e3779b97f4a7c15ULL * (id + 1)));
  }

  static Rng child(std::uint64_t master, std::uint64_t id) {
    return Rng(child_seed(master, id));
  }

  std::uint64_t raw() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    check(lo <= hi, "uniform_int: empty range");
    const std::uint64_t span = std::uint64_t(hi - lo) + 1;
    if (span == 0) return std::int64_t(engine_());  // full 64-bit range
    // rejection sampling avoids modulo bias
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return lo + std::int64_t(r % span);
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace track6d
