#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

namespace deflectstats {

// One splitmix64 step; used only to mix child seeds out of a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Child seed for a named stage. Stages seeded through distinct labels draw
// from decorrelated streams, so changing one stage's replicate count never
// perturbs another stage's results.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the label bytes
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::uint64_t state = master ^ h;
  splitmix64(state);
  return splitmix64(state);
}

// Child seed for an indexed work item (a replicate). Every replicate gets
// its own stream, so evaluation order and thread count cannot change results.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ (0xD1B54A32D192ED03ull * (index + 1));
  splitmix64(state);
  return splitmix64(state);
}

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence the standard fully specifies; the draws below use explicit
// algorithms instead of std:: distributions, whose results are
// implementation-defined and would not reproduce across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); unbiased via rejection. Requires n >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  // Standard normal deviate (Box-Muller); the paired deviate is cached, so
  // draws come in a fixed two-per-transform order.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Fisher-Yates shuffle driven by below(); stable across platforms, unlike
  // std::shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace deflectstats
