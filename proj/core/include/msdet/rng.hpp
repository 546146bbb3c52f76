#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace msdet {

/// splitmix64 finaliser; the exact variant from Vigna's reference code.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Per-item seed stream: derive_seed(master, i) is stable across platforms
/// and independent draws never collide between salts.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t salt = 0) {
  return mix64(master ^ mix64(index + 1) ^ (salt * 0xDA942042E4DD58B5ULL));
}

/// Deterministic random source. Engine is std::mt19937_64 seeded with one
/// 64-bit value; its raw output sequence is fully specified by the standard,
/// so every draw below is bit-portable. Doubles use the top 53 bits:
/// (x >> 11) * 2^-53, giving uniforms in [0, 1).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform in [0, n); n > 0. Plain modulo, documented as part of the
  /// portable draw sequence.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal() {
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01();
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  /// Fisher-Yates, high index first.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace msdet
