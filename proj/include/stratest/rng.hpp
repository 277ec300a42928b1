#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace stratest::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`: the (index+1)-th output of a
/// SplitMix64 sequence started at master. Distinct indices never collide
/// because mix64 is a bijection.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + kGolden * (index + 1));
}

/// Independent master for a named sub-purpose (population generation,
/// sampling) so their streams never overlap.
constexpr std::uint64_t domain_seed(std::uint64_t master, std::uint64_t domain) {
  return mix64(master ^ mix64(domain));
}

inline constexpr std::uint64_t kDomainPopulation = 0x706f70756c617465ULL;
inline constexpr std::uint64_t kDomainSampling = 0x73616d706c696e67ULL;

inline constexpr const char* kGeneratorName =
    "mt19937_64 seeded per stream by SplitMix64(master + golden * (index + 1))";

using Engine = std::mt19937_64;

/// Uniform on [0, 1) with 53 random bits. Spelled out rather than using
/// std::uniform_real_distribution so draws are identical across standard
/// libraries.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound), Lemire's multiply-and-reject.
inline std::uint64_t bounded(Engine& eng, std::uint64_t bound) {
  std::uint64_t x = eng();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = eng();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Standard normal pair via the Marsaglia polar method.
inline void normal_pair(Engine& eng, double& a, double& b) {
  double u, v, s;
  do {
    u = 2.0 * uniform01(eng) - 1.0;
    v = 2.0 * uniform01(eng) - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double k = std::sqrt(-2.0 * std::log(s) / s);
  a = u * k;
  b = v * k;
}

}  // namespace stratest::rng
