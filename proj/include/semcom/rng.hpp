#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace semcom {

/// Deterministic random source. The engine is std::mt19937_64 (bit-exact
/// across platforms per the standard); all distributions are hand-rolled so
/// that sampled values never depend on the standard library implementation.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unit-mean exponential draw; strictly positive.
  double exponential() {
    double u = uniform01();
    return -std::log1p(-u);
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based substream derivation: the (a, b) pair selects an independent
/// stream of the master seed. Adding trials or schemes never perturbs the
/// streams already assigned, so --trials changes are append-only.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b = 0) {
  std::uint64_t s = detail::mix64(master);
  s = detail::mix64(s ^ detail::mix64(a));
  s = detail::mix64(s ^ detail::mix64(b));
  return s;
}

}  // namespace semcom
