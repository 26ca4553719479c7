// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace exprkit {

// Deterministic random stream. All randomness in the toolkit flows from one
// root seed through named derived streams, so that each concurrent unit
// (sample, epoch, parameter init) owns an independent, reproducible stream.
//
// The uniform/normal draws are implemented explicitly (rejection sampling,
// Box-Muller) rather than via std distributions, so the draw sequence is a
// documented function of the engine output and tests can replay it.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, n). n must be >= 1.
  std::uint64_t uniform_u64(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return x % n;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform_real() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

  // Standard normal via Box-Muller; one spare value cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform_real();
    while (u1 <= 0.0) u1 = uniform_real();
    const double u2 = uniform_real();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  bool bernoulli(double p) { return uniform_real() < p; }

  // Child stream keyed by (parent seed, label, args...). FNV-1a folding.
  template <typename... Args>
  RngStream derive(std::string_view label, Args... args) const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 1099511628211ULL;
      }
    };
    mix(seed_);
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    (mix(static_cast<std::uint64_t>(args)), ...);
    return RngStream(h);
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// FNV-1a over a byte string; used to fold string ids into stream derivation.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace exprkit
