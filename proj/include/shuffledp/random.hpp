// Copyright 2026 The shuffledp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHUFFLEDP_RANDOM_HPP_
#define SHUFFLEDP_RANDOM_HPP_

#include <cstdint>
#include <stdexcept>

#include "shuffledp/numeric.hpp"

namespace shuffledp {

namespace detail {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

// All sampling in the library draws from an explicitly seeded generator.
// The engine is splitmix64: constant-time to seed (the protocol creates one
// stream per (trial, user) pair) and identical output on any toolchain.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  SplitMix64() = default;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  bool operator==(const SplitMix64&) const = default;

 private:
  std::uint64_t state_ = 0;
};

using Rng = SplitMix64;

// Counter-based sub-seed derivation: (seed, a, b) -> sub-seed. Used to give
// every (trial, user) pair its own stream so parallel execution cannot
// change results.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t h = detail::mix64(seed);
  h = detail::mix64(h ^ detail::mix64(a + 0x9E3779B97F4A7C15ull));
  h = detail::mix64(h ^ detail::mix64(b + 0xD1B54A32D192ED03ull));
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(detail::mix64(seed)); }

inline Rng make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return Rng(derive_seed(seed, a, b));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi], unbiased via rejection.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(rng());  // full 64-bit range
  const std::uint64_t reject_below = (0 - range) % range;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= reject_below) return lo + static_cast<std::int64_t>(r % range);
  }
}

// Bernoulli(p). Out-of-range biases never consume randomness.
inline bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform_double(rng) < p;
}

// Laplace(0, scale) via inverse CDF.
inline double sample_laplace(Rng& rng, double scale) {
  const double u = uniform_double(rng) - 0.5;
  const double mag = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -mag : mag;
}

// N(0, 1) via inverse CDF (one uniform per sample).
inline double sample_standard_normal(Rng& rng) {
  double u;
  do {
    u = uniform_double(rng);
  } while (u == 0.0);
  return normal_quantile(u);
}

// N(0, 1) conditioned on Z >= lower, exact inverse-CDF mapping.
inline double sample_truncated_standard_normal_above(Rng& rng, double lower) {
  const double p_lo = normal_cdf(lower);
  double u;
  do {
    u = p_lo + uniform_double(rng) * (1.0 - p_lo);
  } while (u >= 1.0 || u <= 0.0);
  const double z = normal_quantile(u);
  return z < lower ? lower : z;
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_RANDOM_HPP_
