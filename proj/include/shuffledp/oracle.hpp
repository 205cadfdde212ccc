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

#ifndef SHUFFLEDP_ORACLE_HPP_
#define SHUFFLEDP_ORACLE_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "shuffledp/amplification.hpp"
#include "shuffledp/numeric.hpp"
#include "shuffledp/randomizers.hpp"

namespace shuffledp {

// Exact desk-scale computations for shuffled k-ary randomized response: the
// true hockey-stick divergence on neighboring datasets and the exact clipped
// expectation E[sum_1^m L_i]_+. Every amplification bound must dominate
// these values.

namespace detail {

// Visits every count vector over `parts` symbols with the given total
// (stars and bars), in lexicographic order.
template <class Visit>
void for_each_composition(std::int64_t total, int parts, std::vector<std::int64_t>& counts,
                          int index, Visit&& visit) {
  if (index == parts - 1) {
    counts[static_cast<std::size_t>(index)] = total;
    visit(counts);
    return;
  }
  for (std::int64_t c = 0; c <= total; ++c) {
    counts[static_cast<std::size_t>(index)] = c;
    for_each_composition(total - c, parts, counts, index + 1, visit);
  }
}

inline double histogram_count(std::int64_t n, std::int64_t k) {
  return std::exp(log_binomial_coefficient(n + k - 1, k - 1));
}

}  // namespace detail

// Enumerates every size-n histogram Y over [k] together with the exact
// probabilities P[M(x) = Y] and P[M(x') = Y], where x holds sym_a for all n
// users and x' differs in one user holding sym_b. The differing user is
// handled through the convolution identity
// Mult_{n-1}(Y - e_j) = Mult_n(Y) * Y_j / (n mu_a(j)).
template <class Visit>
void enumerate_shuffled_krr(std::int64_t n, std::int64_t k, double eps0,
                            std::int64_t sym_a, std::int64_t sym_b, Visit&& visit) {
  if (k < 2) throw std::invalid_argument("enumerate_shuffled_krr: k must be >= 2");
  if (n < 1) throw std::invalid_argument("enumerate_shuffled_krr: n must be >= 1");
  if (sym_a < 1 || sym_a > k || sym_b < 1 || sym_b > k)
    throw std::invalid_argument("enumerate_shuffled_krr: symbols must lie in [k]");
  const double p_true = detail::krr_p_true(k, eps0);
  const double p_other = detail::krr_p_other(k, eps0);
  const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k));
  detail::for_each_composition(
      n, static_cast<int>(k), counts, 0, [&](const std::vector<std::int64_t>& y) {
        double log_p = log_n_fact;
        for (std::int64_t j = 0; j < k; ++j) {
          const std::int64_t c = y[static_cast<std::size_t>(j)];
          log_p -= std::lgamma(static_cast<double>(c) + 1.0);
          const double mu_a = (j + 1 == sym_a) ? p_true : p_other;
          log_p += static_cast<double>(c) * std::log(mu_a);
        }
        const double p = std::exp(log_p);
        double ratio = 0.0;  // P'(Y) / P(Y)
        for (std::int64_t j = 0; j < k; ++j) {
          const std::int64_t c = y[static_cast<std::size_t>(j)];
          if (c == 0) continue;
          const double mu_a = (j + 1 == sym_a) ? p_true : p_other;
          const double mu_b = (j + 1 == sym_b) ? p_true : p_other;
          ratio += mu_b * static_cast<double>(c) / (static_cast<double>(n) * mu_a);
        }
        visit(y, p, p * ratio);
      });
}

// True hockey-stick divergence D_{e^eps}(M(x) || M(x')) of the shuffled
// k-ary eps0-LDP randomized response on the canonical neighbors
// x = (a,...,a), x' = (b,a,...,a). By symbol symmetry (a, b) = (1, 2) is the
// worst case; the choice is exposed for the symmetry checks.
inline double exact_shuffled_divergence_krr(std::int64_t n, std::int64_t k,
                                            double eps0, double eps,
                                            std::int64_t n_cap = 10,
                                            std::int64_t sym_a = 1,
                                            std::int64_t sym_b = 2) {
  if (n > n_cap)
    throw std::invalid_argument("exact_shuffled_divergence_krr: n above cap");
  if (detail::histogram_count(n, k) > 2e6)
    throw std::invalid_argument(
        "exact_shuffled_divergence_krr: histogram space too large");
  if (!(eps >= 0.0))
    throw std::invalid_argument("exact_shuffled_divergence_krr: eps must be >= 0");
  const double e_eps = std::exp(eps);
  KahanSum acc;
  enumerate_shuffled_krr(n, k, eps0, sym_a, sym_b,
                         [&](const std::vector<std::int64_t>&, double p, double pp) {
                           const double diff = p - e_eps * pp;
                           // fp dust below 1e-15 is treated as zero
                           if (diff > 1e-15) acc.add(diff);
                         });
  return clamp01(acc.value());
}

// Exact E[sum_{i=1}^m L_i]_+ for k-ary randomized response. With
// gamma = k/(e^{eps0}+k-1), the sum equals
//   m gamma (1 - e^eps) + (1-gamma) k (N_x - e^eps N_x')
// where (N_x, N_x') ~ Multinomial(m; 1/k, 1/k), so a double sum over the
// pair of counts gives the expectation exactly.
inline double exact_clipped_expectation_krr(std::int64_t m, std::int64_t k,
                                            double eps0, double eps,
                                            std::int64_t m_cap = 10000) {
  if (m < 1) throw std::invalid_argument("exact_clipped_expectation_krr: m >= 1");
  if (m > m_cap)
    throw std::invalid_argument("exact_clipped_expectation_krr: m above cap");
  if (k < 2) throw std::invalid_argument("exact_clipped_expectation_krr: k >= 2");
  const double g = detail::krr_gamma(k, eps0);
  const double e_eps = std::exp(eps);
  const double base = static_cast<double>(m) * g * (1.0 - e_eps);
  const double spread = (1.0 - g) * static_cast<double>(k);
  const double log_m_fact = std::lgamma(static_cast<double>(m) + 1.0);
  const double log_pk = -std::log(static_cast<double>(k));
  KahanSum acc;
  if (k == 2) {
    // The remainder probability 1 - 2/k vanishes: j = m - i always.
    for (std::int64_t i = 0; i <= m; ++i) {
      const std::int64_t j = m - i;
      const double val =
          base + spread * (static_cast<double>(i) - e_eps * static_cast<double>(j));
      if (val <= 0.0) continue;
      const double log_w = log_binomial_coefficient(m, i) +
                           static_cast<double>(m) * log_pk;
      acc.add(std::exp(log_w) * val);
    }
    return acc.value();
  }
  const double log_rest = std::log1p(-2.0 / static_cast<double>(k));
  for (std::int64_t i = 0; i <= m; ++i) {
    for (std::int64_t j = 0; j <= m - i; ++j) {
      const double val =
          base + spread * (static_cast<double>(i) - e_eps * static_cast<double>(j));
      if (val <= 0.0) continue;
      const double log_w = log_m_fact -
                           std::lgamma(static_cast<double>(i) + 1.0) -
                           std::lgamma(static_cast<double>(j) + 1.0) -
                           std::lgamma(static_cast<double>(m - i - j) + 1.0) +
                           static_cast<double>(i + j) * log_pk +
                           static_cast<double>(m - i - j) * log_rest;
      acc.add(std::exp(log_w) * val);
    }
  }
  return acc.value();
}

// The tightest delta the mixture lemma itself can certify for k-RR: the
// binomial mixture evaluated with the exact per-m clipped expectations.
inline double exact_mixture_delta_krr(std::int64_t n, std::int64_t k, double eps0,
                                      double eps, std::int64_t n_cap = 10000) {
  if (n > n_cap)
    throw std::invalid_argument("exact_mixture_delta_krr: n above cap");
  const double g = detail::krr_gamma(k, eps0);
  return delta_mixture(n, g, [&](std::int64_t m) {
    return exact_clipped_expectation_krr(m, k, eps0, eps, n_cap);
  });
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_ORACLE_HPP_
