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

#ifndef SHUFFLEDP_SIM_HPP_
#define SHUFFLEDP_SIM_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "shuffledp/blanket.hpp"
#include "shuffledp/histogram.hpp"
#include "shuffledp/numeric.hpp"
#include "shuffledp/random.hpp"
#include "shuffledp/randomizers.hpp"
#include "shuffledp/summation.hpp"

namespace shuffledp {

// Monte Carlo harness for the full randomize -> shuffle -> analyze protocol
// and for sampling amplification-variable moments.
//
// Every (trial, user) pair draws from its own counter-derived stream, so
// parallel and serial execution produce identical results.

// The shuffler's output is the multiset of its inputs: permutation followed
// by forgetting order, implemented directly as counting.
inline Histogram shuffle(std::span<const std::int64_t> messages) {
  if (messages.empty()) throw std::invalid_argument("shuffle: empty input");
  Histogram h;
  for (std::int64_t m : messages) h.add(m);
  return h;
}

namespace detail {

constexpr std::uint64_t kInputStream = 0xFFFFFFFFFFFFFFFFull;

inline double run_summation_trial(std::span<const double> inputs,
                                  const SummationParams& params,
                                  std::uint64_t seed, std::uint64_t trial) {
  const SummationSpec spec = params.randomizer_spec();
  std::vector<std::int64_t> messages;
  messages.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Rng rng = make_rng(seed, trial, static_cast<std::uint64_t>(i));
    messages.push_back(
        static_cast<std::int64_t>(randomize(RandomizerSpec{spec}, inputs[i], rng)));
  }
  const Histogram h = shuffle(messages);
  return analyze(h, params);
}

// Runs fn(i) for i in [0, count) on `threads` workers in index chunks.
template <class Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = std::min<std::int64_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
    pool.emplace_back([lo, hi, &fn] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

// One full protocol execution with explicit parameters.
inline double run_summation(std::span<const double> inputs,
                            const SummationParams& params, std::uint64_t seed) {
  if (inputs.empty()) throw std::invalid_argument("run_summation: empty input");
  if (static_cast<std::int64_t>(inputs.size()) != params.n)
    throw std::invalid_argument("run_summation: input size must equal n");
  return detail::run_summation_trial(inputs, params, seed, 0);
}

// One full protocol execution with parameters chosen for (eps, delta).
inline double run_summation(std::span<const double> inputs, double eps,
                            double delta, std::uint64_t seed) {
  if (inputs.empty()) throw std::invalid_argument("run_summation: empty input");
  const SummationParams params =
      choose_parameters(eps, delta, static_cast<std::int64_t>(inputs.size()));
  return detail::run_summation_trial(inputs, params, seed, 0);
}

enum class InputDist { kConstant0, kConstant1, kUniform, kGrid, kTwoPoint };

inline const char* input_dist_name(InputDist d) {
  switch (d) {
    case InputDist::kConstant0: return "constant0";
    case InputDist::kConstant1: return "constant1";
    case InputDist::kUniform: return "uniform";
    case InputDist::kGrid: return "grid";
    case InputDist::kTwoPoint: return "twopoint";
  }
  return "?";
}

inline std::vector<double> generate_inputs(InputDist dist, std::int64_t n,
                                           Rng& rng) {
  std::vector<double> x(static_cast<std::size_t>(n));
  switch (dist) {
    case InputDist::kConstant0:
      break;
    case InputDist::kConstant1:
      for (auto& v : x) v = 1.0;
      break;
    case InputDist::kUniform:
      for (auto& v : x) v = uniform_double(rng);
      break;
    case InputDist::kGrid:
      for (std::int64_t i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] =
            n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
      break;
    case InputDist::kTwoPoint:
      for (auto& v : x) v = bernoulli(rng, 0.5) ? 1.0 : 0.0;
      break;
  }
  return x;
}

// Per-trial protocol errors z - sum(x), inputs drawn fresh each trial.
inline std::vector<double> summation_trial_errors(std::int64_t n, InputDist dist,
                                                  std::int64_t trials, double eps,
                                                  double delta, std::uint64_t seed,
                                                  int threads = 1) {
  if (trials < 1) throw std::invalid_argument("summation_trial_errors: trials >= 1");
  const SummationParams params = choose_parameters(eps, delta, n);
  std::vector<double> errors(static_cast<std::size_t>(trials));
  detail::parallel_for(trials, threads, [&](std::int64_t t) {
    Rng input_rng = make_rng(seed, static_cast<std::uint64_t>(t), detail::kInputStream);
    const std::vector<double> x = generate_inputs(dist, n, input_rng);
    KahanSum truth;
    for (double v : x) truth.add(v);
    const double z =
        detail::run_summation_trial(x, params, seed, static_cast<std::uint64_t>(t));
    errors[static_cast<std::size_t>(t)] = z - truth.value();
  });
  return errors;
}

struct ExperimentReport {
  std::int64_t trials = 0;
  double empirical_mse = 0.0;
  double empirical_bias = 0.0;
  double bias_stderr = std::numeric_limits<double>::infinity();
  double mse_stderr = std::numeric_limits<double>::infinity();
  double theoretical_bound = 0.0;
  std::uint64_t seed = 0;
  SummationParams params{};
};

// Empirical MSE/bias of the protocol against sum(x), with the matching
// theoretical bound. Deterministic for a fixed seed regardless of threads.
inline ExperimentReport mse_experiment(std::int64_t n, InputDist dist,
                                       std::int64_t trials, double eps,
                                       double delta, std::uint64_t seed,
                                       int threads = 1) {
  const std::vector<double> errors =
      summation_trial_errors(n, dist, trials, eps, delta, seed, threads);
  ExperimentReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.params = choose_parameters(eps, delta, n);
  rep.theoretical_bound = theoretical_mse_bound(rep.params);
  KahanSum se, s2, s4;
  for (double e : errors) {
    se.add(e);
    s2.add(e * e);
    s4.add(e * e * e * e);
  }
  const double td = static_cast<double>(trials);
  rep.empirical_bias = se.value() / td;
  rep.empirical_mse = s2.value() / td;
  if (trials > 1) {
    const double var_err =
        std::max(0.0, (s2.value() - td * rep.empirical_bias * rep.empirical_bias) /
                          (td - 1.0));
    rep.bias_stderr = std::sqrt(var_err / td);
    const double var_sq =
        std::max(0.0, (s4.value() - td * rep.empirical_mse * rep.empirical_mse) /
                          (td - 1.0));
    rep.mse_stderr = std::sqrt(var_sq / td);
  }
  return rep;
}

struct LMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double min_seen = std::numeric_limits<double>::infinity();
  double max_seen = -std::numeric_limits<double>::infinity();
  double mean_stderr = std::numeric_limits<double>::infinity();
  double second_moment_stderr = std::numeric_limits<double>::infinity();
  std::int64_t samples = 0;
};

// Sample statistics of the privacy amplification random variable L.
inline LMoments empirical_l_moments(const RandomizerSpec& spec, double eps,
                                    double x, double x_prime,
                                    std::int64_t samples, std::uint64_t seed) {
  if (samples < 1000)
    throw std::invalid_argument("empirical_l_moments: samples must be >= 1000");
  Rng rng = make_rng(seed);
  KahanSum s1, s2, s4;
  LMoments out;
  out.samples = samples;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double l = amplification_rv_sample(spec, eps, x, x_prime, rng);
    s1.add(l);
    s2.add(l * l);
    s4.add(l * l * l * l);
    out.min_seen = std::min(out.min_seen, l);
    out.max_seen = std::max(out.max_seen, l);
  }
  const double nd = static_cast<double>(samples);
  out.mean = s1.value() / nd;
  out.second_moment = s2.value() / nd;
  const double var = std::max(0.0, s2.value() / nd - out.mean * out.mean);
  out.mean_stderr = std::sqrt(var / nd);
  const double var2 =
      std::max(0.0, s4.value() / nd - out.second_moment * out.second_moment);
  out.second_moment_stderr = std::sqrt(var2 / nd);
  return out;
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_SIM_HPP_
