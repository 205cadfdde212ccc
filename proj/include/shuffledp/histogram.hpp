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

#ifndef SHUFFLEDP_HISTOGRAM_HPP_
#define SHUFFLEDP_HISTOGRAM_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>

namespace shuffledp {

// Multiset of discrete messages as per-symbol counts: the shuffler's output
// view. Iteration order is by symbol, so downstream consumers are
// deterministic and independent of insertion order.
class Histogram {
 public:
  Histogram() = default;

  void add(std::int64_t symbol, std::int64_t count = 1) {
    if (count < 0) throw std::invalid_argument("Histogram: negative count");
    if (count == 0) return;
    counts_[symbol] += count;
    total_ += count;
  }

  std::int64_t count(std::int64_t symbol) const {
    auto it = counts_.find(symbol);
    return it == counts_.end() ? 0 : it->second;
  }

  std::int64_t total() const { return total_; }

  const std::map<std::int64_t, std::int64_t>& counts() const { return counts_; }

  bool operator==(const Histogram& other) const {
    return counts_ == other.counts_;
  }

 private:
  std::map<std::int64_t, std::int64_t> counts_;
  std::int64_t total_ = 0;
};

}  // namespace shuffledp

#endif  // SHUFFLEDP_HISTOGRAM_HPP_
