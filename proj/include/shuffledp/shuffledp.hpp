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

#ifndef SHUFFLEDP_SHUFFLEDP_HPP_
#define SHUFFLEDP_SHUFFLEDP_HPP_

#include "shuffledp/amplification.hpp"
#include "shuffledp/blanket.hpp"
#include "shuffledp/histogram.hpp"
#include "shuffledp/numeric.hpp"
#include "shuffledp/oracle.hpp"
#include "shuffledp/random.hpp"
#include "shuffledp/randomizers.hpp"
#include "shuffledp/sim.hpp"
#include "shuffledp/summation.hpp"

#endif  // SHUFFLEDP_SHUFFLEDP_HPP_
