// Copyright 2026 The PSALM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PSALM_ALLOCATION_HPP_
#define PSALM_ALLOCATION_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "psalm/rng.hpp"

namespace psalm {

// Per-subdomain selection counts. `ratios[i] == counts[i] / sizes[i]`.
struct Allocation {
  std::vector<std::size_t> counts;
  std::vector<double> ratios;
  std::size_t total = 0;

  bool operator==(const Allocation&) const = default;
};

// Real-valued proportional target n * d_i / sum(d). Throws InvalidSizeError.
std::vector<double> proportional_ideal(std::span<const double> sizes,
                                       std::size_t n);

// Basic maximin allocation for MT. Starts with one unit per subdomain, then
// repeatedly gives the next unit to the subdomain with the lowest sampling
// ratio n_i / d_i; ties go to the largest d_i, and remaining ties are broken
// uniformly at random with exactly one draw from `rng` per tie event.
//
// Ratios are recomputed as n_i / d_i on every comparison. Division is
// correctly rounded, so two subdomains tie exactly when their rational
// ratios are equal.
//
// Throws InsufficientBudgetError when n < k and InvalidSizeError for
// non-positive sizes.
Allocation bma_mt(std::span<const double> sizes, std::size_t n, Rng& rng);

}  // namespace psalm

#endif  // PSALM_ALLOCATION_HPP_
