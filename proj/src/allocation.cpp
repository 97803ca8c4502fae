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

#include "psalm/allocation.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "psalm/error.hpp"

namespace psalm {
namespace {

void check_sizes(std::span<const double> sizes) {
  if (sizes.empty()) throw InvalidSizeError("no subdomain sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0) || !std::isfinite(sizes[i])) {
      throw InvalidSizeError("subdomain " + std::to_string(i + 1) +
                             " has non-positive size");
    }
  }
}

}  // namespace

std::vector<double> proportional_ideal(std::span<const double> sizes,
                                       std::size_t n) {
  check_sizes(sizes);
  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  std::vector<double> out;
  out.reserve(sizes.size());
  for (double d : sizes) out.push_back(static_cast<double>(n) * d / total);
  return out;
}

Allocation bma_mt(std::span<const double> sizes, std::size_t n, Rng& rng) {
  check_sizes(sizes);
  const std::size_t k = sizes.size();
  if (n < k) {
    throw InsufficientBudgetError("budget " + std::to_string(n) +
                                  " is smaller than the number of subdomains " +
                                  std::to_string(k));
  }
  std::vector<std::size_t> counts(k, 1);
  auto ratio = [&](std::size_t i) {
    return static_cast<double>(counts[i]) / sizes[i];
  };

  std::vector<std::size_t> lowest;
  std::vector<std::size_t> largest;
  lowest.reserve(k);
  largest.reserve(k);
  for (std::size_t remaining = n - k; remaining > 0; --remaining) {
    lowest.clear();
    double best = ratio(0);
    lowest.push_back(0);
    for (std::size_t i = 1; i < k; ++i) {
      const double r = ratio(i);
      if (r < best) {
        best = r;
        lowest.clear();
        lowest.push_back(i);
      } else if (r == best) {
        lowest.push_back(i);
      }
    }

    std::size_t pick = lowest.front();
    if (lowest.size() > 1) {
      largest.clear();
      double biggest = sizes[lowest.front()];
      for (std::size_t i : lowest) {
        if (sizes[i] > biggest) {
          biggest = sizes[i];
          largest.clear();
          largest.push_back(i);
        } else if (sizes[i] == biggest) {
          largest.push_back(i);
        }
      }
      pick = largest.size() > 1 ? largest[rng.uniform_index(largest.size())]
                                : largest.front();
    }
    ++counts[pick];
  }

  Allocation out;
  out.counts = std::move(counts);
  out.total = n;
  out.ratios.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.ratios.push_back(static_cast<double>(out.counts[i]) / sizes[i]);
  }
  return out;
}

}  // namespace psalm
