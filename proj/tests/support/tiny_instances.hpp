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

#ifndef PSALM_TESTS_SUPPORT_TINY_INSTANCES_HPP_
#define PSALM_TESTS_SUPPORT_TINY_INSTANCES_HPP_

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "psalm/oracle.hpp"
#include "psalm/rng.hpp"

namespace psalm::testing {

// A draw is a list of equally likely (probability, violated) outcomes.
using Draw = std::vector<std::pair<double, bool>>;

// P(no violation) by walking every joint outcome of the draws, without
// assuming independence in closed form. Path probabilities are summed in
// 50-digit arithmetic so the oracle's own rounding stays far below 1e-12.
inline double brute_force_detect(const std::vector<Draw>& draws) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  Big miss = 0;
  std::function<void(std::size_t, const Big&)> walk = [&](std::size_t i, const Big& prob) {
    if (i == draws.size()) {
      miss += prob;
      return;
    }
    for (const auto& [p, violated] : draws[i]) {
      if (!violated) walk(i + 1, prob * Big(p));
    }
  };
  walk(0, Big(1));
  return static_cast<double>(1 - miss);
}

struct Tiny {
  MgIncidence inc;
  std::vector<std::size_t> source_labels;
  std::size_t k_st = 1;
  std::vector<std::size_t> mg_labels;
  std::size_t k_mg = 1;
};

inline Tiny random_tiny(Rng& rng) {
  Tiny t;
  const std::size_t d = 1 + rng.uniform_index(6);
  t.inc.source_count = d;
  for (std::size_t s = 0; s < d; ++s) {
    const std::size_t groups = 1 + rng.uniform_index(3);
    for (std::size_t g = 0; g < groups; ++g) {
      std::vector<std::size_t> members = {s};
      if (d > 1 && rng.uniform01() < 0.3) {
        std::size_t other = rng.uniform_index(d);
        if (other != s) members.push_back(other);
      }
      t.inc.mg_sources.push_back(members);
      t.inc.violated.push_back(rng.uniform01() < 0.4);
    }
  }
  t.k_st = 1 + rng.uniform_index(std::min<std::size_t>(3, d));
  for (std::size_t s = 0; s < d; ++s) t.source_labels.push_back(s < t.k_st ? s : rng.uniform_index(t.k_st));
  const std::size_t mgs = t.inc.mg_count();
  t.k_mg = 1 + rng.uniform_index(std::min<std::size_t>(3, mgs));
  for (std::size_t g = 0; g < mgs; ++g) t.mg_labels.push_back(g < t.k_mg ? g : rng.uniform_index(t.k_mg));
  return t;
}

// One source drawn uniformly from `members`, then one of its groups.
inline Draw source_draw(const Tiny& t, const std::vector<std::size_t>& members) {
  Draw out;
  const auto per_source = t.inc.source_mgs();
  for (std::size_t s : members) {
    for (std::size_t g : per_source[s]) {
      out.push_back({1.0 / double(members.size()) / double(per_source[s].size()), t.inc.violated[g]});
    }
  }
  return out;
}

inline Draw mg_draw(const Tiny& t, const std::vector<std::size_t>& members) {
  Draw out;
  for (std::size_t g : members) out.push_back({1.0 / double(members.size()), t.inc.violated[g]});
  return out;
}

inline std::vector<std::vector<std::size_t>> groups_of(const std::vector<std::size_t>& labels, std::size_t k) {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
  return out;
}

}  // namespace psalm::testing

#endif  // PSALM_TESTS_SUPPORT_TINY_INSTANCES_HPP_
