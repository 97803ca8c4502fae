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

#ifndef PSALM_TESTS_SUPPORT_SYNTHETIC_HPP_
#define PSALM_TESTS_SUPPORT_SYNTHETIC_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "psalm/experiment.hpp"
#include "psalm/oracle.hpp"
#include "psalm/rng.hpp"

namespace psalm::testing {

// Synthetic prepared subject: sources 0..d-1 labelled into parts, one MG per
// source, and a fixed hit pattern.
struct Synthetic {
  PreparedSubject prep;
  FaultMap faults;
  FailureProfile profile;
  std::vector<double> sizes;
};

inline Synthetic synthetic(Rng& rng, std::size_t k, std::size_t scale) {
  Synthetic s;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t size = scale * (1 + rng.uniform_index(4));
    s.sizes.push_back(static_cast<double>(size));
    labels.insert(labels.end(), size, i);
  }
  std::vector<DomainElement> sources;
  std::vector<DomainElement> groups;
  std::vector<MetamorphicGroup> mgs;
  MgIncidence inc;
  inc.source_count = labels.size();
  const double rate = 0.02 + 0.1 * rng.uniform01();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sources.push_back({ElementId{i}, {double(i)}, {}, ""});
    groups.push_back({ElementId{i}, {double(i), -double(i)}, i, "m"});
    mgs.push_back({"m", {{double(i)}}, {{-double(i)}}, 0});
    inc.mg_sources.push_back({i});
    inc.violated.push_back(rng.uniform01() < rate * double(labels[i] + 1));
  }
  s.prep.subject_id = "synthetic";
  s.prep.source_domain = SelectionDomain::discrete(DomainKind::kSource, sources);
  s.prep.source_scheme = partition_by_labels(s.prep.source_domain, labels);
  s.prep.mg = MgDomain{SelectionDomain::discrete(DomainKind::kMg, groups), mgs};
  s.prep.mg_scheme = partition_by_labels(s.prep.mg->domain, labels);
  s.faults.source_hit.assign(inc.violated.begin(), inc.violated.end());
  s.faults.mg_hit = s.faults.source_hit;
  s.profile = build_profile(inc, labels, k, labels, k);
  return s;
}

// Runs `instances` synthetic cells, alternating level and strategy, and
// counts estimates within three binomial standard errors of the analytic
// P-measure.
inline int calibration_hits(Rng& gen, int instances, std::size_t iterations) {
  int inside = 0;
  for (int i = 0; i < instances; ++i) {
    const auto syn = synthetic(gen, 2 + gen.uniform_index(3), 5);
    const Level level = i % 2 ? Level::kMg : Level::kSt;
    const Strategy strategy = i % 4 < 2 ? Strategy::kPsalm : Strategy::kRs;
    // n equal to the sum of the size multipliers gives integer proportions.
    std::vector<double> counts;
    double n = 0;
    for (double d : syn.sizes) {
      counts.push_back(d / 5);
      n += d / 5;
    }
    const std::vector<double> total = {n};
    const double p = p_analytic(level, strategy, syn.profile,
                                strategy == Strategy::kPsalm ? std::span<const double>(counts)
                                                             : std::span<const double>(total));
    Rng rng(gen.next());
    const double est = estimate_p_measure(syn.prep, syn.faults, strategy, level,
                                          static_cast<std::size_t>(n), iterations, rng);
    const double sigma = std::sqrt(p * (1 - p) / iterations);
    inside += std::abs(est - p) <= 3 * sigma + 1e-12;
  }
  return inside;
}

}  // namespace psalm::testing

#endif  // PSALM_TESTS_SUPPORT_SYNTHETIC_HPP_
