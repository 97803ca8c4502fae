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

#ifndef PSALM_STRATEGIES_HPP_
#define PSALM_STRATEGIES_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psalm/partition.hpp"
#include "psalm/rng.hpp"

namespace psalm {

enum class Strategy { kRs, kPsalm, kArt, kMtArt };

// Config ids: "rs", "psalm", "art", "mt-art". Throws UnknownStrategyError.
Strategy parse_strategy(std::string_view id);
std::string_view strategy_id(Strategy s);

// Selection level: source test cases or metamorphic groups.
enum class Level { kSt, kMg };

// Config ids: "st", "mg". Throws DomainError.
Level parse_level(std::string_view id);
std::string_view level_id(Level level);

inline constexpr std::size_t kDefaultCandidateSetSize = 10;

// Selected units. For discrete domains `positions` index the domain's
// elements; for continuous domains `points` holds the drawn inputs.
struct Selection {
  std::string strategy_id;
  std::vector<std::size_t> positions;
  std::vector<Point> points;
  // PSALM only: 0-based subdomain of each unit.
  std::vector<std::size_t> provenance;

  std::size_t size() const { return positions.size() + points.size(); }
  // Input or MG feature vector of unit i.
  const Point& unit_point(const SelectionDomain& domain, std::size_t i) const;
};

// n uniform draws with replacement. Throws EmptyDomainError.
Selection select_rs(const SelectionDomain& domain, std::size_t n, Rng& rng);

// BMA-MT allocation over the scheme's subdomains (drawn first from `rng`),
// then uniform draws with replacement inside each subdomain, in subdomain
// order. Throws InsufficientBudgetError when n < k.
Selection select_psalm(const PartitionScheme& scheme, std::size_t n, Rng& rng);

// Fixed-size-candidate-set ART over source inputs. The first unit is
// uniform; each later unit is the candidate, out of `candidate_set_size`
// uniform candidates, whose minimum Euclidean distance to the selected units
// (on min-max normalized coordinates) is largest. The first candidate wins
// ties. Throws EmptyDomainError and NonNumericDomainError.
Selection select_art(const SelectionDomain& domain, std::size_t n, Rng& rng,
                     std::size_t candidate_set_size = kDefaultCandidateSetSize);

// The same FSCS procedure over MG feature vectors (sources followed by
// follow-ups). Throws DomainKindError for a non-MG domain.
Selection select_mt_art(const SelectionDomain& mg_domain, std::size_t n, Rng& rng,
                        std::size_t candidate_set_size = kDefaultCandidateSetSize);

// Min-max normalization per dimension; constant dimensions map to 0.
class Normalizer {
 public:
  explicit Normalizer(std::span<const Interval> bounds);
  double distance_squared(const Point& a, const Point& b) const;

 private:
  std::vector<double> lo_;
  std::vector<double> inv_range_;
};

// Index of the candidate maximizing the minimum distance to `selected`.
std::size_t pick_farthest_candidate(std::span<const Point> selected,
                                    std::span<const Point> candidates,
                                    const Normalizer& norm);

}  // namespace psalm

#endif  // PSALM_STRATEGIES_HPP_
