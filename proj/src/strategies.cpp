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

#include "psalm/strategies.hpp"

#include <limits>
#include <string>

#include "psalm/allocation.hpp"
#include "psalm/error.hpp"

namespace psalm {
namespace {

Point draw_point(const Box& box, Rng& rng) {
  Point p;
  p.reserve(box.dimension());
  for (const Interval& iv : box.dims) p.push_back(rng.uniform(iv.lo, iv.hi));
  return p;
}

void check_numeric(const SelectionDomain& domain) {
  if (!domain.is_discrete()) return;
  if (domain.bounds().empty()) {
    throw NonNumericDomainError("domain elements carry no coordinates");
  }
  if (!domain.uniform_dimension()) {
    throw NonNumericDomainError("domain elements have differing dimensions");
  }
}

Selection fscs(const SelectionDomain& domain, std::size_t n, Rng& rng,
               std::size_t candidate_set_size, std::string_view id) {
  if (candidate_set_size == 0) throw DomainError("candidate set size must be positive");
  check_numeric(domain);
  const Normalizer norm(domain.bounds());

  Selection sel;
  sel.strategy_id = std::string(id);
  std::vector<Point> chosen;
  chosen.reserve(n);
  std::vector<Point> candidates;
  std::vector<std::size_t> candidate_positions;

  if (domain.is_discrete()) {
    const auto elements = domain.elements();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t pos = 0;
      if (i == 0) {
        pos = rng.uniform_index(elements.size());
      } else {
        candidates.clear();
        candidate_positions.clear();
        for (std::size_t c = 0; c < candidate_set_size; ++c) {
          candidate_positions.push_back(rng.uniform_index(elements.size()));
          candidates.push_back(elements[candidate_positions.back()].point);
        }
        pos = candidate_positions[pick_farthest_candidate(chosen, candidates, norm)];
      }
      sel.positions.push_back(pos);
      chosen.push_back(elements[pos].point);
    }
    return sel;
  }

  const Box& box = domain.box();
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      sel.points.push_back(draw_point(box, rng));
    } else {
      candidates.clear();
      for (std::size_t c = 0; c < candidate_set_size; ++c) {
        candidates.push_back(draw_point(box, rng));
      }
      sel.points.push_back(candidates[pick_farthest_candidate(chosen, candidates, norm)]);
    }
    chosen.push_back(sel.points.back());
  }
  return sel;
}

}  // namespace

Strategy parse_strategy(std::string_view id) {
  if (id == "rs") return Strategy::kRs;
  if (id == "psalm") return Strategy::kPsalm;
  if (id == "art") return Strategy::kArt;
  if (id == "mt-art") return Strategy::kMtArt;
  throw UnknownStrategyError("unknown strategy '" + std::string(id) + "'");
}

std::string_view strategy_id(Strategy s) {
  switch (s) {
    case Strategy::kRs: return "rs";
    case Strategy::kPsalm: return "psalm";
    case Strategy::kArt: return "art";
    case Strategy::kMtArt: return "mt-art";
  }
  return "?";
}

Level parse_level(std::string_view id) {
  if (id == "st") return Level::kSt;
  if (id == "mg") return Level::kMg;
  throw DomainError("unknown level '" + std::string(id) + "'");
}

std::string_view level_id(Level level) { return level == Level::kSt ? "st" : "mg"; }

const Point& Selection::unit_point(const SelectionDomain& domain, std::size_t i) const {
  if (!positions.empty()) return domain.element(positions.at(i)).point;
  return points.at(i);
}

Normalizer::Normalizer(std::span<const Interval> bounds) {
  for (const Interval& iv : bounds) {
    lo_.push_back(iv.lo);
    const double range = iv.hi - iv.lo;
    inv_range_.push_back(range > 0 ? 1.0 / range : 0.0);
  }
}

double Normalizer::distance_squared(const Point& a, const Point& b) const {
  double sum = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = (a[d] - b[d]) * inv_range_[d];
    sum += diff * diff;
  }
  return sum;
}

std::size_t pick_farthest_candidate(std::span<const Point> selected,
                                    std::span<const Point> candidates,
                                    const Normalizer& norm) {
  std::size_t best = 0;
  double best_dist = -1;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Point& s : selected) {
      nearest = std::min(nearest, norm.distance_squared(candidates[c], s));
      if (nearest <= best_dist) break;
    }
    if (nearest > best_dist) {
      best_dist = nearest;
      best = c;
    }
  }
  return best;
}

Selection select_rs(const SelectionDomain& domain, std::size_t n, Rng& rng) {
  Selection sel;
  sel.strategy_id = "rs";
  if (domain.is_discrete()) {
    const std::size_t count = domain.elements().size();
    sel.positions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) sel.positions.push_back(rng.uniform_index(count));
  } else {
    for (std::size_t i = 0; i < n; ++i) sel.points.push_back(draw_point(domain.box(), rng));
  }
  return sel;
}

Selection select_psalm(const PartitionScheme& scheme, std::size_t n, Rng& rng) {
  const auto sizes = scheme.sizes();
  const Allocation alloc = bma_mt(sizes, n, rng);
  Selection sel;
  sel.strategy_id = "psalm";
  sel.provenance.reserve(n);
  const bool discrete = scheme.domain().is_discrete();
  for (std::size_t i = 0; i < scheme.k(); ++i) {
    for (std::size_t j = 0; j < alloc.counts[i]; ++j) {
      if (discrete) {
        const auto members = scheme.member_positions(i);
        sel.positions.push_back(members[rng.uniform_index(members.size())]);
      } else {
        sel.points.push_back(
            draw_point(std::get<Box>(scheme.subdomains()[i].members), rng));
      }
      sel.provenance.push_back(i);
    }
  }
  return sel;
}

Selection select_art(const SelectionDomain& domain, std::size_t n, Rng& rng,
                     std::size_t candidate_set_size) {
  return fscs(domain, n, rng, candidate_set_size, "art");
}

Selection select_mt_art(const SelectionDomain& mg_domain, std::size_t n, Rng& rng,
                        std::size_t candidate_set_size) {
  if (mg_domain.kind() != DomainKind::kMg) {
    throw DomainKindError("MT-ART selects from an MG domain");
  }
  return fscs(mg_domain, n, rng, candidate_set_size, "mt-art");
}

}  // namespace psalm
