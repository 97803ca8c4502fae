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

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "psalm/error.hpp"
#include "psalm/metamorphic.hpp"

namespace psalm {
namespace {

// Tightens `box` so that every affine follow-up of sources drawn from it
// stays inside `bounds`. Returns nullopt when some follow-up mixes positive
// and negative coefficients in one dimension, which couples the two ends of
// the interval.
std::optional<Box> tighten_affine(const Box& bounds, const MetamorphicRelation& mr) {
  Box box = bounds;
  for (const auto& variant : mr.affine) {
    for (const AffineFollowup& f : variant) {
      for (std::size_t d = 0; d < box.dimension(); ++d) {
        double pos = 0;
        double neg = 0;
        for (double c : f.coeffs.at(d)) (c > 0 ? pos : neg) += c;
        if (pos != 0 && neg != 0) return std::nullopt;
        const double c = f.offset.at(d);
        const Interval& limit = bounds.dims[d];
        Interval& iv = box.dims[d];
        auto raise_lo = [&](double v, bool closed_end) {
          if (v > iv.lo || (v == iv.lo && !closed_end)) {
            iv.lo = v;
            iv.lo_closed = closed_end;
          }
        };
        auto lower_hi = [&](double v, bool closed_end) {
          if (v < iv.hi || (v == iv.hi && !closed_end)) {
            iv.hi = v;
            iv.hi_closed = closed_end;
          }
        };
        if (pos > 0) {
          // c + pos * x ranges over [c + pos*lo, c + pos*hi].
          lower_hi((limit.hi - c) / pos, limit.hi_closed);
          raise_lo((limit.lo - c) / pos, limit.lo_closed);
        } else if (neg < 0) {
          // c + neg * x ranges over [c + neg*hi, c + neg*lo].
          raise_lo((limit.hi - c) / neg, limit.hi_closed);
          lower_hi((limit.lo - c) / neg, limit.lo_closed);
        } else if (!limit.contains(c)) {
          throw EmptyDomainError("constant follow-up of MR " + mr.id +
                                 " lies outside the domain");
        }
      }
    }
  }
  return box;
}

bool followups_inside(const MetamorphicRelation& mr, const Point& source,
                      auto&& contains) {
  if (mr.source_arity != 1) return true;
  const Point* begin = &source;
  for (std::size_t v = 0; v < mr.mgs_per_source; ++v) {
    for (const Point& f : mr.generate_followups(std::span<const Point>(begin, 1), v)) {
      if (!contains(f)) return false;
    }
  }
  return true;
}

}  // namespace

SelectionDomain derive_source_domain(const SelectionDomain& input_domain,
                                     const MetamorphicRelation& mr,
                                     double grid_step) {
  if (!input_domain.is_discrete()) {
    const Box& whole = input_domain.box();
    if (!mr.affine.empty()) {
      if (auto box = tighten_affine(whole, mr)) {
        for (const Interval& iv : box->dims) {
          if (iv.lo > iv.hi || (iv.lo == iv.hi && !(iv.lo_closed && iv.hi_closed))) {
            throw EmptyDomainError("no source input satisfies MR " + mr.id);
          }
        }
        return SelectionDomain::continuous(std::move(*box));
      }
    }
    std::vector<double> steps(whole.dimension(), grid_step);
    SelectionDomain grid = SelectionDomain::grid(whole, steps);
    std::vector<DomainElement> kept;
    for (const auto& e : grid.elements()) {
      if (mr.admits(e.point) &&
          followups_inside(mr, e.point,
                           [&](const Point& p) { return whole.contains(p); })) {
        kept.push_back(e);
      }
    }
    if (kept.empty()) throw EmptyDomainError("no source input satisfies MR " + mr.id);
    return SelectionDomain::discrete(input_domain.kind(), std::move(kept));
  }

  std::set<Point> members;
  for (const auto& e : input_domain.elements()) members.insert(e.point);
  std::vector<DomainElement> kept;
  for (const auto& e : input_domain.elements()) {
    if (mr.admits(e.point) &&
        followups_inside(mr, e.point,
                         [&](const Point& p) { return members.contains(p); })) {
      kept.push_back(e);
    }
  }
  if (kept.empty()) throw EmptyDomainError("no source input satisfies MR " + mr.id);
  return SelectionDomain::discrete(input_domain.kind(), std::move(kept));
}

}  // namespace psalm
