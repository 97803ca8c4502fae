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

#include "psalm/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "psalm/error.hpp"

namespace psalm {
namespace {

constexpr double kMeasureRelTol = 1e-9;

bool close_rel(double a, double b) {
  return std::abs(a - b) <= kMeasureRelTol * std::max(std::abs(a), std::abs(b));
}

bool interval_within(const Interval& inner, const Interval& outer) {
  if (inner.lo < outer.lo || inner.hi > outer.hi) return false;
  if (inner.lo == outer.lo && inner.lo_closed && !outer.lo_closed) return false;
  if (inner.hi == outer.hi && inner.hi_closed && !outer.hi_closed) return false;
  return true;
}

std::vector<double> grid_axis(const Interval& iv, double step) {
  if (!(step > 0)) throw DomainError("grid step must be positive");
  std::vector<double> values;
  const double span = iv.hi - iv.lo;
  const auto count =
      static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    double v = iv.lo + static_cast<double>(i) * step;
    if (std::abs(v - iv.hi) <= 1e-9 * step) v = iv.hi;
    if (iv.contains(v)) values.push_back(v);
  }
  return values;
}

}  // namespace

double Box::measure() const {
  double m = 1.0;
  for (const Interval& iv : dims) m *= iv.length();
  return m;
}

bool Box::contains(const Point& p) const {
  if (p.size() != dims.size()) return false;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (!dims[d].contains(p[d])) return false;
  }
  return true;
}

bool boxes_overlap(const Box& a, const Box& b) {
  if (a.dimension() != b.dimension()) return false;
  for (std::size_t d = 0; d < a.dimension(); ++d) {
    const Interval& x = a.dims[d];
    const Interval& y = b.dims[d];
    const double lo = std::max(x.lo, y.lo);
    const double hi = std::min(x.hi, y.hi);
    if (lo > hi) return false;
    if (lo == hi && !(x.contains(lo) && y.contains(lo))) return false;
  }
  return true;
}

SelectionDomain SelectionDomain::discrete(DomainKind kind,
                                          std::vector<DomainElement> elements) {
  if (elements.empty()) throw EmptyDomainError("discrete domain has no elements");
  std::vector<ElementId> ids;
  ids.reserve(elements.size());
  for (const auto& e : elements) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw DomainError("duplicate element id in domain");
  }
  const std::size_t dim = elements.front().point.size();
  std::vector<Interval> bounds(dim, closed(std::numeric_limits<double>::infinity(),
                                           -std::numeric_limits<double>::infinity()));
  bool uniform = true;
  for (const auto& e : elements) {
    uniform = uniform && e.point.size() == dim;
    for (std::size_t d = 0; d < dim && d < e.point.size(); ++d) {
      bounds[d].lo = std::min(bounds[d].lo, e.point[d]);
      bounds[d].hi = std::max(bounds[d].hi, e.point[d]);
    }
  }
  SelectionDomain domain;
  domain.kind_ = kind;
  domain.elements_ =
      std::make_shared<const std::vector<DomainElement>>(std::move(elements));
  domain.bounds_ = std::make_shared<const std::vector<Interval>>(std::move(bounds));
  domain.uniform_dimension_ = uniform;
  return domain;
}

SelectionDomain SelectionDomain::continuous(Box box) {
  if (box.dims.empty() || !(box.measure() > 0)) {
    throw EmptyDomainError("continuous domain has zero measure");
  }
  SelectionDomain domain;
  domain.kind_ = DomainKind::kSource;
  domain.bounds_ = std::make_shared<const std::vector<Interval>>(box.dims);
  domain.box_ = std::move(box);
  return domain;
}

SelectionDomain SelectionDomain::grid(const Box& box,
                                      std::span<const double> steps) {
  if (steps.size() != box.dimension()) {
    throw DomainError("grid needs one step per dimension");
  }
  std::vector<std::vector<double>> axes;
  for (std::size_t d = 0; d < box.dimension(); ++d) {
    axes.push_back(grid_axis(box.dims[d], steps[d]));
    if (axes.back().empty()) throw EmptyDomainError("grid axis is empty");
  }
  std::vector<DomainElement> elements;
  std::vector<std::size_t> index(axes.size(), 0);
  std::uint64_t next_id = 0;
  for (;;) {
    DomainElement e;
    e.id = ElementId{next_id++};
    for (std::size_t d = 0; d < axes.size(); ++d) e.point.push_back(axes[d][index[d]]);
    elements.push_back(std::move(e));
    std::size_t d = axes.size();
    while (d > 0) {
      --d;
      if (++index[d] < axes[d].size()) break;
      index[d] = 0;
      if (d == 0) return discrete(DomainKind::kSource, std::move(elements));
    }
  }
}

double SelectionDomain::size() const {
  if (is_discrete()) return static_cast<double>(elements_->size());
  return box_->measure();
}

std::size_t SelectionDomain::dimension() const {
  if (is_discrete()) return elements_->front().point.size();
  return box_->dimension();
}

std::span<const DomainElement> SelectionDomain::elements() const {
  if (!is_discrete()) throw DomainError("continuous domain has no element list");
  return *elements_;
}

const DomainElement& SelectionDomain::element(std::size_t position) const {
  return elements()[position];
}

std::optional<std::size_t> SelectionDomain::position_of(ElementId id) const {
  auto elems = elements();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i].id == id) return i;
  }
  return std::nullopt;
}

const Box& SelectionDomain::box() const {
  if (is_discrete()) throw DomainError("discrete domain has no box");
  return *box_;
}

std::span<const Interval> SelectionDomain::bounds() const { return *bounds_; }

bool SelectionDomain::operator==(const SelectionDomain& other) const {
  if (kind_ != other.kind_ || is_discrete() != other.is_discrete()) return false;
  if (is_discrete()) {
    return elements_ == other.elements_ || *elements_ == *other.elements_;
  }
  return *box_ == *other.box_;
}

PartitionScheme PartitionScheme::validate(SelectionDomain domain,
                                          std::vector<Subdomain> subdomains) {
  if (subdomains.empty()) throw EmptySubdomainError("partition has no subdomains");
  PartitionScheme scheme;

  if (!domain.is_discrete()) {
    const Box& whole = domain.box();
    double total = 0;
    for (std::size_t i = 0; i < subdomains.size(); ++i) {
      const Box* box = std::get_if<Box>(&subdomains[i].members);
      if (box == nullptr || box->dimension() != whole.dimension()) {
        throw DomainError("subdomain " + std::to_string(i + 1) +
                          " is not a box of the domain's dimension");
      }
      const double m = box->measure();
      if (!(m > 0)) {
        throw EmptySubdomainError("subdomain " + std::to_string(i + 1) +
                                  " has zero size");
      }
      for (std::size_t d = 0; d < whole.dimension(); ++d) {
        if (!interval_within(box->dims[d], whole.dims[d])) {
          throw CoverageError("subdomain " + std::to_string(i + 1) +
                              " extends outside the domain");
        }
      }
      subdomains[i].size = m;
      total += m;
    }
    for (std::size_t i = 0; i < subdomains.size(); ++i) {
      for (std::size_t j = i + 1; j < subdomains.size(); ++j) {
        if (boxes_overlap(std::get<Box>(subdomains[i].members),
                          std::get<Box>(subdomains[j].members))) {
          throw OverlapError("subdomains " + std::to_string(i + 1) + " and " +
                             std::to_string(j + 1) + " overlap");
        }
      }
    }
    if (!close_rel(total, whole.measure())) {
      throw CoverageError("subdomain sizes sum to " + std::to_string(total) +
                          ", domain size is " + std::to_string(whole.measure()));
    }
    scheme.domain_ = std::move(domain);
    scheme.subdomains_ = std::move(subdomains);
    return scheme;
  }

  const auto elements = domain.elements();
  std::unordered_map<std::uint64_t, std::size_t> position;
  position.reserve(elements.size());
  for (std::size_t p = 0; p < elements.size(); ++p) position[elements[p].id.value] = p;

  constexpr auto kUnowned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(elements.size(), kUnowned);
  std::vector<std::vector<std::size_t>> positions(subdomains.size());
  for (std::size_t i = 0; i < subdomains.size(); ++i) {
    const auto* ids = std::get_if<std::vector<ElementId>>(&subdomains[i].members);
    if (ids == nullptr) {
      throw DomainError("subdomain " + std::to_string(i + 1) +
                        " must list element ids for a discrete domain");
    }
    if (ids->empty()) {
      throw EmptySubdomainError("subdomain " + std::to_string(i + 1) + " is empty");
    }
  }
  for (std::size_t i = 0; i < subdomains.size(); ++i) {
    for (ElementId id : std::get<std::vector<ElementId>>(subdomains[i].members)) {
      auto it = position.find(id.value);
      if (it == position.end()) {
        throw CoverageError("element " + std::to_string(id.value) +
                            " of subdomain " + std::to_string(i + 1) +
                            " is not in the domain");
      }
      if (owner[it->second] != kUnowned) {
        throw OverlapError("element " + std::to_string(id.value) +
                           " appears in subdomains " +
                           std::to_string(owner[it->second] + 1) + " and " +
                           std::to_string(i + 1));
      }
      owner[it->second] = i;
      positions[i].push_back(it->second);
    }
    std::sort(positions[i].begin(), positions[i].end());
    subdomains[i].size = static_cast<double>(positions[i].size());
  }
  for (std::size_t p = 0; p < owner.size(); ++p) {
    if (owner[p] == kUnowned) {
      throw CoverageError("element " + std::to_string(elements[p].id.value) +
                          " belongs to no subdomain");
    }
  }
  scheme.domain_ = std::move(domain);
  scheme.subdomains_ = std::move(subdomains);
  scheme.positions_ = std::move(positions);
  scheme.owner_ = std::move(owner);
  return scheme;
}

std::vector<double> PartitionScheme::sizes() const {
  std::vector<double> out;
  out.reserve(subdomains_.size());
  for (const auto& s : subdomains_) out.push_back(s.size);
  return out;
}

std::span<const std::size_t> PartitionScheme::member_positions(std::size_t i) const {
  if (!domain_.is_discrete()) throw DomainError("continuous scheme has no positions");
  return positions_.at(i);
}

std::size_t PartitionScheme::subdomain_of(std::size_t position) const {
  if (!domain_.is_discrete()) throw DomainError("continuous scheme has no positions");
  return owner_.at(position);
}

std::optional<std::size_t> PartitionScheme::subdomain_of_point(const Point& p) const {
  for (std::size_t i = 0; i < subdomains_.size(); ++i) {
    if (const Box* box = std::get_if<Box>(&subdomains_[i].members)) {
      if (box->contains(p)) return i;
    }
  }
  return std::nullopt;
}

PartitionScheme validate_partition(const PartitionScheme& scheme) {
  std::vector<Subdomain> subs(scheme.subdomains().begin(), scheme.subdomains().end());
  return PartitionScheme::validate(scheme.domain(), std::move(subs));
}

PartitionScheme partition_by_boxes(const SelectionDomain& domain,
                                   std::span<const Box> boxes) {
  if (!domain.is_discrete()) {
    std::vector<Subdomain> subs;
    for (const auto& b : boxes) subs.push_back(box_subdomain(b));
    return PartitionScheme::validate(domain, std::move(subs));
  }
  const auto elements = domain.elements();
  std::vector<std::vector<ElementId>> members(boxes.size());
  for (const auto& e : elements) {
    std::optional<std::size_t> home;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (!boxes[i].contains(e.point)) continue;
      if (home) {
        throw OverlapError("element " + std::to_string(e.id.value) +
                           " lies in boxes " + std::to_string(*home + 1) + " and " +
                           std::to_string(i + 1));
      }
      home = i;
    }
    if (!home) {
      throw CoverageError("element " + std::to_string(e.id.value) +
                          " lies in no box");
    }
    members[*home].push_back(e.id);
  }
  std::vector<Subdomain> subs;
  for (auto& m : members) subs.push_back(id_subdomain(std::move(m)));
  return PartitionScheme::validate(domain, std::move(subs));
}

PartitionScheme partition_by_labels(const SelectionDomain& domain,
                                    std::span<const std::size_t> labels) {
  const auto elements = domain.elements();
  if (labels.size() != elements.size()) {
    throw DomainError("one label per element required");
  }
  std::map<std::size_t, std::vector<ElementId>> groups;
  for (std::size_t p = 0; p < elements.size(); ++p) {
    groups[labels[p]].push_back(elements[p].id);
  }
  std::vector<Subdomain> subs;
  for (auto& [label, ids] : groups) subs.push_back(id_subdomain(std::move(ids)));
  return PartitionScheme::validate(domain, std::move(subs));
}

}  // namespace psalm
