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

#ifndef PSALM_PARTITION_HPP_
#define PSALM_PARTITION_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace psalm {

// A program input (source or follow-up test case), one coordinate per
// input dimension.
using Point = std::vector<double>;

struct ElementId {
  std::uint64_t value = 0;
  auto operator<=>(const ElementId&) const = default;
};

// One selectable unit. Source elements carry their input in `point`; MG
// elements carry the concatenated source and follow-up inputs as a feature
// vector, the index of the group in its owning list, and the MR id.
struct DomainElement {
  ElementId id;
  Point point;
  std::optional<std::size_t> mg_index;
  std::string origin;

  bool operator==(const DomainElement&) const = default;
};

enum class DomainKind { kSource, kMg };

struct Interval {
  double lo = 0;
  double hi = 0;
  bool lo_closed = true;
  bool hi_closed = false;

  double length() const { return hi - lo; }
  bool contains(double x) const {
    return (lo_closed ? x >= lo : x > lo) && (hi_closed ? x <= hi : x < hi);
  }
  bool operator==(const Interval&) const = default;
};

// Closed interval [lo, hi].
inline Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
// Half-open interval [lo, hi).
inline Interval half_open(double lo, double hi) { return {lo, hi, true, false}; }

// Axis-aligned box; one interval per input dimension.
struct Box {
  std::vector<Interval> dims;

  std::size_t dimension() const { return dims.size(); }
  double measure() const;
  bool contains(const Point& p) const;
  bool operator==(const Box&) const = default;
};

// True when the two boxes share a set of positive measure or a common point.
bool boxes_overlap(const Box& a, const Box& b);

// A finite list of elements or a continuous box. Copies share the element
// storage.
class SelectionDomain {
 public:
  // Throws EmptyDomainError when `elements` is empty and DomainError on
  // duplicate ids.
  static SelectionDomain discrete(DomainKind kind,
                                  std::vector<DomainElement> elements);
  // Throws EmptyDomainError for a box of zero measure.
  static SelectionDomain continuous(Box box);
  // Discretizes `box` on a regular grid, `steps[d]` apart along dimension d,
  // starting at the lower bound. Ids are assigned row-major from 0.
  static SelectionDomain grid(const Box& box, std::span<const double> steps);

  DomainKind kind() const { return kind_; }
  bool is_discrete() const { return elements_ != nullptr; }
  // Element count for discrete domains, box measure for continuous ones.
  double size() const;
  std::size_t dimension() const;

  // Discrete only.
  std::span<const DomainElement> elements() const;
  const DomainElement& element(std::size_t position) const;
  std::optional<std::size_t> position_of(ElementId id) const;
  // Continuous only.
  const Box& box() const;

  // Per-dimension [min, max] of the domain, used for normalization.
  // Computed once at construction.
  std::span<const Interval> bounds() const;
  // False when discrete elements carry points of differing lengths.
  bool uniform_dimension() const { return uniform_dimension_; }

  bool operator==(const SelectionDomain& other) const;

 private:
  DomainKind kind_ = DomainKind::kSource;
  std::shared_ptr<const std::vector<DomainElement>> elements_;
  std::optional<Box> box_;
  std::shared_ptr<const std::vector<Interval>> bounds_;
  bool uniform_dimension_ = true;
};

// Members are element ids (discrete domains) or a box (continuous domains).
struct Subdomain {
  std::variant<std::vector<ElementId>, Box> members;
  // Filled in by validation: element count or box measure.
  double size = 0;

  bool operator==(const Subdomain&) const = default;
};

inline Subdomain box_subdomain(Box box) { return {std::move(box), 0}; }
inline Subdomain id_subdomain(std::vector<ElementId> ids) {
  return {std::move(ids), 0};
}

// A disjoint, covering division of a domain. Only obtainable through
// validation, so every instance satisfies the partition invariants.
class PartitionScheme {
 public:
  // Throws EmptySubdomainError, OverlapError or CoverageError.
  static PartitionScheme validate(SelectionDomain domain,
                                  std::vector<Subdomain> subdomains);

  const SelectionDomain& domain() const { return domain_; }
  std::span<const Subdomain> subdomains() const { return subdomains_; }
  std::size_t k() const { return subdomains_.size(); }
  std::vector<double> sizes() const;

  // Discrete domains: domain positions of the members of subdomain i
  // (0-based), in domain order.
  std::span<const std::size_t> member_positions(std::size_t i) const;
  // Discrete domains: subdomain (0-based) holding the element at `position`.
  std::size_t subdomain_of(std::size_t position) const;
  // Continuous domains: subdomain containing `p`, if any.
  std::optional<std::size_t> subdomain_of_point(const Point& p) const;

  bool operator==(const PartitionScheme& other) const {
    return domain_ == other.domain_ && subdomains_ == other.subdomains_;
  }

 private:
  SelectionDomain domain_;
  std::vector<Subdomain> subdomains_;
  std::vector<std::vector<std::size_t>> positions_;
  std::vector<std::size_t> owner_;
};

// Re-checks every invariant; returns an identical scheme.
PartitionScheme validate_partition(const PartitionScheme& scheme);

// Discrete domain split by boxes over element points. Elements outside every
// box raise CoverageError, elements in two boxes raise OverlapError.
PartitionScheme partition_by_boxes(const SelectionDomain& domain,
                                   std::span<const Box> boxes);

// Discrete domain split by a label per element position. Subdomains are
// ordered by label value; labels need not be contiguous.
PartitionScheme partition_by_labels(const SelectionDomain& domain,
                                    std::span<const std::size_t> labels);

}  // namespace psalm

#endif  // PSALM_PARTITION_HPP_
