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
#include <utility>

#include "psalm/error.hpp"
#include "psalm/rng.hpp"
#include "psalm/subjects.hpp"

namespace psalm {
namespace {

constexpr std::size_t kExhaustiveLimit = 100000;
constexpr std::uint64_t kRegistrationSeed = 0x5eed0f5u;

bool differs(const Output& a, const Output& b) {
  if (a.size() != b.size()) return true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool na = std::isnan(a[i]);
    const bool nb = std::isnan(b[i]);
    if (na != nb) return true;
    if (!na && !approx_equal(a[i], b[i])) return true;
  }
  return false;
}

}  // namespace

Box SubjectProgram::input_box() const {
  Box box;
  for (const auto& dim : inputs) box.dims.push_back(dim.bounds);
  return box;
}

bool SubjectProgram::accepts(const Point& input) const {
  if (input.size() != inputs.size()) return false;
  for (std::size_t d = 0; d < inputs.size(); ++d) {
    if (!std::isfinite(input[d]) || !inputs[d].bounds.contains(input[d])) return false;
    if (inputs[d].kind == InputKind::kInteger && input[d] != std::floor(input[d])) {
      return false;
    }
  }
  return true;
}

SelectionDomain SubjectProgram::grid_domain() const {
  std::vector<double> steps;
  for (const auto& dim : inputs) steps.push_back(dim.grid_step);
  return SelectionDomain::grid(input_box(), steps);
}

SelectionDomain SubjectProgram::source_domain() const {
  const SelectionDomain grid = grid_domain();
  std::vector<DomainElement> kept;
  for (const auto& e : grid.elements()) {
    bool ok = true;
    for (const auto& mr : mrs) {
      if (!mr.admits(e.point)) {
        ok = false;
        break;
      }
      if (mr.source_arity != 1) continue;
      for (std::size_t v = 0; ok && v < mr.mgs_per_source; ++v) {
        for (const Point& f : mr.generate_followups(std::span<const Point>(&e.point, 1), v)) {
          if (!accepts(f)) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) break;
    }
    if (ok) kept.push_back(e);
  }
  if (kept.empty()) throw EmptyDomainError("subject " + id + " has no usable source input");
  return SelectionDomain::discrete(DomainKind::kSource, std::move(kept));
}

const Mutant& SubjectProgram::mutant(std::string_view mutant_id) const {
  for (const auto& m : mutants) {
    if (m.id == mutant_id) return m;
  }
  throw UnknownMutantError("subject " + id + " has no mutant '" +
                           std::string(mutant_id) + "'");
}

const MetamorphicRelation& SubjectProgram::mr(std::string_view mr_id) const {
  for (const auto& r : mrs) {
    if (r.id == mr_id) return r;
  }
  throw UnknownIdError("subject " + id + " has no MR '" + std::string(mr_id) + "'");
}

Program SubjectProgram::program(std::optional<std::string_view> mutant_id) const {
  return mutant_id ? mutant(*mutant_id).mutated_fn : reference_fn;
}

Output evaluate(const SubjectProgram& subject,
                std::optional<std::string_view> mutant_id, const Point& input) {
  const Program& fn = mutant_id ? subject.mutant(*mutant_id).mutated_fn
                                : subject.reference_fn;
  if (!subject.accepts(input)) {
    throw InputDomainError("input outside the domain of subject " + subject.id);
  }
  return fn(input);
}

void SubjectRegistry::add(SubjectProgram subject) {
  for (const auto& s : subjects_) {
    if (s.id == subject.id) {
      throw RegistrationError("duplicate subject id '" + subject.id + "'");
    }
  }
  for (std::size_t i = 0; i < subject.mutants.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (subject.mutants[i].id == subject.mutants[j].id) {
        throw RegistrationError("duplicate mutant id '" + subject.mutants[i].id + "'");
      }
    }
  }
  const SelectionDomain grid = subject.grid_domain();
  const auto elements = grid.elements();
  std::vector<std::size_t> probe;
  if (elements.size() <= kExhaustiveLimit) {
    probe.resize(elements.size());
    for (std::size_t i = 0; i < probe.size(); ++i) probe[i] = i;
  } else {
    Rng rng(kRegistrationSeed);
    for (std::size_t i = 0; i < kExhaustiveLimit; ++i) {
      probe.push_back(rng.uniform_index(elements.size()));
    }
  }
  std::vector<Output> reference;
  reference.reserve(probe.size());
  for (std::size_t p : probe) reference.push_back(subject.reference_fn(elements[p].point));
  for (const auto& m : subject.mutants) {
    bool distinct = false;
    for (std::size_t i = 0; i < probe.size() && !distinct; ++i) {
      distinct = differs(m.mutated_fn(elements[probe[i]].point), reference[i]);
    }
    if (!distinct) {
      throw RegistrationError("mutant '" + m.id + "' of subject " + subject.id +
                              " is equivalent to the reference on its grid");
    }
  }
  subjects_.push_back(std::move(subject));
}

const SubjectProgram& SubjectRegistry::get(std::string_view id) const {
  for (const auto& s : subjects_) {
    if (s.id == id) return s;
  }
  throw UnknownIdError("unknown subject '" + std::string(id) + "'");
}

const SubjectRegistry& register_subjects() {
  static const SubjectRegistry registry = [] {
    SubjectRegistry r;
    r.add(make_sine_subject());
    r.add(make_mortgage_rate_subject());
    r.add(make_income_tax_subject());
    r.add(make_geometric_sum_subject());
    r.add(make_copy_sign_subject());
    return r;
  }();
  return registry;
}

MetamorphicRelation unary_relation(
    std::string id, std::string description,
    std::function<Point(const Point&)> followup,
    std::function<bool(const Output& source, const Output& followup)> holds,
    std::function<bool(const Point&)> constraint) {
  MetamorphicRelation mr;
  mr.id = std::move(id);
  mr.description = std::move(description);
  mr.generate_followups = [f = std::move(followup)](std::span<const Point> src,
                                                    std::size_t) {
    return std::vector<Point>{f(src[0])};
  };
  mr.relation_holds = [h = std::move(holds)](std::span<const Output> s,
                                             std::span<const Output> f) {
    return h(s[0], f[0]);
  };
  mr.input_constraint = std::move(constraint);
  return mr;
}

}  // namespace psalm
