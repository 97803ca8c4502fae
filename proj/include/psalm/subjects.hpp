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

#ifndef PSALM_SUBJECTS_HPP_
#define PSALM_SUBJECTS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psalm/metamorphic.hpp"
#include "psalm/partition.hpp"

namespace psalm {

enum class InputKind { kReal, kInteger };

struct InputDimension {
  std::string name;
  Interval bounds;
  InputKind kind = InputKind::kReal;
  // Resolution of the discretized domain used by experiments and oracles.
  double grid_step = 1.0;
};

// A seeded fault: one classic mutation operator applied to the reference.
struct Mutant {
  std::string id;
  std::string description;
  Program mutated_fn;
};

struct SubjectProgram {
  std::string id;
  std::string description;
  std::vector<InputDimension> inputs;
  Program reference_fn;
  std::vector<Mutant> mutants;
  std::vector<MetamorphicRelation> mrs;
  // Default source partition, as boxes over the input space.
  std::vector<Box> default_scheme;

  Box input_box() const;
  // True when `input` lies in the input domain (and is integral where the
  // dimension is integer-valued).
  bool accepts(const Point& input) const;
  // The input domain discretized on each dimension's grid step.
  SelectionDomain grid_domain() const;
  // Grid domain narrowed by every MR's input constraint and follow-up
  // closure, i.e. the sources usable with all MRs at once.
  SelectionDomain source_domain() const;

  // Throws UnknownMutantError.
  const Mutant& mutant(std::string_view mutant_id) const;
  // Throws UnknownIdError.
  const MetamorphicRelation& mr(std::string_view mr_id) const;
  // Reference when `mutant_id` is empty, else the mutant.
  Program program(std::optional<std::string_view> mutant_id) const;
};

// Runs the reference (no mutant id) or the named mutant on `input`.
// Throws UnknownMutantError and InputDomainError.
Output evaluate(const SubjectProgram& subject,
                std::optional<std::string_view> mutant_id, const Point& input);

class SubjectRegistry {
 public:
  // Checks every mutant against the reference on the grid domain (all points
  // up to 10^5, otherwise 10^5 seeded samples) and throws RegistrationError
  // for an equivalent mutant or a duplicate id.
  void add(SubjectProgram subject);

  // Throws UnknownIdError.
  const SubjectProgram& get(std::string_view id) const;
  std::span<const SubjectProgram> all() const { return subjects_; }

 private:
  std::vector<SubjectProgram> subjects_;
};

// The built-in subjects: "sin", "mor", "int", "ges", "copys". Built once;
// immutable afterwards.
const SubjectRegistry& register_subjects();

// Individual subject factories (unregistered).
SubjectProgram make_sine_subject();
SubjectProgram make_mortgage_rate_subject();
SubjectProgram make_income_tax_subject();
SubjectProgram make_geometric_sum_subject();
SubjectProgram make_copy_sign_subject();

// Builds an r = 1 relation with a single follow-up per source.
MetamorphicRelation unary_relation(
    std::string id, std::string description,
    std::function<Point(const Point&)> followup,
    std::function<bool(const Output& source, const Output& followup)> holds,
    std::function<bool(const Point&)> constraint = {});

}  // namespace psalm

#endif  // PSALM_SUBJECTS_HPP_
