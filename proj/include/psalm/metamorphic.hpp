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

#ifndef PSALM_METAMORPHIC_HPP_
#define PSALM_METAMORPHIC_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psalm/partition.hpp"
#include "psalm/rng.hpp"

namespace psalm {

using Output = std::vector<double>;
using Program = std::function<Output(const Point&)>;

// Relative tolerance 1e-9 with an absolute floor of 1e-12.
inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

bool approx_equal(double a, double b);
bool approx_equal(const Output& a, const Output& b);
// a <= b up to the same tolerance.
bool approx_le(double a, double b);

// Follow-up coordinate d = offset[d] + sum_j coeffs[d][j] * source_j[d].
struct AffineFollowup {
  Point offset;
  std::vector<std::vector<double>> coeffs;
};

struct MetamorphicRelation {
  std::string id;
  std::string description;
  std::size_t source_arity = 1;    // r
  std::size_t followup_arity = 1;
  std::size_t mgs_per_source = 1;  // L

  // Deterministic. `variant` is in [0, mgs_per_source) and distinguishes the
  // L groups a source takes part in.
  std::function<std::vector<Point>(std::span<const Point> sources,
                                   std::size_t variant)>
      generate_followups;
  std::function<bool(std::span<const Output> source_outputs,
                     std::span<const Output> followup_outputs)>
      relation_holds;
  // MR-induced constraint on a single source input. Empty means "always".
  std::function<bool(const Point&)> input_constraint;
  // Optional closed form of generate_followups, indexed [variant][followup].
  std::vector<std::vector<AffineFollowup>> affine;

  bool admits(const Point& source) const {
    return !input_constraint || input_constraint(source);
  }
};

struct MetamorphicGroup {
  std::string mr_id;
  std::vector<Point> sources;
  std::vector<Point> followups;
  std::size_t variant = 0;

  // Sources followed by follow-ups, flattened.
  Point features() const;
  bool operator==(const MetamorphicGroup&) const = default;
};

enum class PairingPolicy {
  kShuffleSequential,  // seeded shuffle, then consecutive r-tuples
  kInOrder,            // consecutive r-tuples in the given order
};

// One MG per source and variant for r = 1. For r > 1 each of the L rounds
// groups the (shuffled) sources into consecutive r-tuples, so every source
// takes part in exactly L groups.
// Throws ArityError (length not divisible by r) and ConstraintError.
std::vector<MetamorphicGroup> construct_mgs(
    const MetamorphicRelation& mr, std::span<const Point> sources,
    PairingPolicy policy, Rng& rng);

// Union of per-MR group lists as an MG selection domain. Element i refers to
// groups[i]; its origin is the MR id and its point the MG feature vector,
// zero-padded to the longest feature vector in the domain.
struct MgDomain {
  SelectionDomain domain;
  std::vector<MetamorphicGroup> groups;
};

// Throws DuplicateMgError when (mr_id, sources, variant) repeats.
MgDomain build_mg_domain(std::span<const std::vector<MetamorphicGroup>> per_mr);

// Runs the program on every source and follow-up input and returns true iff
// the relation is violated. Exceptions from the program surface as
// ExecutionError.
bool check_mr(const Program& program, const MetamorphicRelation& mr,
              const MetamorphicGroup& mg);

// Line format: "<mr_id>\t<variant>\t<sources>\t<followups>", inputs joined
// by ';' and coordinates by ','. Numbers use the shortest round-trip form.
std::string format_mg(const MetamorphicGroup& mg);
MetamorphicGroup parse_mg(std::string_view line);
void write_mgs(std::ostream& out, std::span<const MetamorphicGroup> mgs);
std::vector<MetamorphicGroup> read_mgs(std::istream& in);

// Feasible source domain of `mr` inside `input_domain`: elements admitted by
// the MR whose follow-ups stay in the domain. Continuous domains with an
// affine, sign-separable follow-up form get the tightened box; otherwise the
// box is filtered on a grid of `grid_step` and a discrete domain returned.
// Throws EmptyDomainError.
SelectionDomain derive_source_domain(const SelectionDomain& input_domain,
                                     const MetamorphicRelation& mr,
                                     double grid_step = 1.0);

}  // namespace psalm

#endif  // PSALM_METAMORPHIC_HPP_
