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

#ifndef PSALM_ORACLE_HPP_
#define PSALM_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psalm/metamorphic.hpp"
#include "psalm/partition.hpp"
#include "psalm/strategies.hpp"

namespace psalm {

// Finite bipartite instance: which sources each MG contains and whether the
// MG violates its relation on the program under test.
struct MgIncidence {
  std::size_t source_count = 0;
  std::vector<std::vector<std::size_t>> mg_sources;
  std::vector<bool> violated;

  std::size_t mg_count() const { return mg_sources.size(); }
  // MGs containing each source.
  std::vector<std::vector<std::size_t>> source_mgs() const;
};

struct FailureProfile {
  std::vector<double> vp_by_source;
  std::vector<double> vr_by_subdomain;
  double vr_global = 0;
  std::vector<std::size_t> mg_failures_by_subdomain;  // m_i
  std::size_t mg_failures_total = 0;                  // m
  std::vector<std::size_t> mg_sizes_by_subdomain;     // d_i^MG
  std::size_t mg_total = 0;                           // d^MG
};

// Fraction of the MGs containing `source` that are violated.
// Throws EmptyMgSetError.
double compute_vp(const MgIncidence& incidence, std::size_t source);

// vp of `st` over every group of `mgs` whose sources include it, checked on
// `program`. Throws EmptyMgSetError and UnknownIdError (MR id not in `mrs`).
double compute_vp(const Point& st, std::span<const MetamorphicGroup> mgs,
                  std::span<const MetamorphicRelation> mrs, const Program& program);

// Mean of the given vp values. Throws EmptySetError.
double compute_vr(std::span<const double> vp_values);

// source_labels[s] is the source subdomain of s (k_st of them); mg_labels[g]
// the MG subdomain of g (k_mg of them). Throws ShapeMismatchError.
FailureProfile build_profile(const MgIncidence& incidence,
                             std::span<const std::size_t> source_labels, std::size_t k_st,
                             std::span<const std::size_t> mg_labels, std::size_t k_mg);

// P_p^st = 1 - prod (1 - vr_i)^n_i, P_r^st = 1 - (1 - vr)^n,
// P_p^MG = 1 - prod (1 - m_i / d_i^MG)^n_i, P_r^MG = 1 - (1 - m / d^MG)^n.
// For psalm `allocation` holds n_i per subdomain (real values allowed); for
// rs its entries are summed into n. Throws ShapeMismatchError and
// UnknownStrategyError (strategies other than psalm and rs).
double p_analytic(Level level, Strategy strategy, const FailureProfile& profile,
                  std::span<const double> allocation);

// One pool of equally likely units; each unit has equally likely outcomes
// (true = a violated MG is exercised).
using EnumerationPool = std::vector<std::vector<bool>>;

// Probability that drawing counts[i] units with replacement from pools[i],
// and one outcome per drawn unit, exercises at least one violated MG.
// Evaluated by full enumeration; meant for tiny instances.
double enumerate_detection_probability(std::span<const EnumerationPool> pools,
                                       std::span<const std::size_t> counts);

struct EquivalenceWitness {
  Level side = Level::kSt;   // which scheme's subdomain fails the closure
  std::size_t subdomain = 0; // 0-based, on that side
  std::size_t element = 0;   // offending MG (side st) or source (side mg)
};

struct EquivalenceResult {
  bool equivalent = true;
  std::optional<EquivalenceWitness> witness;
};

// Two-way closure check between a source scheme and an MG scheme.
// mg_membership[g] lists the source positions of MG position g.
EquivalenceResult check_partition_equivalence(
    const PartitionScheme& source_scheme, const PartitionScheme& mg_scheme,
    std::span<const std::vector<std::size_t>> mg_membership);

// Same check on plain labels.
EquivalenceResult check_partition_equivalence(std::span<const std::size_t> source_labels,
                                              std::size_t k_st,
                                              std::span<const std::size_t> mg_labels,
                                              std::size_t k_mg,
                                              const MgIncidence& incidence);

// Source-level (check 1) or MG-level (check 2) comparison instance.
// For level st `failures[i]` is vr_i; for level mg it is m_i.
struct ProportionalInstance {
  Level level = Level::kSt;
  std::vector<double> sizes;
  std::vector<double> failures;
  double n = 0;
};

struct PropositionOutcome {
  bool pass = true;
  double p_psalm = 0;
  double p_other = 0;  // RS for checks 1-2, P_p^MG for check 3
  std::string detail;
};

// P_p >= P_r - 1e-12 with n_i = n d_i / d.
PropositionOutcome check_proportional(const ProportionalInstance& instance);

// Equivalent schemes with a fixed number of MGs per source.
struct EquivalentInstance {
  MgIncidence incidence;
  std::vector<std::size_t> source_labels;
  std::size_t k_st = 0;
  std::vector<std::size_t> mg_labels;
  std::size_t k_mg = 0;
  std::size_t r = 1;  // sources per MG
  std::size_t L = 1;  // MGs per source
  double n = 0;
};

// |P_p^st - P_p^MG| <= 1e-12 and r |D_i^MG| = L |D_i^st| for every i.
// Throws InstanceError when the schemes are not equivalent, some source is
// not in exactly L MGs, or some MG does not hold exactly r sources.
PropositionOutcome check_equivalent(const EquivalentInstance& instance);

// Random instances: k in [1, 8], sizes in [1, 100], vp on a 1/16 grid.
ProportionalInstance random_proportional_instance(Level level, Rng& rng);
EquivalentInstance random_equivalent_instance(Rng& rng);

// Greedy reduction of a failing instance: drops subdomains and shrinks sizes
// and n while `fails` stays true.
ProportionalInstance shrink_instance(
    ProportionalInstance instance,
    const std::function<bool(const ProportionalInstance&)>& fails);

struct VerificationReport {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::vector<std::string> witnesses;
  // Checks 1-2 only: the same instances under BMA-MT integer counts.
  std::size_t integer_allocation_below = 0;
  double max_integer_gap = 0;
};

// `which` in {1, 2, 3}; instances are split into `jobs` shards with seeds
// derived from `seed`, and the report does not depend on `jobs`.
// Throws InstanceError for other values of `which`.
VerificationReport verify_proposition(int which, std::size_t instances, std::uint64_t seed,
                                      std::size_t jobs = 1);

enum class CaseTable { kProp4, kProp5 };

struct CaseRow {
  int index = 0;
  double p_st = 0;
  double p_mg = 0;
  char relation = '=';  // '<', '=' or '>' for p_st versus p_mg
};

// The three hand-built cases of each table, one selection per subdomain.
std::vector<CaseRow> reproduce_cases(CaseTable table);

// The published table cells, rounded to two decimals.
std::vector<CaseRow> table_cells(CaseTable table);

// Absolute tolerance for comparisons against two-decimal cells (half a unit
// in the last place, plus rounding slack).
inline constexpr double kCellTolerance = 0.005 + 1e-12;

// True when the computed row matches the cell within kCellTolerance and has
// the same relation.
bool matches_cell(const CaseRow& computed, const CaseRow& cell);

// The encoded structure behind one case (for inspection and tests).
EquivalentInstance case_instance(CaseTable table, int index);

}  // namespace psalm

#endif  // PSALM_ORACLE_HPP_
