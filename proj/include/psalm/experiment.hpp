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

#ifndef PSALM_EXPERIMENT_HPP_
#define PSALM_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psalm/metamorphic.hpp"
#include "psalm/partition.hpp"
#include "psalm/rng.hpp"
#include "psalm/stats.hpp"
#include "psalm/strategies.hpp"
#include "psalm/subjects.hpp"

namespace psalm {

// How the MG domain is divided: by the source subdomain of each group's
// first source, or by relation.
enum class MgSchemeKind { kBySourceSubdomain, kByMr };

// Config ids: "by-source-subdomain", "by-mr". Throws ConfigError.
MgSchemeKind parse_mg_scheme(std::string_view id);
std::string_view mg_scheme_id(MgSchemeKind kind);

struct SubjectSpec {
  std::string id;
  // Source partition; empty means the subject's default scheme.
  std::vector<Box> scheme;
};

struct ExperimentConfig {
  std::vector<SubjectSpec> subjects;
  // Empty keeps every mutant. Entries are "subject:mutant" or a bare mutant id.
  std::vector<std::string> mutants;
  std::vector<std::string> strategies = {"rs", "psalm", "art", "mt-art"};
  std::vector<Level> levels = {Level::kSt, Level::kMg};
  std::size_t trials = 30;
  std::size_t iterations = 1000;
  std::size_t selection_multiplier = 3;
  std::uint64_t master_seed = 0;
  std::size_t art_k = kDefaultCandidateSetSize;
  MgSchemeKind mg_scheme = MgSchemeKind::kBySourceSubdomain;

  // Throws ConfigError.
  void validate() const;
};

// Mutant-independent state of one subject: the usable source domain and its
// partition, and the full MG domain (every source under every MR, L = 1)
// with its partition. Read-only once built.
struct PreparedSubject {
  std::string subject_id;
  SelectionDomain source_domain;
  std::optional<PartitionScheme> source_scheme{};
  std::vector<MetamorphicRelation> single_source_mrs{};
  std::vector<MetamorphicRelation> multi_source_mrs{};
  // Least common multiple of the source arities of multi-source MRs.
  std::size_t arity_lcm = 1;
  std::optional<MgDomain> mg{};
  std::optional<PartitionScheme> mg_scheme{};

  // n = multiplier * k, rounded up to a multiple of arity_lcm at level st.
  std::size_t budget(Level level, std::size_t multiplier) const;
};

// Multi-source groups are formed by a seeded shuffle of the source domain
// (truncated to a multiple of r) drawn from `pairing_seed`.
PreparedSubject prepare_subject(const SubjectProgram& subject, std::span<const Box> scheme,
                                MgSchemeKind mg_scheme, std::uint64_t pairing_seed);

// Detection data of one program on a prepared subject.
struct FaultMap {
  // Some single-source MG of the source is violated.
  std::vector<bool> source_hit;
  // The MG at this MG-domain position is violated.
  std::vector<bool> mg_hit;
  // Used for multi-source MGs built from selected sources at level st.
  Program program;
};

FaultMap map_faults(const PreparedSubject& prepared, const Program& program);

// Fraction of `iterations` fresh selections of n units whose MGs include a
// violated one. At level st every selected source is expanded under every
// MR (multi-source MRs group the selected sources by a seeded shuffle); at
// level mg units are drawn from the prebuilt MG domain. ART runs at level
// st and MT-ART at level mg; other pairings throw DomainKindError.
double estimate_p_measure(const PreparedSubject& prepared, const FaultMap& faults,
                          Strategy strategy, Level level, std::size_t n,
                          std::size_t iterations, Rng& rng,
                          std::size_t art_k = kDefaultCandidateSetSize);

// Convenience form on a registered subject with its default scheme.
// Throws UnknownMutantError.
double estimate_p_measure(const SubjectProgram& subject,
                          std::optional<std::string_view> mutant_id, Strategy strategy,
                          Level level, std::size_t n, std::size_t iterations, Rng& rng,
                          std::size_t art_k = kDefaultCandidateSetSize);

// Whether `strategy` is run at `level` in experiments.
bool runs_at(Strategy strategy, Level level);

struct TrialResult {
  std::string subject;
  std::string mutant;
  std::string strategy;
  Level level = Level::kSt;
  std::size_t trial = 0;
  // Detecting iterations over all iterations.
  double p_estimate = 0;
};

// level is "st", "mg", or "mg-vs-st" (PSALM at level mg against level st).
struct SummaryRow {
  std::string subject;  // or "ALL"
  std::string level;
  std::string strategy_a;
  std::string strategy_b;
  ComparisonSummary summary;
};

struct CategorizationRow {
  std::string subject;  // or "ALL"
  CategoryCounts counts;
};

struct CategorizationTable {
  std::string level;
  std::string strategy_a;
  std::string strategy_b;
  std::vector<CategorizationRow> rows;

  std::string file_name() const;
};

struct DesignRow {
  std::string subject;
  Level level = Level::kSt;
  std::size_t k = 0;
  std::size_t n = 0;            // multiplier * k
  std::size_t n_effective = 0;  // after rounding to the MR arities
  std::size_t domain_size = 0;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  std::vector<SummaryRow> summary;
  std::vector<CategorizationTable> categorization;
  std::vector<DesignRow> design;
};

// Runs every (subject, mutant, strategy, level) cell for `trials` trials on
// `jobs` worker threads. Each trial has its own stream derived from the
// master seed and the cell, so results do not depend on `jobs`.
// Throws ConfigError and UnknownIdError.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const SubjectRegistry& registry, std::size_t jobs = 1);

void write_raw_csv(std::ostream& out, const ExperimentResult& result);
void write_summary_csv(std::ostream& out, const ExperimentResult& result);
void write_categorization_csv(std::ostream& out, const CategorizationTable& table);
void write_design_csv(std::ostream& out, const ExperimentResult& result);

// raw.csv, summary.csv, design.csv and one categorization_*.csv per
// comparison. Returns the written paths.
std::vector<std::filesystem::path> write_results(const std::filesystem::path& dir,
                                                 const ExperimentResult& result);

// Throws FormatError.
std::vector<TrialResult> read_raw_csv(std::istream& in);

// Summary rows and categorization tables from trial rows: PSALM against
// every other strategy at each level, and PSALM at level mg against level st,
// per subject and over all subjects. Per-trial means over mutants feed the
// summary; per-mutant trial samples feed the categorization.
void summarize(ExperimentResult& result, double alpha = 0.05);

}  // namespace psalm

#endif  // PSALM_EXPERIMENT_HPP_
