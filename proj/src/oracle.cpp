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
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

#include "psalm/allocation.hpp"
#include "psalm/error.hpp"
#include "psalm/oracle.hpp"

namespace psalm {
namespace {

constexpr double kExactTol = 1e-12;

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string fmt_list(const std::vector<T>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt(static_cast<double>(xs[i]));
  }
  return out + "]";
}

double sum(std::span<const double> xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s;
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// 1 - prod (1 - theta_i)^n_i.
double p_detect(std::span<const double> theta, std::span<const double> counts) {
  double miss = 1;
  for (std::size_t i = 0; i < theta.size(); ++i) miss *= std::pow(1 - theta[i], counts[i]);
  return clamp01(1 - miss);
}

std::vector<double> ideal_counts(std::span<const double> sizes, double n) {
  const double total = sum(sizes);
  std::vector<double> out;
  for (double d : sizes) out.push_back(n * d / total);
  return out;
}

std::string describe(const ProportionalInstance& in) {
  return std::string("level=") + std::string(level_id(in.level)) + " k=" +
         std::to_string(in.sizes.size()) + " sizes=" + fmt_list(in.sizes) +
         " failures=" + fmt_list(in.failures) + " n=" + fmt(in.n);
}

}  // namespace

std::vector<std::vector<std::size_t>> MgIncidence::source_mgs() const {
  std::vector<std::vector<std::size_t>> out(source_count);
  for (std::size_t g = 0; g < mg_sources.size(); ++g) {
    for (std::size_t s : mg_sources[g]) {
      if (s >= source_count) throw ShapeMismatchError("MG refers to an unknown source");
      out[s].push_back(g);
    }
  }
  return out;
}

double compute_vp(const MgIncidence& incidence, std::size_t source) {
  std::size_t total = 0;
  std::size_t bad = 0;
  for (std::size_t g = 0; g < incidence.mg_count(); ++g) {
    const auto& members = incidence.mg_sources[g];
    if (std::find(members.begin(), members.end(), source) == members.end()) continue;
    ++total;
    if (incidence.violated.at(g)) ++bad;
  }
  if (total == 0) {
    throw EmptyMgSetError("source " + std::to_string(source) + " is in no MG");
  }
  return static_cast<double>(bad) / static_cast<double>(total);
}

double compute_vp(const Point& st, std::span<const MetamorphicGroup> mgs,
                  std::span<const MetamorphicRelation> mrs, const Program& program) {
  std::size_t total = 0;
  std::size_t bad = 0;
  for (const auto& mg : mgs) {
    if (std::find(mg.sources.begin(), mg.sources.end(), st) == mg.sources.end()) continue;
    auto mr = std::find_if(mrs.begin(), mrs.end(),
                           [&](const MetamorphicRelation& r) { return r.id == mg.mr_id; });
    if (mr == mrs.end()) throw UnknownIdError("no MR with id '" + mg.mr_id + "'");
    ++total;
    if (check_mr(program, *mr, mg)) ++bad;
  }
  if (total == 0) throw EmptyMgSetError("source takes part in no MG");
  return static_cast<double>(bad) / static_cast<double>(total);
}

double compute_vr(std::span<const double> vp_values) {
  if (vp_values.empty()) throw EmptySetError("vr of an empty set");
  return sum(vp_values) / static_cast<double>(vp_values.size());
}

FailureProfile build_profile(const MgIncidence& incidence,
                             std::span<const std::size_t> source_labels, std::size_t k_st,
                             std::span<const std::size_t> mg_labels, std::size_t k_mg) {
  if (source_labels.size() != incidence.source_count ||
      mg_labels.size() != incidence.mg_count() ||
      incidence.violated.size() != incidence.mg_count()) {
    throw ShapeMismatchError("one label per source and per MG required");
  }
  FailureProfile p;
  const auto by_source = incidence.source_mgs();
  for (std::size_t s = 0; s < incidence.source_count; ++s) {
    if (by_source[s].empty()) {
      throw EmptyMgSetError("source " + std::to_string(s) + " is in no MG");
    }
    std::size_t bad = 0;
    for (std::size_t g : by_source[s]) bad += incidence.violated[g] ? 1 : 0;
    p.vp_by_source.push_back(static_cast<double>(bad) /
                             static_cast<double>(by_source[s].size()));
  }
  std::vector<std::vector<double>> members(k_st);
  for (std::size_t s = 0; s < source_labels.size(); ++s) {
    if (source_labels[s] >= k_st) throw ShapeMismatchError("source label out of range");
    members[source_labels[s]].push_back(p.vp_by_source[s]);
  }
  for (const auto& m : members) p.vr_by_subdomain.push_back(compute_vr(m));
  p.vr_global = compute_vr(p.vp_by_source);
  p.mg_failures_by_subdomain.assign(k_mg, 0);
  p.mg_sizes_by_subdomain.assign(k_mg, 0);
  for (std::size_t g = 0; g < mg_labels.size(); ++g) {
    if (mg_labels[g] >= k_mg) throw ShapeMismatchError("MG label out of range");
    ++p.mg_sizes_by_subdomain[mg_labels[g]];
    if (incidence.violated[g]) {
      ++p.mg_failures_by_subdomain[mg_labels[g]];
      ++p.mg_failures_total;
    }
  }
  p.mg_total = mg_labels.size();
  return p;
}

double p_analytic(Level level, Strategy strategy, const FailureProfile& profile,
                  std::span<const double> allocation) {
  if (strategy != Strategy::kPsalm && strategy != Strategy::kRs) {
    throw UnknownStrategyError("analytic P is defined for psalm and rs only");
  }
  if (level == Level::kSt) {
    if (strategy == Strategy::kRs) {
      return clamp01(1 - std::pow(1 - profile.vr_global, sum(allocation)));
    }
    if (allocation.size() != profile.vr_by_subdomain.size()) {
      throw ShapeMismatchError("allocation length differs from the subdomain count");
    }
    return p_detect(profile.vr_by_subdomain, allocation);
  }
  if (strategy == Strategy::kRs) {
    const double theta = static_cast<double>(profile.mg_failures_total) /
                         static_cast<double>(profile.mg_total);
    return clamp01(1 - std::pow(1 - theta, sum(allocation)));
  }
  const std::size_t k = profile.mg_sizes_by_subdomain.size();
  if (allocation.size() != k) {
    throw ShapeMismatchError("allocation length differs from the subdomain count");
  }
  std::vector<double> theta;
  for (std::size_t i = 0; i < k; ++i) {
    theta.push_back(static_cast<double>(profile.mg_failures_by_subdomain[i]) /
                    static_cast<double>(profile.mg_sizes_by_subdomain[i]));
  }
  return p_detect(theta, allocation);
}

double enumerate_detection_probability(std::span<const EnumerationPool> pools,
                                       std::span<const std::size_t> counts) {
  if (pools.size() != counts.size()) throw ShapeMismatchError("one count per pool");
  // Flatten the draws: draw j comes from pool draw_pool[j].
  std::vector<const EnumerationPool*> draw_pool;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (counts[i] > 0 && pools[i].empty()) throw EmptySetError("draw from an empty pool");
    for (std::size_t c = 0; c < counts[i]; ++c) draw_pool.push_back(&pools[i]);
  }
  double detected = 0;
  auto walk = [&](auto&& self, std::size_t j, double weight, bool hit) -> void {
    if (j == draw_pool.size()) {
      if (hit) detected += weight;
      return;
    }
    const EnumerationPool& pool = *draw_pool[j];
    for (const auto& outcomes : pool) {
      if (outcomes.empty()) throw EmptyMgSetError("unit with no outcome");
      const double w = weight / static_cast<double>(pool.size()) /
                       static_cast<double>(outcomes.size());
      for (bool o : outcomes) self(self, j + 1, w, hit || o);
    }
  };
  walk(walk, 0, 1.0, false);
  return detected;
}

EquivalenceResult check_partition_equivalence(std::span<const std::size_t> source_labels,
                                              std::size_t k_st,
                                              std::span<const std::size_t> mg_labels,
                                              std::size_t k_mg,
                                              const MgIncidence& incidence) {
  if (source_labels.size() != incidence.source_count ||
      mg_labels.size() != incidence.mg_count()) {
    throw ShapeMismatchError("one label per source and per MG required");
  }
  // First MG subdomain reached from each source subdomain, and first source
  // subdomain reached from each MG subdomain.
  std::vector<std::optional<std::size_t>> st_target(k_st);
  std::vector<std::optional<std::size_t>> mg_target(k_mg);
  EquivalenceResult result;
  for (std::size_t g = 0; g < incidence.mg_count() && result.equivalent; ++g) {
    for (std::size_t s : incidence.mg_sources[g]) {
      auto& to_mg = st_target[source_labels[s]];
      if (!to_mg) to_mg = mg_labels[g];
      if (*to_mg != mg_labels[g]) {
        result.equivalent = false;
        result.witness = EquivalenceWitness{Level::kSt, source_labels[s], g};
        break;
      }
      auto& to_st = mg_target[mg_labels[g]];
      if (!to_st) to_st = source_labels[s];
      if (*to_st != source_labels[s]) {
        result.equivalent = false;
        result.witness = EquivalenceWitness{Level::kMg, mg_labels[g], s};
        break;
      }
    }
  }
  return result;
}

EquivalenceResult check_partition_equivalence(
    const PartitionScheme& source_scheme, const PartitionScheme& mg_scheme,
    std::span<const std::vector<std::size_t>> mg_membership) {
  const std::size_t sources = source_scheme.domain().elements().size();
  const std::size_t mgs = mg_scheme.domain().elements().size();
  if (mg_membership.size() != mgs) throw ShapeMismatchError("membership per MG required");
  MgIncidence inc;
  inc.source_count = sources;
  inc.mg_sources.assign(mg_membership.begin(), mg_membership.end());
  inc.violated.assign(mgs, false);
  std::vector<std::size_t> st_labels(sources);
  std::vector<std::size_t> mg_labels(mgs);
  for (std::size_t s = 0; s < sources; ++s) st_labels[s] = source_scheme.subdomain_of(s);
  for (std::size_t g = 0; g < mgs; ++g) mg_labels[g] = mg_scheme.subdomain_of(g);
  return check_partition_equivalence(st_labels, source_scheme.k(), mg_labels, mg_scheme.k(),
                                     inc);
}

PropositionOutcome check_proportional(const ProportionalInstance& in) {
  if (in.sizes.empty() || in.sizes.size() != in.failures.size()) {
    throw InstanceError("one failure value per subdomain required");
  }
  const double d = sum(in.sizes);
  std::vector<double> theta;
  double weighted = 0;
  for (std::size_t i = 0; i < in.sizes.size(); ++i) {
    const double t = in.level == Level::kSt ? in.failures[i] : in.failures[i] / in.sizes[i];
    theta.push_back(t);
    weighted += in.sizes[i] * t;
  }
  PropositionOutcome out;
  out.p_psalm = p_detect(theta, ideal_counts(in.sizes, in.n));
  out.p_other = clamp01(1 - std::pow(1 - weighted / d, in.n));
  out.pass = out.p_psalm >= out.p_other - kExactTol;
  if (!out.pass) {
    out.detail = describe(in) + " p_psalm=" + fmt(out.p_psalm) + " p_rs=" + fmt(out.p_other);
  }
  return out;
}

PropositionOutcome check_equivalent(const EquivalentInstance& in) {
  const MgIncidence& inc = in.incidence;
  const auto eq = check_partition_equivalence(in.source_labels, in.k_st, in.mg_labels,
                                              in.k_mg, inc);
  if (!eq.equivalent) {
    throw InstanceError("schemes are not equivalent (" +
                        std::string(level_id(eq.witness->side)) + " subdomain " +
                        std::to_string(eq.witness->subdomain + 1) + ", element " +
                        std::to_string(eq.witness->element) + ")");
  }
  for (const auto& members : inc.source_mgs()) {
    if (members.size() != in.L) throw InstanceError("sources are not in a fixed number of MGs");
  }
  for (const auto& srcs : inc.mg_sources) {
    if (srcs.size() != in.r) throw InstanceError("MGs do not have a fixed source count");
  }
  const FailureProfile prof =
      build_profile(inc, in.source_labels, in.k_st, in.mg_labels, in.k_mg);

  std::vector<double> st_sizes(in.k_st, 0);
  for (std::size_t l : in.source_labels) ++st_sizes[l];
  std::vector<double> mg_sizes(prof.mg_sizes_by_subdomain.begin(),
                               prof.mg_sizes_by_subdomain.end());

  PropositionOutcome out;
  out.p_psalm = p_analytic(Level::kSt, Strategy::kPsalm, prof, ideal_counts(st_sizes, in.n));
  out.p_other = p_analytic(Level::kMg, Strategy::kPsalm, prof, ideal_counts(mg_sizes, in.n));
  out.pass = std::abs(out.p_psalm - out.p_other) <= kExactTol;

  // Size identity: r |D_j^MG| = L |D_i^st| for the source subdomain i behind MG subdomain j.
  for (std::size_t g = 0; g < inc.mg_count(); ++g) {
    const std::size_t j = in.mg_labels[g];
    const std::size_t i = in.source_labels[inc.mg_sources[g].front()];
    if (in.r * prof.mg_sizes_by_subdomain[j] !=
        in.L * static_cast<std::size_t>(st_sizes[i])) {
      out.pass = false;
      out.detail = "size identity fails for MG subdomain " + std::to_string(j + 1);
      return out;
    }
  }
  if (!out.pass) {
    out.detail = "k=" + std::to_string(in.k_st) + " r=" + std::to_string(in.r) +
                 " L=" + std::to_string(in.L) + " n=" + fmt(in.n) +
                 " p_st=" + fmt(out.p_psalm) + " p_mg=" + fmt(out.p_other);
  }
  return out;
}

ProportionalInstance random_proportional_instance(Level level, Rng& rng) {
  ProportionalInstance in;
  in.level = level;
  const std::size_t k = 1 + rng.uniform_index(8);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t d = 1 + rng.uniform_index(100);
    in.sizes.push_back(static_cast<double>(d));
    if (level == Level::kSt) {
      double total = 0;
      for (std::size_t e = 0; e < d; ++e) {
        total += static_cast<double>(rng.uniform_index(17)) / 16.0;
      }
      in.failures.push_back(total / static_cast<double>(d));
    } else {
      in.failures.push_back(static_cast<double>(rng.uniform_index(d + 1)));
    }
  }
  in.n = static_cast<double>(1 + rng.uniform_index(30 * k));
  return in;
}

EquivalentInstance random_equivalent_instance(Rng& rng) {
  EquivalentInstance in;
  in.k_st = in.k_mg = 1 + rng.uniform_index(8);
  in.r = 1 + rng.uniform_index(3);
  in.L = 1 + rng.uniform_index(4);
  const double violation_rate = static_cast<double>(rng.uniform_index(17)) / 16.0;
  for (std::size_t i = 0; i < in.k_st; ++i) {
    const std::size_t d = in.r * (1 + rng.uniform_index(100 / in.r));
    std::vector<std::size_t> members;
    for (std::size_t e = 0; e < d; ++e) {
      members.push_back(in.incidence.source_count++);
      in.source_labels.push_back(i);
    }
    for (std::size_t round = 0; round < in.L; ++round) {
      rng.shuffle(std::span<std::size_t>(members));
      for (std::size_t at = 0; at < d; at += in.r) {
        in.incidence.mg_sources.emplace_back(members.begin() + static_cast<std::ptrdiff_t>(at),
                                             members.begin() +
                                                 static_cast<std::ptrdiff_t>(at + in.r));
        in.incidence.violated.push_back(rng.uniform01() < violation_rate);
        in.mg_labels.push_back(i);
      }
    }
  }
  in.n = static_cast<double>(in.k_st + rng.uniform_index(3 * in.k_st));
  return in;
}

ProportionalInstance shrink_instance(
    ProportionalInstance instance,
    const std::function<bool(const ProportionalInstance&)>& fails) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; instance.sizes.size() > 1 && i < instance.sizes.size(); ++i) {
      ProportionalInstance trial = instance;
      trial.sizes.erase(trial.sizes.begin() + static_cast<std::ptrdiff_t>(i));
      trial.failures.erase(trial.failures.begin() + static_cast<std::ptrdiff_t>(i));
      if (fails(trial)) {
        instance = std::move(trial);
        changed = true;
        --i;
      }
    }
    for (std::size_t i = 0; i < instance.sizes.size(); ++i) {
      while (instance.sizes[i] > 1) {
        ProportionalInstance trial = instance;
        trial.sizes[i] = std::ceil(trial.sizes[i] / 2);
        if (trial.level == Level::kMg) {
          trial.failures[i] = std::min(trial.failures[i], trial.sizes[i]);
        }
        if (!fails(trial)) break;
        instance = std::move(trial);
        changed = true;
      }
    }
    while (instance.n > 1) {
      ProportionalInstance trial = instance;
      trial.n = std::ceil(trial.n / 2);
      if (!fails(trial)) break;
      instance = std::move(trial);
      changed = true;
    }
  }
  return instance;
}

VerificationReport verify_proposition(int which, std::size_t instances, std::uint64_t seed,
                                      std::size_t jobs) {
  if (which < 1 || which > 3) {
    throw InstanceError("randomized verification covers propositions 1-3");
  }
  struct Slot {
    PropositionOutcome outcome;
    bool integer_below = false;
    double integer_gap = 0;
  };
  std::vector<Slot> slots(instances);
  const std::string tag = "prop" + std::to_string(which);
  auto run = [&](std::size_t shard) {
    for (std::size_t idx = shard; idx < instances; idx += jobs) {
      Rng rng(derive_seed(seed, {"verify", tag}, idx));
      Slot& slot = slots[idx];
      if (which == 3) {
        slot.outcome = check_equivalent(random_equivalent_instance(rng));
        continue;
      }
      const Level level = which == 1 ? Level::kSt : Level::kMg;
      ProportionalInstance in = random_proportional_instance(level, rng);
      slot.outcome = check_proportional(in);
      if (!slot.outcome.pass) {
        auto shrunk = shrink_instance(in, [](const ProportionalInstance& c) {
          return !check_proportional(c).pass;
        });
        slot.outcome.detail = check_proportional(shrunk).detail;
      }
      // The same instance with integer BMA-MT counts.
      const std::size_t k = in.sizes.size();
      const std::size_t n = std::max<std::size_t>(k, static_cast<std::size_t>(in.n));
      const Allocation alloc = bma_mt(in.sizes, n, rng);
      std::vector<double> counts(alloc.counts.begin(), alloc.counts.end());
      std::vector<double> theta;
      double weighted = 0;
      for (std::size_t i = 0; i < k; ++i) {
        theta.push_back(level == Level::kSt ? in.failures[i] : in.failures[i] / in.sizes[i]);
        weighted += in.sizes[i] * theta.back();
      }
      const double p_int = p_detect(theta, counts);
      const double p_rs =
          clamp01(1 - std::pow(1 - weighted / sum(in.sizes), static_cast<double>(n)));
      slot.integer_gap = p_rs - p_int;
      slot.integer_below = slot.integer_gap > kExactTol;
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, std::max<std::size_t>(instances, 1)));
  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t j = 0; j < jobs; ++j) workers.emplace_back(run, j);
  }
  VerificationReport report;
  for (const Slot& s : slots) {
    if (s.outcome.pass) {
      ++report.pass;
    } else {
      ++report.fail;
      report.witnesses.push_back(s.outcome.detail);
    }
    if (s.integer_below) ++report.integer_allocation_below;
    report.max_integer_gap = std::max(report.max_integer_gap, s.integer_gap);
  }
  return report;
}

EquivalentInstance case_instance(CaseTable table, int index) {
  if (index < 1 || index > 3) throw InstanceError("cases are numbered 1 to 3");
  EquivalentInstance in;
  in.k_st = in.k_mg = 2;
  in.r = 1;
  in.n = 2;
  MgIncidence& inc = in.incidence;
  inc.source_count = 3;
  // MG ids are listed per source: st1's groups first, then st2's, then st3's.
  auto add = [&](std::size_t source, std::size_t mg_label, bool violated) {
    inc.mg_sources.push_back({source});
    in.mg_labels.push_back(mg_label);
    inc.violated.push_back(violated);
  };
  if (table == CaseTable::kProp4) {
    // st1: MG11; st2: MG21, MG22; st3: MG31..MG33.
    in.L = 0;
    in.source_labels = {1, 0, 1};
    const bool v1 = index == 3;
    const bool v2 = index == 2;
    const bool v3 = index == 1;
    add(0, 1, v1);
    add(1, 0, v2);
    add(1, 0, v2);
    add(2, 1, v3);
    add(2, 1, v3);
    add(2, 1, v3);
    return in;
  }
  // st1: MG11 (violated), MG12; st2: MG21 (violated), MG22; st3: MG31, MG32.
  in.L = 2;
  static constexpr std::size_t kSourceLabels[3][3] = {{0, 0, 1}, {1, 0, 1}, {0, 1, 1}};
  static constexpr std::size_t kMgLabels[3][6] = {
      {0, 1, 0, 1, 1, 1}, {0, 0, 1, 1, 1, 1}, {1, 0, 1, 1, 1, 1}};
  const auto c = static_cast<std::size_t>(index - 1);
  in.source_labels.assign(std::begin(kSourceLabels[c]), std::end(kSourceLabels[c]));
  const bool violated[6] = {true, false, true, false, false, false};
  for (std::size_t g = 0; g < 6; ++g) add(g / 2, kMgLabels[c][g], violated[g]);
  return in;
}

std::vector<CaseRow> reproduce_cases(CaseTable table) {
  std::vector<CaseRow> rows;
  const double one_each[2] = {1, 1};
  for (int index = 1; index <= 3; ++index) {
    const EquivalentInstance in = case_instance(table, index);
    const FailureProfile prof =
        build_profile(in.incidence, in.source_labels, in.k_st, in.mg_labels, in.k_mg);
    CaseRow row;
    row.index = index;
    row.p_st = p_analytic(Level::kSt, Strategy::kPsalm, prof, one_each);
    row.p_mg = p_analytic(Level::kMg, Strategy::kPsalm, prof, one_each);
    if (std::abs(row.p_st - row.p_mg) <= kExactTol) {
      row.relation = '=';
    } else {
      row.relation = row.p_st < row.p_mg ? '<' : '>';
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CaseRow> table_cells(CaseTable table) {
  if (table == CaseTable::kProp4) {
    return {{1, 0.50, 0.75, '<'}, {2, 1.00, 1.00, '='}, {3, 0.50, 0.25, '>'}};
  }
  return {{1, 0.50, 1.00, '<'}, {2, 0.63, 0.63, '='}, {3, 0.63, 0.40, '>'}};
}

bool matches_cell(const CaseRow& computed, const CaseRow& cell) {
  return computed.index == cell.index && computed.relation == cell.relation &&
         std::abs(computed.p_st - cell.p_st) <= kCellTolerance &&
         std::abs(computed.p_mg - cell.p_mg) <= kCellTolerance;
}

}  // namespace psalm
