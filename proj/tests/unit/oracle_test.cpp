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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "../support/tiny_instances.hpp"
#include "psalm/error.hpp"
#include "psalm/oracle.hpp"
#include "psalm/subjects.hpp"

namespace psalm {
namespace {

using testing::Draw;
using testing::Tiny;
using testing::brute_force_detect;
using testing::groups_of;
using testing::mg_draw;
using testing::random_tiny;
using testing::source_draw;

TEST(ComputeVpTest, IncidenceExamples) {
  MgIncidence inc;
  inc.source_count = 3;
  inc.mg_sources = {{0}, {0}, {1}, {2}, {2}, {2}};
  inc.violated = {true, false, false, true, true, true};
  EXPECT_DOUBLE_EQ(compute_vp(inc, 0), 0.5);
  EXPECT_DOUBLE_EQ(compute_vp(inc, 1), 0.0);
  EXPECT_DOUBLE_EQ(compute_vp(inc, 2), 1.0);
  inc.source_count = 4;
  EXPECT_THROW(compute_vp(inc, 3), EmptyMgSetError);
}

TEST(ComputeVpTest, ProgramForm) {
  const auto& sine = register_subjects().get("sin");
  const std::vector<MetamorphicGroup> mgs = {
      {"MR_c", {{3}}, {{-3}}, 0},
      {"MR_a", {{3}}, {{-357}}, 0},
      {"MR_c", {{20}}, {{-20}}, 0},
  };
  // x in radians near zero is odd, so only the periodic follow-up exposes it.
  const auto& small = sine.mutant("small-angle").mutated_fn;
  EXPECT_DOUBLE_EQ(compute_vp({3}, mgs, sine.mrs, small), 0.5);
  EXPECT_DOUBLE_EQ(compute_vp({3}, mgs, sine.mrs, sine.reference_fn), 0.0);
  EXPECT_THROW(compute_vp({30}, mgs, sine.mrs, small), EmptyMgSetError);
  const std::vector<MetamorphicGroup> bad = {{"MR_z", {{30}}, {{-30}}, 0}};
  EXPECT_THROW(compute_vp({30}, bad, sine.mrs, small), UnknownIdError);
}

TEST(ComputeVrTest, Examples) {
  EXPECT_DOUBLE_EQ(compute_vr(std::vector<double>{0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(compute_vr(std::vector<double>{0, 0, 0}), 0.0);
  EXPECT_NEAR(compute_vr(std::vector<double>{0.5, 0.5, 0}), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(compute_vr(std::vector<double>{}), EmptySetError);
}

TEST(PAnalyticTest, SingleSubdomainFormulasCoincide) {
  FailureProfile prof;
  prof.vr_by_subdomain = {0.5};
  prof.vr_global = 0.5;
  prof.mg_failures_by_subdomain = {1};
  prof.mg_failures_total = 1;
  prof.mg_sizes_by_subdomain = {2};
  prof.mg_total = 2;
  const std::vector<double> two = {2};
  for (Level level : {Level::kSt, Level::kMg}) {
    EXPECT_DOUBLE_EQ(p_analytic(level, Strategy::kPsalm, prof, two), 0.75);
    EXPECT_DOUBLE_EQ(p_analytic(level, Strategy::kRs, prof, two), 0.75);
  }
  const std::vector<double> wrong = {1, 1};
  EXPECT_THROW(p_analytic(Level::kSt, Strategy::kPsalm, prof, wrong), ShapeMismatchError);
  EXPECT_THROW(p_analytic(Level::kSt, Strategy::kArt, prof, two), UnknownStrategyError);
}

TEST(BuildProfileTest, ShapeMismatch) {
  MgIncidence inc;
  inc.source_count = 2;
  inc.mg_sources = {{0}, {1}};
  inc.violated = {true, false};
  const std::vector<std::size_t> src = {0};
  const std::vector<std::size_t> mg = {0, 0};
  EXPECT_THROW(build_profile(inc, src, 1, mg, 1), ShapeMismatchError);
}

// Closed forms against full enumeration of with-replacement selections on
// every small instance drawn (d <= 6, n <= 4).
TEST(PAnalyticProperty, MatchesEnumeration) {
  Rng rng(404);
  for (int round = 0; round < 400; ++round) {
    const Tiny t = random_tiny(rng);
    const auto prof = build_profile(t.inc, t.source_labels, t.k_st, t.mg_labels, t.k_mg);
    const auto st_groups = groups_of(t.source_labels, t.k_st);
    const auto mg_groups = groups_of(t.mg_labels, t.k_mg);
    std::vector<std::size_t> all_sources(t.inc.source_count);
    std::iota(all_sources.begin(), all_sources.end(), 0);
    std::vector<std::size_t> all_mgs(t.inc.mg_count());
    std::iota(all_mgs.begin(), all_mgs.end(), 0);

    for (Level level : {Level::kSt, Level::kMg}) {
      const auto& groups = level == Level::kSt ? st_groups : mg_groups;
      const std::size_t k = groups.size();
      if (k > 4) continue;
      std::vector<double> counts(k, 1);
      for (std::size_t extra = rng.uniform_index(5 - k); extra > 0; --extra) {
        counts[rng.uniform_index(k)] += 1;
      }
      std::vector<Draw> draws;
      std::vector<EnumerationPool> pools;
      std::vector<std::size_t> pool_counts;
      for (std::size_t i = 0; i < k; ++i) {
        const Draw d = level == Level::kSt ? source_draw(t, groups[i]) : mg_draw(t, groups[i]);
        for (int c = 0; c < counts[i]; ++c) draws.push_back(d);
      }
      const double p_psalm = p_analytic(level, Strategy::kPsalm, prof, counts);
      EXPECT_NEAR(p_psalm, brute_force_detect(draws), 1e-12);

      const std::size_t n = 1 + rng.uniform_index(4);
      const Draw whole = level == Level::kSt ? source_draw(t, all_sources) : mg_draw(t, all_mgs);
      const std::vector<Draw> rs_draws(n, whole);
      const std::vector<double> rs_n = {double(n)};
      EXPECT_NEAR(p_analytic(level, Strategy::kRs, prof, rs_n), brute_force_detect(rs_draws), 1e-12);

      // The library's own enumerator agrees as well.
      if (level == Level::kMg) {
        for (std::size_t i = 0; i < k; ++i) {
          EnumerationPool pool;
          for (std::size_t g : groups[i]) pool.push_back({bool(t.inc.violated[g])});
          pools.push_back(pool);
          pool_counts.push_back(static_cast<std::size_t>(counts[i]));
        }
        EXPECT_NEAR(enumerate_detection_probability(pools, pool_counts), p_psalm, 1e-12);
      }
    }
  }
}

TEST(PAnalyticProperty, RangeMonotonicityAndWeightedMean) {
  Rng rng(77);
  for (int round = 0; round < 500; ++round) {
    const Tiny t = random_tiny(rng);
    const auto prof = build_profile(t.inc, t.source_labels, t.k_st, t.mg_labels, t.k_mg);
    std::vector<double> sizes(t.k_st, 0);
    for (auto l : t.source_labels) ++sizes[l];
    double weighted = 0;
    for (std::size_t i = 0; i < t.k_st; ++i) weighted += sizes[i] * prof.vr_by_subdomain[i];
    EXPECT_NEAR(prof.vr_global, weighted / double(t.inc.source_count), 1e-12);
    std::size_t m = 0;
    for (std::size_t i = 0; i < t.k_mg; ++i) {
      EXPECT_LE(prof.mg_failures_by_subdomain[i], prof.mg_sizes_by_subdomain[i]);
      m += prof.mg_failures_by_subdomain[i];
    }
    EXPECT_EQ(m, prof.mg_failures_total);

    std::vector<double> counts(t.k_st, 1);
    double prev = p_analytic(Level::kSt, Strategy::kPsalm, prof, counts);
    for (int step = 0; step < 6; ++step) {
      counts[rng.uniform_index(t.k_st)] += 0.5;
      const double p = p_analytic(Level::kSt, Strategy::kPsalm, prof, counts);
      EXPECT_GE(p, prev);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      prev = p;
    }
  }
}

TEST(EquivalenceTest, ConstructedSchemesAreEquivalent) {
  // Each MG subdomain holds exactly the MGs of one source subdomain.
  MgIncidence inc;
  inc.source_count = 4;
  inc.mg_sources = {{0}, {0, 1}, {1}, {2}, {3, 2}};
  inc.violated = {false, true, false, false, true};
  const std::vector<std::size_t> src = {0, 0, 1, 1};
  const std::vector<std::size_t> mg = {1, 1, 1, 0, 0};
  EXPECT_TRUE(check_partition_equivalence(src, 2, mg, 2, inc).equivalent);
  const std::vector<std::size_t> one_src = {0, 0, 0, 0};
  const std::vector<std::size_t> one_mg = {0, 0, 0, 0, 0};
  EXPECT_TRUE(check_partition_equivalence(one_src, 1, one_mg, 1, inc).equivalent);
}

TEST(EquivalenceTest, SchemeForm) {
  std::vector<DomainElement> sources;
  for (std::uint64_t i = 0; i < 4; ++i) sources.push_back({ElementId{i}, {double(i)}, {}, ""});
  std::vector<DomainElement> groups;
  for (std::uint64_t g = 0; g < 4; ++g) groups.push_back({ElementId{g}, {double(g)}, g, "m"});
  const auto src_domain = SelectionDomain::discrete(DomainKind::kSource, sources);
  const auto mg_domain = SelectionDomain::discrete(DomainKind::kMg, groups);
  const std::vector<std::size_t> src_labels = {0, 0, 1, 1};
  const std::vector<std::size_t> ok_labels = {0, 0, 1, 1};
  const std::vector<std::size_t> bad_labels = {0, 1, 1, 1};
  const std::vector<std::vector<std::size_t>> membership = {{0}, {1}, {2}, {3}};
  const auto src_scheme = partition_by_labels(src_domain, src_labels);
  EXPECT_TRUE(check_partition_equivalence(src_scheme, partition_by_labels(mg_domain, ok_labels),
                                          membership)
                  .equivalent);
  const auto res = check_partition_equivalence(
      src_scheme, partition_by_labels(mg_domain, bad_labels), membership);
  EXPECT_FALSE(res.equivalent);
  ASSERT_TRUE(res.witness.has_value());
}

// The first non-equal-effectiveness case groups violated MGs of different
// source subdomains together; the witness must point at a real break.
TEST(EquivalenceTest, NonEquivalentCaseHasValidWitness) {
  const auto in = case_instance(CaseTable::kProp5, 1);
  const auto res = check_partition_equivalence(in.source_labels, in.k_st, in.mg_labels, in.k_mg,
                                               in.incidence);
  ASSERT_FALSE(res.equivalent);
  ASSERT_TRUE(res.witness.has_value());
  const auto& w = *res.witness;
  if (w.side == Level::kSt) {
    // MG w.element belongs to a source of subdomain w.subdomain, but other
    // MGs of that subdomain sit in a different MG subdomain.
    std::set<std::size_t> mg_parts;
    for (std::size_t g = 0; g < in.incidence.mg_count(); ++g) {
      for (std::size_t s : in.incidence.mg_sources[g]) {
        if (in.source_labels[s] == w.subdomain) mg_parts.insert(in.mg_labels[g]);
      }
    }
    EXPECT_GT(mg_parts.size(), 1u);
  } else {
    std::set<std::size_t> src_parts;
    for (std::size_t g = 0; g < in.incidence.mg_count(); ++g) {
      if (in.mg_labels[g] != w.subdomain) continue;
      for (std::size_t s : in.incidence.mg_sources[g]) src_parts.insert(in.source_labels[s]);
    }
    EXPECT_GT(src_parts.size(), 1u);
  }
  EXPECT_THROW(check_equivalent(in), InstanceError);
}

// Cells read from the two three-case tables.
TEST(ReproduceCasesTest, MatchesPublishedCells) {
  struct Cell {
    double st, mg;
    char rel;
  };
  const Cell prop4[3] = {{0.50, 0.75, '<'}, {1.00, 1.00, '='}, {0.50, 0.25, '>'}};
  const Cell prop5[3] = {{0.50, 1.00, '<'}, {0.63, 0.63, '='}, {0.63, 0.40, '>'}};
  const auto rows4 = reproduce_cases(CaseTable::kProp4);
  const auto rows5 = reproduce_cases(CaseTable::kProp5);
  ASSERT_EQ(rows4.size(), 3u);
  ASSERT_EQ(rows5.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(rows4[i].p_st, prop4[i].st, 0.005);
    EXPECT_NEAR(rows4[i].p_mg, prop4[i].mg, 0.005);
    EXPECT_EQ(rows4[i].relation, prop4[i].rel);
    EXPECT_NEAR(rows5[i].p_st, prop5[i].st, 0.005 + 1e-12);
    EXPECT_NEAR(rows5[i].p_mg, prop5[i].mg, 0.005 + 1e-12);
    EXPECT_EQ(rows5[i].relation, prop5[i].rel);
    EXPECT_TRUE(matches_cell(rows4[i], table_cells(CaseTable::kProp4)[i]));
    EXPECT_TRUE(matches_cell(rows5[i], table_cells(CaseTable::kProp5)[i]));
  }
  // Exact values behind the rounded cells.
  EXPECT_DOUBLE_EQ(rows5[1].p_st, 0.625);
  EXPECT_DOUBLE_EQ(rows5[1].p_mg, 0.625);
  EXPECT_DOUBLE_EQ(rows5[2].p_mg, 0.4);
}

TEST(PropositionTest, SingleSubdomainIsEquality) {
  for (Level level : {Level::kSt, Level::kMg}) {
    ProportionalInstance in{level, {40}, {level == Level::kSt ? 0.25 : 10.0}, 7};
    const auto out = check_proportional(in);
    EXPECT_TRUE(out.pass);
    EXPECT_NEAR(out.p_psalm, out.p_other, 1e-15);
  }
}

// Direct evaluation of both sides with n_i = n d_i / d.
TEST(PropositionProperty, ProportionalNeverLosesToRandom) {
  Rng rng(1);
  for (int round = 0; round < 2000; ++round) {
    const Level level = round % 2 ? Level::kMg : Level::kSt;
    const auto in = random_proportional_instance(level, rng);
    ASSERT_GE(in.sizes.size(), 1u);
    ASSERT_LE(in.sizes.size(), 8u);
    const double d = std::accumulate(in.sizes.begin(), in.sizes.end(), 0.0);
    double log_miss = 0;
    double weighted = 0;
    for (std::size_t i = 0; i < in.sizes.size(); ++i) {
      ASSERT_GE(in.sizes[i], 1);
      ASSERT_LE(in.sizes[i], 100);
      const double theta = level == Level::kSt ? in.failures[i] : in.failures[i] / in.sizes[i];
      log_miss += in.n * in.sizes[i] / d * std::log1p(-std::min(theta, 1 - 1e-300));
      weighted += in.sizes[i] * theta;
    }
    const double p_p = 1 - std::exp(log_miss);
    const double p_r = 1 - std::pow(1 - weighted / d, in.n);
    EXPECT_GE(p_p, p_r - 1e-12);
    const auto out = check_proportional(in);
    EXPECT_TRUE(out.pass) << out.detail;
    EXPECT_NEAR(out.p_psalm, p_p, 1e-9);
    EXPECT_NEAR(out.p_other, p_r, 1e-9);
  }
}

TEST(PropositionTest, SizeIdentityWithPairsAndFourGroupsPerSource) {
  // Two source subdomains of four; each MG pairs neighbours on a 4-cycle and
  // every edge appears twice, so each source sits in four MGs.
  EquivalentInstance in;
  in.r = 2;
  in.L = 4;
  in.n = 6;
  in.k_st = in.k_mg = 2;
  in.incidence.source_count = 8;
  in.source_labels = {0, 0, 0, 0, 1, 1, 1, 1};
  Rng rng(3);
  for (std::size_t part = 0; part < 2; ++part) {
    for (int rep = 0; rep < 2; ++rep) {
      for (std::size_t j = 0; j < 4; ++j) {
        in.incidence.mg_sources.push_back({4 * part + j, 4 * part + (j + 1) % 4});
        in.incidence.violated.push_back(rng.uniform01() < 0.3);
        in.mg_labels.push_back(part);
      }
    }
  }
  const auto prof = build_profile(in.incidence, in.source_labels, 2, in.mg_labels, 2);
  const std::size_t N = in.L / in.r;
  EXPECT_EQ(N, 2u);
  EXPECT_EQ(prof.mg_sizes_by_subdomain[0], N * 4);
  EXPECT_EQ(prof.mg_sizes_by_subdomain[1], N * 4);
  const auto out = check_equivalent(in);
  EXPECT_TRUE(out.pass) << out.detail;
  EXPECT_NEAR(out.p_psalm, out.p_other, 1e-12);

  in.L = 3;
  EXPECT_THROW(check_equivalent(in), InstanceError);
}

TEST(PropositionTest, RandomEquivalentInstancesHold) {
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    const auto in = random_equivalent_instance(rng);
    EXPECT_TRUE(check_partition_equivalence(in.source_labels, in.k_st, in.mg_labels, in.k_mg,
                                            in.incidence)
                    .equivalent);
    const auto out = check_equivalent(in);
    EXPECT_TRUE(out.pass) << out.detail;
  }
}

TEST(VerifyTest, ReportsAndShardIndependence) {
  const auto one = verify_proposition(1, 500, 7, 1);
  const auto four = verify_proposition(1, 500, 7, 4);
  EXPECT_EQ(one.pass, 500u);
  EXPECT_EQ(one.fail, 0u);
  EXPECT_EQ(one.integer_allocation_below, four.integer_allocation_below);
  EXPECT_EQ(one.max_integer_gap, four.max_integer_gap);
  EXPECT_EQ(verify_proposition(2, 300, 9).fail, 0u);
  EXPECT_EQ(verify_proposition(3, 100, 9).fail, 0u);
  EXPECT_THROW(verify_proposition(4, 10, 1), InstanceError);
}

TEST(ShrinkTest, ReducesToMinimalFailure) {
  // Synthetic failure predicate: fails while some subdomain is larger than 3.
  ProportionalInstance in{Level::kSt, {50, 2, 80, 9}, {0.1, 0.2, 0.3, 0.4}, 40};
  const auto shrunk = shrink_instance(in, [](const ProportionalInstance& c) {
    return std::any_of(c.sizes.begin(), c.sizes.end(), [](double d) { return d > 3; });
  });
  ASSERT_EQ(shrunk.sizes.size(), 1u);
  EXPECT_EQ(shrunk.sizes[0], 5.0);
  EXPECT_EQ(shrunk.n, 1.0);
}

}  // namespace
}  // namespace psalm
