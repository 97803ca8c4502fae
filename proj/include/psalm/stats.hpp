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

#ifndef PSALM_STATS_HPP_
#define PSALM_STATS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace psalm {

// P(X > Y) + 0.5 P(X = Y) over all pairs. Throws EmptySampleError.
double vargha_delaney_a12(std::span<const double> x, std::span<const double> y);

// Two-tailed Welch t-test p-value. Returns nullopt when both samples have
// zero variance and equal means (the test is undefined there); zero variance
// with different means gives 0. Throws SampleSizeError (fewer than 2 values).
std::optional<double> welch_t_test(std::span<const double> x, std::span<const double> y);

// 100 (a - b) / b. Throws ZeroBaselineError when b is 0.
double improvement_pct(double a, double b);

double mean(std::span<const double> x);
// Unbiased sample variance. Throws SampleSizeError.
double sample_variance(std::span<const double> x);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

struct ComparisonSummary {
  double mean_a = 0;
  double mean_b = 0;
  // Undefined when mean_b is 0.
  std::optional<double> improvement_pct;
  // Undefined for constant, equal samples.
  std::optional<double> p_value;
  double a12 = 0.5;
};

// Throws SampleSizeError.
ComparisonSummary compare(std::span<const double> a, std::span<const double> b);

enum class Verdict { kBetter, kNoDifference, kWorse };

// Better iff p < alpha and mean_a > mean_b, worse iff p < alpha and
// mean_a < mean_b; an undefined p is no difference.
Verdict classify(const ComparisonSummary& summary, double alpha = 0.05);

struct CategoryCounts {
  std::size_t better = 0;
  std::size_t no_difference = 0;
  std::size_t worse = 0;

  std::size_t total() const { return better + no_difference + worse; }
  CategoryCounts& operator+=(const CategoryCounts& o);
  bool operator==(const CategoryCounts&) const = default;
};

CategoryCounts categorize_mutants(std::span<const ComparisonSummary> per_mutant,
                                  double alpha = 0.05);

}  // namespace psalm

#endif  // PSALM_STATS_HPP_
