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
#include <cstdint>
#include <limits>
#include <string>

#include "psalm/error.hpp"
#include "psalm/stats.hpp"

namespace psalm {
namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1;
  const double qam = a - 1;
  double c = 1;
  double d = 1 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1) < kEps) break;
  }
  return h;
}

void require_nonempty(std::span<const double> x, const char* what) {
  if (x.empty()) throw EmptySampleError(std::string(what) + " sample is empty");
}

}  // namespace

double mean(std::span<const double> x) {
  require_nonempty(x, "mean of");
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw SampleSizeError("variance needs at least 2 values");
  const double m = mean(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_fraction(a, b, x) / a;
  return 1 - front * beta_fraction(b, a, 1 - x) / b;
}

double vargha_delaney_a12(std::span<const double> x, std::span<const double> y) {
  require_nonempty(x, "first");
  require_nonempty(y, "second");
  // Counted in integers so that A12(x, y) + A12(y, x) is exactly 1.
  std::uint64_t wins = 0;
  std::uint64_t ties = 0;
  for (double a : x) {
    for (double b : y) {
      if (a > b) {
        ++wins;
      } else if (a == b) {
        ++ties;
      }
    }
  }
  const double pairs = static_cast<double>(x.size()) * static_cast<double>(y.size());
  return static_cast<double>(2 * wins + ties) / (2 * pairs);
}

std::optional<double> welch_t_test(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) {
    throw SampleSizeError("Welch t-test needs at least 2 values per sample");
  }
  const double mx = mean(x);
  const double my = mean(y);
  const double vx = sample_variance(x) / static_cast<double>(x.size());
  const double vy = sample_variance(y) / static_cast<double>(y.size());
  const double se2 = vx + vy;
  if (se2 == 0) {
    if (mx == my) return std::nullopt;
    return 0.0;
  }
  const double t = (mx - my) / std::sqrt(se2);
  const double df = se2 * se2 /
                    (vx * vx / static_cast<double>(x.size() - 1) +
                     vy * vy / static_cast<double>(y.size() - 1));
  // P(|T| > |t|) = I_{df / (df + t^2)}(df / 2, 1 / 2).
  const double p = incomplete_beta(df / 2, 0.5, df / (df + t * t));
  return std::clamp(p, 0.0, 1.0);
}

double improvement_pct(double a, double b) {
  if (b == 0) throw ZeroBaselineError("improvement over a zero baseline is undefined");
  return 100.0 * (a - b) / b;
}

ComparisonSummary compare(std::span<const double> a, std::span<const double> b) {
  ComparisonSummary out;
  out.mean_a = mean(a);
  out.mean_b = mean(b);
  if (out.mean_b != 0) out.improvement_pct = improvement_pct(out.mean_a, out.mean_b);
  out.p_value = welch_t_test(a, b);
  out.a12 = vargha_delaney_a12(a, b);
  return out;
}

Verdict classify(const ComparisonSummary& summary, double alpha) {
  if (!summary.p_value || *summary.p_value >= alpha) return Verdict::kNoDifference;
  if (summary.mean_a > summary.mean_b) return Verdict::kBetter;
  if (summary.mean_a < summary.mean_b) return Verdict::kWorse;
  return Verdict::kNoDifference;
}

CategoryCounts& CategoryCounts::operator+=(const CategoryCounts& o) {
  better += o.better;
  no_difference += o.no_difference;
  worse += o.worse;
  return *this;
}

CategoryCounts categorize_mutants(std::span<const ComparisonSummary> per_mutant,
                                  double alpha) {
  CategoryCounts counts;
  for (const auto& s : per_mutant) {
    switch (classify(s, alpha)) {
      case Verdict::kBetter: ++counts.better; break;
      case Verdict::kNoDifference: ++counts.no_difference; break;
      case Verdict::kWorse: ++counts.worse; break;
    }
  }
  return counts;
}

}  // namespace psalm
