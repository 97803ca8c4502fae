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

#include <cmath>

#include "psalm/subjects.hpp"

namespace psalm {
namespace {

// a + a q + ... + a q^(n-1).
double geometric_sum(double a, double q, double n) {
  if (q == 1) return a * n;
  return a * (1 - std::pow(q, n)) / (1 - q);
}

template <typename F>
Program program(F f) {
  return [f](const Point& p) { return Output{f(p[0], p[1], p[2])}; };
}

MetamorphicRelation scaling() {
  return unary_relation(
      "MR1", "doubling the base doubles the sum",
      [](const Point& p) { return Point{2 * p[0], p[1], p[2]}; },
      [](const Output& s, const Output& f) { return approx_equal(f[0], 2 * s[0]); },
      [](const Point& p) { return p[0] <= 4; });
}

// The relations below recover the base as S(1) and q^n as
// (S(n + 1) - S(n)) / S(1), so they only look at program outputs.
MetamorphicRelation recurrence(double max_terms) {
  MetamorphicRelation mr;
  mr.id = "MR2";
  mr.description = "one more term: S(n + 1) = a + q S(n)";
  mr.followup_arity = 3;
  mr.generate_followups = [](std::span<const Point> s, std::size_t) {
    const Point& p = s[0];
    return std::vector<Point>{{p[0], p[1], p[2] + 1}, {p[0], p[1], 1}, {p[0], p[1], 2}};
  };
  mr.relation_holds = [](std::span<const Output> s, std::span<const Output> f) {
    const double a = f[1][0];
    if (a == 0) return false;
    const double q = (f[2][0] - a) / a;
    return approx_equal(f[0][0], a + q * s[0][0]);
  };
  mr.input_constraint = [max_terms](const Point& p) { return p[2] + 1 <= max_terms; };
  return mr;
}

MetamorphicRelation doubling(double max_terms) {
  MetamorphicRelation mr;
  mr.id = "MR3";
  mr.description = "twice the terms: S(2n) = S(n) (1 + q^n)";
  mr.followup_arity = 3;
  mr.generate_followups = [](std::span<const Point> s, std::size_t) {
    const Point& p = s[0];
    return std::vector<Point>{{p[0], p[1], 2 * p[2]}, {p[0], p[1], p[2] + 1}, {p[0], p[1], 1}};
  };
  mr.relation_holds = [](std::span<const Output> s, std::span<const Output> f) {
    const double a = f[2][0];
    if (a == 0) return false;
    const double qn = (f[1][0] - s[0][0]) / a;
    return approx_equal(f[0][0], s[0][0] * (1 + qn));
  };
  mr.input_constraint = [max_terms](const Point& p) { return 2 * p[2] <= max_terms; };
  return mr;
}

// S(q) + S(-q) keeps the even powers twice: 2 S(q^2, ceil(n / 2)).
MetamorphicRelation negation() {
  MetamorphicRelation mr;
  mr.id = "MR4";
  mr.description = "S(a, q, n) + S(a, -q, n) = 2 S(a, q^2, ceil(n / 2))";
  mr.followup_arity = 2;
  mr.generate_followups = [](std::span<const Point> s, std::size_t) {
    const Point& p = s[0];
    return std::vector<Point>{{p[0], -p[1], p[2]},
                              {p[0], p[1] * p[1], std::ceil(p[2] / 2)}};
  };
  mr.relation_holds = [](std::span<const Output> s, std::span<const Output> f) {
    return approx_equal(s[0][0] + f[0][0], 2 * f[1][0]);
  };
  mr.input_constraint = [](const Point& p) { return p[1] * p[1] <= 2; };
  return mr;
}

}  // namespace

SubjectProgram make_geometric_sum_subject() {
  constexpr double kMaxTerms = 16;
  SubjectProgram s;
  s.id = "ges";
  s.description = "sum of the first n terms of a geometric sequence";
  s.inputs = {
      {"base", closed(1, 8), InputKind::kInteger, 1.0},
      {"ratio", closed(-2, 2), InputKind::kReal, 0.25},
      {"terms", closed(1, kMaxTerms), InputKind::kInteger, 1.0},
  };
  s.reference_fn = program(geometric_sum);
  s.mutants = {
      {"ratio-one-branch", "off-by-one in the unit-ratio branch",
       program([](double a, double q, double n) {
         return q == 1 ? a * (n + 1) : geometric_sum(a, q, n);
       })},
      {"ratio-plus-one", "ratio replaced by ratio + 1",
       program([](double a, double q, double n) { return geometric_sum(a, q + 1, n); })},
      {"exponent-off-by-one", "exponent n - 1 in the closed form",
       program([](double a, double q, double n) {
         if (q == 1) return a * n;
         return a * (1 - std::pow(q, n - 1)) / (1 - q);
       })},
      {"sign-error", "numerator terms swapped in the closed form",
       program([](double a, double q, double n) {
         if (q == 1) return a * n;
         return a * (std::pow(q, n) - 1) / (1 - q);
       })},
      {"negative-ratio-abs", "negative ratio replaced by its magnitude",
       program([](double a, double q, double n) {
         return geometric_sum(a, std::abs(q), n);
       })},
      {"ratio-clamp", "ratio clamped to 1.5",
       program([](double a, double q, double n) {
         return geometric_sum(a, std::min(q, 1.5), n);
       })},
  };

  s.mrs = {scaling(), recurrence(kMaxTerms), doubling(kMaxTerms), negation()};
  const Interval base = closed(1, 8);
  const Interval terms = closed(1, kMaxTerms);
  s.default_scheme = {
      Box{{base, half_open(-2, -1), terms}},
      Box{{base, half_open(-1, 0), terms}},
      Box{{base, half_open(0, 1), terms}},
      Box{{base, closed(1, 1), terms}},
      Box{{base, Interval{1, 2, false, true}, terms}},
  };
  return s;
}

}  // namespace psalm
