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
#include <array>

#include "psalm/subjects.hpp"

namespace psalm {
namespace {

struct Bracket {
  double lo;
  double hi;
  double rate;
};

using Schedule = std::array<Bracket, 5>;

constexpr Schedule kSchedule = {{
    {0, 500, 0.0},
    {500, 2500, 0.10},
    {2500, 12500, 0.20},
    {12500, 50000, 0.30},
    {50000, 1e300, 0.40},
}};

double tax(const Schedule& schedule, double income) {
  double total = 0;
  for (const Bracket& b : schedule) {
    if (income > b.lo) total += b.rate * (std::min(income, b.hi) - b.lo);
  }
  return total;
}

template <typename F>
Program program(F f) {
  return [f](const Point& p) { return Output{f(p[0])}; };
}

Program with_schedule(Schedule schedule) {
  return program([schedule](double x) { return tax(schedule, x); });
}

constexpr double kStep = 500;
constexpr double kTopRate = 0.40;

MetamorphicRelation monotone() {
  return unary_relation(
      "MR1", "more income never means less tax",
      [](const Point& p) { return Point{p[0] + kStep}; },
      [](const Output& s, const Output& f) { return approx_le(s[0], f[0]); },
      [](const Point& p) { return p[0] + kStep <= 200000; });
}

MetamorphicRelation marginal_cap() {
  return unary_relation(
      "MR2", "tax on extra income never exceeds the top rate",
      [](const Point& p) { return Point{p[0] + kStep}; },
      [](const Output& s, const Output& f) {
        return approx_le(f[0] - s[0], kTopRate * kStep);
      },
      [](const Point& p) { return p[0] + kStep <= 200000; });
}

MetamorphicRelation convex() {
  MetamorphicRelation mr;
  mr.id = "MR3";
  mr.description = "tax is convex in income";
  mr.followup_arity = 2;
  mr.generate_followups = [](std::span<const Point> s, std::size_t) {
    return std::vector<Point>{{s[0][0] + kStep}, {s[0][0] + 2 * kStep}};
  };
  mr.relation_holds = [](std::span<const Output> s, std::span<const Output> f) {
    return approx_le(2 * f[0][0], s[0][0] + f[1][0]);
  };
  mr.input_constraint = [](const Point& p) { return p[0] + 2 * kStep <= 200000; };
  return mr;
}

MetamorphicRelation midpoint() {
  MetamorphicRelation mr;
  mr.id = "MR4";
  mr.description = "tax at the mean of two incomes is at most their mean tax";
  mr.source_arity = 2;
  mr.generate_followups = [](std::span<const Point> s, std::size_t) {
    return std::vector<Point>{{(s[0][0] + s[1][0]) / 2}};
  };
  mr.relation_holds = [](std::span<const Output> s, std::span<const Output> f) {
    return approx_le(2 * f[0][0], s[0][0] + s[1][0]);
  };
  return mr;
}

}  // namespace

SubjectProgram make_income_tax_subject() {
  SubjectProgram s;
  s.id = "int";
  s.description = "progressive income tax over five brackets";
  s.inputs = {{"income", closed(0, 200000), InputKind::kInteger, 10.0}};
  s.reference_fn = with_schedule(kSchedule);

  Schedule low_third = kSchedule;
  low_third[2].rate = 0.08;
  Schedule top = kSchedule;
  top[4].rate = 0.45;
  Schedule negative_second = kSchedule;
  negative_second[1].rate = -0.10;
  Schedule uncapped = kSchedule;
  uncapped[3].hi = 1e300;

  s.mutants = {
      {"rate-3-low", "third bracket rate lowered below the second",
       with_schedule(low_third)},
      {"bracket-offset", "fourth bracket taxed from zero instead of its lower bound",
       program([](double x) {
         double t = tax(kSchedule, x);
         if (x > 12500) t += 0.30 * 12500;
         return t;
       })},
      {"top-rate", "top rate raised to 45%", with_schedule(top)},
      {"rate-2-sign", "second bracket rate negated", with_schedule(negative_second)},
      {"threshold-shift", "second bracket extended to 3000 without moving the third",
       program([](double x) {
         if (x <= 2500 || x > 3000) return tax(kSchedule, x);
         return tax(kSchedule, 2500) + 0.10 * (x - 2500) + 0.20 * (x - 2500);
       })},
      {"cap-missing", "fourth bracket upper cap dropped", with_schedule(uncapped)},
  };
  s.mrs = {monotone(), marginal_cap(), convex(), midpoint()};
  s.default_scheme = {
      Box{{half_open(0, 500)}},       Box{{half_open(500, 2500)}},
      Box{{half_open(2500, 12500)}},  Box{{half_open(12500, 50000)}},
      Box{{closed(50000, 200000)}},
  };
  return s;
}

}  // namespace psalm
