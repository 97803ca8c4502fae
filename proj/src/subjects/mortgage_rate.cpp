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

struct Tiers {
  double cut[4] = {580, 670, 740, 800};
  double rate[5] = {7.25, 6.5, 5.75, 5.25, 5.0};
};

double base_rate(const Tiers& t, double score) {
  for (int i = 0; i < 4; ++i) {
    if (score < t.cut[i]) return t.rate[i];
  }
  return t.rate[4];
}

double ltv_adjustment(double ltv) {
  if (ltv > 95) return 0.75;
  if (ltv > 80) return 0.5;
  return 0.0;
}

double rate(double score, double ltv) {
  return base_rate(Tiers{}, score) + ltv_adjustment(ltv);
}

template <typename F>
Program program(F f) {
  return [f](const Point& p) { return Output{f(p[0], p[1])}; };
}

MetamorphicRelation better_score() {
  return unary_relation(
      "MR1", "raising the score by 10 never raises the rate",
      [](const Point& p) { return Point{p[0] + 10, p[1]}; },
      [](const Output& s, const Output& f) { return approx_le(f[0], s[0]); },
      [](const Point& p) { return p[0] <= 840; });
}

MetamorphicRelation higher_ltv() {
  return unary_relation(
      "MR2", "raising the loan-to-value by 5 never lowers the rate",
      [](const Point& p) { return Point{p[0], p[1] + 5}; },
      [](const Output& s, const Output& f) { return approx_le(s[0], f[0]); },
      [](const Point& p) { return p[1] <= 95; });
}

MetamorphicRelation ltv_floor() {
  return unary_relation(
      "MR3", "the lowest loan-to-value gives the lowest rate for a score",
      [](const Point& p) { return Point{p[0], 50}; },
      [](const Output& s, const Output& f) { return approx_le(f[0], s[0]); });
}

MetamorphicRelation score_ceiling() {
  return unary_relation(
      "MR4", "the top score gives the lowest rate for a loan-to-value",
      [](const Point& p) { return Point{850, p[1]}; },
      [](const Output& s, const Output& f) { return approx_le(f[0], s[0]); });
}

MetamorphicRelation separable() {
  MetamorphicRelation mr;
  mr.id = "MR5";
  mr.description = "score and loan-to-value contributions add up independently";
  mr.source_arity = 2;
  mr.followup_arity = 2;
  mr.generate_followups = [](std::span<const Point> s, std::size_t) {
    return std::vector<Point>{{s[0][0], s[1][1]}, {s[1][0], s[0][1]}};
  };
  mr.relation_holds = [](std::span<const Output> s, std::span<const Output> f) {
    return approx_equal(s[0][0] + s[1][0], f[0][0] + f[1][0]);
  };
  return mr;
}

}  // namespace

SubjectProgram make_mortgage_rate_subject() {
  SubjectProgram s;
  s.id = "mor";
  s.description = "mortgage rate from credit score and loan-to-value percentage";
  s.inputs = {
      {"score", closed(300, 850), InputKind::kInteger, 1.0},
      {"ltv", closed(50, 100), InputKind::kInteger, 5.0},
  };
  s.reference_fn = program(rate);
  s.mutants = {
      {"tier-rate", "rate of the 740-799 tier raised above the tier below",
       program([](double score, double ltv) {
         Tiers t;
         t.rate[3] = 5.85;
         return base_rate(t, score) + ltv_adjustment(ltv);
       })},
      {"ltv-interaction", "top loan-to-value surcharge skipped for good scores",
       program([](double score, double ltv) {
         double adj = ltv_adjustment(ltv);
         if (ltv > 95 && score >= 740) adj = 0.0;
         return base_rate(Tiers{}, score) + adj;
       })},
      {"rate-sign", "top loan-to-value surcharge subtracted",
       program([](double score, double ltv) {
         const double adj = ltv > 95 ? -0.75 : ltv_adjustment(ltv);
         return base_rate(Tiers{}, score) + adj;
       })},
      {"ceiling-clamp", "scores above 820 looked up 100 points lower",
       program([](double score, double ltv) {
         return rate(score > 820 ? score - 100 : score, ltv);
       })},
      {"tier-boundary", "first tier boundary moved from 580 to 600",
       program([](double score, double ltv) {
         Tiers t;
         t.cut[0] = 600;
         return base_rate(t, score) + ltv_adjustment(ltv);
       })},
  };
  s.mrs = {better_score(), higher_ltv(), ltv_floor(), score_ceiling(), separable()};
  const Interval ltv = closed(50, 100);
  s.default_scheme = {
      Box{{half_open(300, 580), ltv}}, Box{{half_open(580, 670), ltv}},
      Box{{half_open(670, 740), ltv}}, Box{{half_open(740, 800), ltv}},
      Box{{closed(800, 850), ltv}},
  };
  return s;
}

}  // namespace psalm
