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
#include <numbers>

#include "psalm/subjects.hpp"

namespace psalm {
namespace {

double sin_deg(double x) { return std::sin(x * std::numbers::pi / 180.0); }

Program scalar(double (*fn)(double)) {
  return [fn](const Point& p) { return Output{fn(p[0])}; };
}

MetamorphicRelation periodicity() {
  auto mr = unary_relation(
      "MR_a", "sin(x) = sin(x +/- 360), shifting towards zero",
      [](const Point& p) { return Point{p[0] < 0 ? p[0] + 360 : p[0] - 360}; },
      [](const Output& s, const Output& f) { return approx_equal(s[0], f[0]); });
  return mr;
}

MetamorphicRelation angle_sum() {
  MetamorphicRelation mr;
  mr.id = "MR_b";
  mr.description = "sin(x + y) = sin(x) sin(90 - y) + sin(y) sin(90 - x)";
  mr.source_arity = 2;
  mr.followup_arity = 3;
  mr.generate_followups = [](std::span<const Point> s, std::size_t) {
    return std::vector<Point>{{s[0][0] + s[1][0]}, {90 - s[0][0]}, {90 - s[1][0]}};
  };
  mr.relation_holds = [](std::span<const Output> s, std::span<const Output> f) {
    return approx_equal(f[0][0], s[0][0] * f[2][0] + s[1][0] * f[1][0]);
  };
  mr.input_constraint = [](const Point& p) { return std::abs(p[0]) <= 180; };
  mr.affine = {{
      {{0.0}, {{1.0, 1.0}}},
      {{90.0}, {{-1.0, 0.0}}},
      {{90.0}, {{0.0, -1.0}}},
  }};
  return mr;
}

MetamorphicRelation odd_symmetry() {
  auto mr = unary_relation(
      "MR_c", "sin(-x) = -sin(x)", [](const Point& p) { return Point{-p[0]}; },
      [](const Output& s, const Output& f) { return approx_equal(f[0], -s[0]); });
  mr.affine = {{{{0.0}, {{-1.0}}}}};
  return mr;
}

}  // namespace

SubjectProgram make_sine_subject() {
  SubjectProgram s;
  s.id = "sin";
  s.description = "sine of an angle in degrees";
  s.inputs = {{"x", closed(-360, 360), InputKind::kReal, 1.0}};
  s.reference_fn = scalar(sin_deg);
  s.mutants = {
      {"abs-arg", "argument replaced by its absolute value",
       scalar([](double x) { return sin_deg(std::abs(x)); })},
      {"pi-const", "pi constant truncated to 3.1416",
       scalar([](double x) { return std::sin(x * 3.1416 / 180.0); })},
      {"neg-shift", "negative angles shifted by one degree",
       scalar([](double x) { return x < 0 ? sin_deg(x + 1) : sin_deg(x); })},
      {"small-angle", "small-angle approximation below five degrees",
       scalar([](double x) {
         return std::abs(x) < 5 ? x * std::numbers::pi / 180.0 : sin_deg(x);
       })},
      {"sign-flip-q3", "sign flipped for angles below -90",
       scalar([](double x) { return x < -90 && x >= -270 ? -sin_deg(x) : sin_deg(x); })},
  };
  s.mrs = {periodicity(), angle_sum(), odd_symmetry()};
  s.default_scheme = {
      Box{{half_open(-180, -90)}},
      Box{{half_open(-90, 0)}},
      Box{{closed(0, 180)}},
  };
  return s;
}

}  // namespace psalm
