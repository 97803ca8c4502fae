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

// Magnitude of m with the sign of s; s == 0 counts as positive.
double copy_sign(double m, double s) { return std::copysign(m, s); }

template <typename F>
Program program(F f) {
  return [f](const Point& p) { return Output{f(p[0], p[1])}; };
}

bool same(const Output& a, const Output& b) { return approx_equal(a[0], b[0]); }

}  // namespace

SubjectProgram make_copy_sign_subject() {
  SubjectProgram s;
  s.id = "copys";
  s.description = "magnitude of the first argument with the sign of the second";
  s.inputs = {
      {"magnitude", closed(-100, 100), InputKind::kReal, 2.0},
      {"sign", closed(-100, 100), InputKind::kReal, 2.0},
  };
  s.reference_fn = program(copy_sign);
  s.mutants = {
      {"zero-sign", "zero sign treated as negative",
       program([](double m, double sg) {
         return sg > 0 ? std::abs(m) : -std::abs(m);
       })},
      {"abs-missing", "magnitude used without taking its absolute value",
       program([](double m, double sg) { return std::signbit(sg) ? -m : m; })},
      {"small-magnitude", "magnitudes below 10 returned unchanged",
       program([](double m, double sg) {
         return std::abs(m) < 10 ? m : copy_sign(m, sg);
       })},
      {"zero-magnitude", "zero magnitude returns the sign argument",
       program([](double m, double sg) { return m == 0 ? sg : copy_sign(m, sg); })},
      {"large-sign", "sign arguments above 90 treated as negative",
       program([](double m, double sg) {
         return sg > 90 ? -std::abs(m) : copy_sign(m, sg);
       })},
  };
  s.mrs = {
      unary_relation(
          "MR1", "negating the magnitude leaves the result unchanged",
          [](const Point& p) { return Point{-p[0], p[1]}; }, same),
      unary_relation(
          "MR2", "halving the sign argument leaves the result unchanged",
          [](const Point& p) { return Point{p[0], p[1] / 2}; }, same),
      unary_relation(
          "MR3", "negating the sign argument negates the result",
          [](const Point& p) { return Point{p[0], -p[1]}; },
          [](const Output& s, const Output& f) { return approx_equal(f[0], -s[0]); }),
      unary_relation(
          "MR4", "halving the magnitude halves the result",
          [](const Point& p) { return Point{p[0] / 2, p[1]}; },
          [](const Output& s, const Output& f) { return approx_equal(f[0], s[0] / 2); }),
  };
  // Signs of both arguments, with zero as its own class.
  const Interval axes[3] = {half_open(-100, 0), closed(0, 0), Interval{0, 100, false, true}};
  for (const Interval& sign : axes) {
    for (const Interval& magnitude : axes) s.default_scheme.push_back(Box{{magnitude, sign}});
  }
  return s;
}

}  // namespace psalm
