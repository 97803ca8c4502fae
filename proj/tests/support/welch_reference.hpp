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

#ifndef PSALM_TESTS_SUPPORT_WELCH_REFERENCE_HPP_
#define PSALM_TESTS_SUPPORT_WELCH_REFERENCE_HPP_

#include <boost/math/distributions/students_t.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

namespace psalm::testing {

using Big = boost::multiprecision::cpp_bin_float_50;

// Welch statistic, Welch-Satterthwaite df and two-tailed Student-t tail,
// all in 50-digit arithmetic.
inline double reference_welch_p(const std::vector<double>& x, const std::vector<double>& y) {
  auto moments = [](const std::vector<double>& v) {
    Big m = 0;
    for (double e : v) m += e;
    m /= v.size();
    Big s = 0;
    for (double e : v) s += (Big(e) - m) * (Big(e) - m);
    return std::pair<Big, Big>{m, s / (v.size() - 1)};
  };
  const auto [mx, vx] = moments(x);
  const auto [my, vy] = moments(y);
  const Big ax = vx / x.size();
  const Big ay = vy / y.size();
  const Big t = abs(mx - my) / sqrt(ax + ay);
  const Big df = (ax + ay) * (ax + ay) /
                 (ax * ax / (x.size() - 1) + ay * ay / (y.size() - 1));
  boost::math::students_t_distribution<Big> dist(df);
  return static_cast<double>(2 * boost::math::cdf(boost::math::complement(dist, t)));
}

inline std::vector<double> normal_sample(std::mt19937_64& gen, std::size_t n, double mu,
                                         double sd) {
  std::normal_distribution<double> dist(mu, sd);
  std::vector<double> out(n);
  for (double& v : out) v = dist(gen);
  return out;
}

// Twenty fixed sample pairs with mixed sizes, spreads and mean gaps.
inline std::vector<std::pair<std::vector<double>, std::vector<double>>> fixed_welch_pairs() {
  std::mt19937_64 gen(20261015);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
  for (int pair = 0; pair < 20; ++pair) {
    const std::size_t nx = 2 + pair % 7 * 5;
    const std::size_t ny = 3 + pair % 5 * 6;
    auto x = normal_sample(gen, nx, 0.5, 0.1 + 0.05 * (pair % 4));
    auto y = normal_sample(gen, ny, 0.5 + 0.02 * pair, 0.2);
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

}  // namespace psalm::testing

#endif  // PSALM_TESTS_SUPPORT_WELCH_REFERENCE_HPP_
