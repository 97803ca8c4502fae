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

#ifndef PSALM_RNG_HPP_
#define PSALM_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace psalm {

// Seeded random stream. All draws go through the portable helpers below so
// that a given seed yields the same sequence with any standard library (the
// std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). Unbiased (rejection on the low tail).
  std::size_t uniform_index(std::size_t n);

  // Uniform real in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform real in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// FNV-1a over the bytes of `key`.
std::uint64_t hash_key(std::string_view key);

// splitmix64 finalizer applied to seed ^ key.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key);

// Independent stream for a (master seed, key path) pair, e.g.
// derive_stream(master, {"mor", "m1", "psalm", "st"}, trial).
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::string_view> path,
                          std::uint64_t index = 0);

}  // namespace psalm

#endif  // PSALM_RNG_HPP_
