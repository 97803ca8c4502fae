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

#ifndef PSALM_CONFIG_HPP_
#define PSALM_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "psalm/experiment.hpp"
#include "psalm/partition.hpp"

namespace psalm {

// JSON experiment config. Keys: master_seed, trials, iterations,
// selection_multiplier, art_k, strategies, levels, mg_scheme, mutants and
// subjects. A subject is {"id": ..., "scheme": "default"} or carries its own
// boxes: {"id": ..., "scheme": {"boxes": [["[0,500)"], ...]]}}, one interval
// string per input dimension. Unknown keys are rejected.
// Throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// "[lo,hi)", "(lo,hi]", "[lo,hi]" or "(lo,hi)". Throws ConfigError.
Interval parse_interval(std::string_view text);

}  // namespace psalm

#endif  // PSALM_CONFIG_HPP_
