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

#ifndef PSALM_CSV_HPP_
#define PSALM_CSV_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace psalm {

// Shortest round-trip decimal form.
std::string format_number(double v);
std::string format_fixed(double v, int digits);
// printf %g style with `digits` significant digits.
std::string format_general(double v, int digits);

// Quotes the field when it holds a comma, quote or newline.
std::string csv_field(std::string_view s);
std::vector<std::string> split_csv_line(std::string_view line);

// Throw FormatError naming `line_no`.
std::uint64_t parse_uint(std::string_view s, std::size_t line_no);
double parse_real(std::string_view s, std::size_t line_no);

}  // namespace psalm

#endif  // PSALM_CSV_HPP_
