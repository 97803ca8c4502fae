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

#include <charconv>
#include <cmath>

#include "psalm/csv.hpp"
#include "psalm/error.hpp"

namespace psalm {
namespace {

std::string to_chars_string(double v, std::chars_format fmt, int precision) {
  char buf[64];
  auto res = precision < 0 ? std::to_chars(buf, buf + sizeof buf, v, fmt)
                           : std::to_chars(buf, buf + sizeof buf, v, fmt, precision);
  std::string out(buf, res.ptr);
  // No negative zero in reports.
  if (out[0] == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

}  // namespace

std::string format_number(double v) { return to_chars_string(v, std::chars_format::general, -1); }

std::string format_fixed(double v, int digits) {
  return to_chars_string(v, std::chars_format::fixed, digits);
}

std::string format_general(double v, int digits) {
  return to_chars_string(v, std::chars_format::general, digits);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::uint64_t parse_uint(std::string_view s, std::size_t line_no) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": bad integer '" +
                      std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, std::size_t line_no) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw FormatError("line " + std::to_string(line_no) + ": bad number '" +
                      std::string(s) + "'");
  }
  return v;
}

}  // namespace psalm
