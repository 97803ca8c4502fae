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
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "psalm/config.hpp"
#include "psalm/error.hpp"

namespace psalm {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

std::size_t count_or(const json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

double parse_bound(std::string_view s) {
  s = trim(s);
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("bad interval bound '" + std::string(s) + "'");
  }
  return v;
}

SubjectSpec parse_subject(const json& j) {
  if (!j.is_object() || !j.contains("id")) throw ConfigError("subject entries need an id");
  reject_unknown_keys(j, {"id", "scheme"}, "subject");
  SubjectSpec spec;
  spec.id = get_or<std::string>(j, "id", "");
  if (!j.contains("scheme")) return spec;
  const json& scheme = j.at("scheme");
  if (scheme.is_string()) {
    if (scheme.get<std::string>() != "default") {
      throw ConfigError("unknown scheme '" + scheme.get<std::string>() + "'");
    }
    return spec;
  }
  if (!scheme.is_object() || !scheme.contains("boxes")) {
    throw ConfigError("scheme must be \"default\" or {\"boxes\": [...]}");
  }
  reject_unknown_keys(scheme, {"boxes"}, "scheme");
  for (const json& box : scheme.at("boxes")) {
    if (!box.is_array()) throw ConfigError("each box is a list of interval strings");
    Box b;
    for (const json& iv : box) {
      if (!iv.is_string()) throw ConfigError("intervals are strings like \"[0,500)\"");
      b.dims.push_back(parse_interval(iv.get<std::string>()));
    }
    spec.scheme.push_back(std::move(b));
  }
  return spec;
}

}  // namespace

Interval parse_interval(std::string_view text) {
  text = trim(text);
  if (text.size() < 5) throw ConfigError("bad interval '" + std::string(text) + "'");
  const char open = text.front();
  const char close = text.back();
  const auto comma = text.find(',');
  if ((open != '[' && open != '(') || (close != ']' && close != ')') ||
      comma == std::string_view::npos) {
    throw ConfigError("bad interval '" + std::string(text) + "'");
  }
  Interval iv;
  iv.lo = parse_bound(text.substr(1, comma - 1));
  iv.hi = parse_bound(text.substr(comma + 1, text.size() - comma - 2));
  iv.lo_closed = open == '[';
  iv.hi_closed = close == ']';
  if (iv.lo > iv.hi) throw ConfigError("empty interval '" + std::string(text) + "'");
  return iv;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j,
                      {"master_seed", "trials", "iterations", "selection_multiplier", "art_k",
                       "strategies", "levels", "mg_scheme", "mutants", "subjects"},
                      "config");
  ExperimentConfig c;
  if (j.contains("master_seed")) {
    if (!j.at("master_seed").is_number_unsigned()) {
      throw ConfigError("'master_seed' must be a non-negative integer");
    }
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  c.trials = count_or(j, "trials", c.trials);
  c.iterations = count_or(j, "iterations", c.iterations);
  c.selection_multiplier = count_or(j, "selection_multiplier", c.selection_multiplier);
  c.art_k = count_or(j, "art_k", c.art_k);
  c.strategies = get_or(j, "strategies", c.strategies);
  c.mutants = get_or(j, "mutants", c.mutants);
  if (j.contains("levels")) {
    c.levels.clear();
    for (const auto& l : get_or<std::vector<std::string>>(j, "levels", {})) {
      try {
        c.levels.push_back(parse_level(l));
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (j.contains("mg_scheme")) {
    c.mg_scheme = parse_mg_scheme(get_or<std::string>(j, "mg_scheme", ""));
  }
  if (j.contains("subjects")) {
    if (!j.at("subjects").is_array()) throw ConfigError("'subjects' must be a list");
    for (const json& s : j.at("subjects")) c.subjects.push_back(parse_subject(s));
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace psalm
