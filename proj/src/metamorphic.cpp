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

#include "psalm/metamorphic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "psalm/error.hpp"

namespace psalm {
namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

std::string format_points(std::span<const Point> points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) out += ';';
    for (std::size_t d = 0; d < points[i].size(); ++d) {
      if (d > 0) out += ',';
      out += format_number(points[i][d]);
    }
  }
  return out;
}

std::vector<Point> parse_points(std::string_view s) {
  std::vector<Point> points;
  if (s.empty()) return points;
  for (std::string_view item : split(s, ';')) {
    Point p;
    for (std::string_view coord : split(item, ',')) p.push_back(parse_number(coord));
    points.push_back(std::move(p));
  }
  return points;
}

std::string describe(const Point& p) {
  return "(" + format_points(std::span<const Point>(&p, 1)) + ")";
}

}  // namespace

bool approx_equal(double a, double b) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= std::max(kAbsTol, kRelTol * scale);
}

bool approx_equal(const Output& a, const Output& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!approx_equal(a[i], b[i])) return false;
  }
  return true;
}

bool approx_le(double a, double b) { return a <= b || approx_equal(a, b); }

Point MetamorphicGroup::features() const {
  Point out;
  for (const auto& p : sources) out.insert(out.end(), p.begin(), p.end());
  for (const auto& p : followups) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<MetamorphicGroup> construct_mgs(const MetamorphicRelation& mr,
                                            std::span<const Point> sources,
                                            PairingPolicy policy, Rng& rng) {
  const std::size_t r = mr.source_arity;
  if (r == 0) throw ArityError("MR " + mr.id + " has source arity 0");
  if (sources.size() % r != 0) {
    throw ArityError(std::to_string(sources.size()) +
                     " sources cannot be grouped into " + std::to_string(r) +
                     "-tuples for MR " + mr.id);
  }
  for (const Point& s : sources) {
    if (!mr.admits(s)) {
      throw ConstraintError("source " + describe(s) +
                            " violates the input constraint of MR " + mr.id);
    }
  }

  std::vector<MetamorphicGroup> groups;
  groups.reserve(sources.size() / r * mr.mgs_per_source);
  auto emit = [&](std::vector<Point> tuple, std::size_t variant) {
    MetamorphicGroup mg;
    mg.mr_id = mr.id;
    mg.variant = variant;
    mg.followups = mr.generate_followups(tuple, variant);
    mg.sources = std::move(tuple);
    groups.push_back(std::move(mg));
  };

  if (r == 1) {
    for (const Point& s : sources) {
      for (std::size_t v = 0; v < mr.mgs_per_source; ++v) emit({s}, v);
    }
    return groups;
  }

  std::vector<std::size_t> order(sources.size());
  for (std::size_t round = 0; round < mr.mgs_per_source; ++round) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (policy == PairingPolicy::kShuffleSequential) {
      rng.shuffle(std::span<std::size_t>(order));
    }
    for (std::size_t i = 0; i < order.size(); i += r) {
      std::vector<Point> tuple;
      tuple.reserve(r);
      for (std::size_t j = 0; j < r; ++j) tuple.push_back(sources[order[i + j]]);
      emit(std::move(tuple), round);
    }
  }
  return groups;
}

MgDomain build_mg_domain(std::span<const std::vector<MetamorphicGroup>> per_mr) {
  MgDomain out;
  std::set<std::tuple<std::string, std::vector<Point>, std::size_t>> seen;
  std::vector<DomainElement> elements;
  for (const auto& list : per_mr) {
    for (const auto& mg : list) {
      if (!seen.emplace(mg.mr_id, mg.sources, mg.variant).second) {
        throw DuplicateMgError("MG " + format_mg(mg) + " appears twice");
      }
      DomainElement e;
      e.id = ElementId{static_cast<std::uint64_t>(elements.size())};
      e.point = mg.features();
      e.mg_index = out.groups.size();
      e.origin = mg.mr_id;
      elements.push_back(std::move(e));
      out.groups.push_back(mg);
    }
  }
  std::size_t width = 0;
  for (const auto& e : elements) width = std::max(width, e.point.size());
  for (auto& e : elements) e.point.resize(width, 0.0);
  out.domain = SelectionDomain::discrete(DomainKind::kMg, std::move(elements));
  return out;
}

bool check_mr(const Program& program, const MetamorphicRelation& mr,
              const MetamorphicGroup& mg) {
  auto run = [&](const Point& input) {
    try {
      return program(input);
    } catch (const std::exception& e) {
      throw ExecutionError("program failed on " + describe(input) + " (MR " +
                           mr.id + "): " + e.what());
    }
  };
  std::vector<Output> source_out;
  std::vector<Output> followup_out;
  source_out.reserve(mg.sources.size());
  followup_out.reserve(mg.followups.size());
  for (const Point& p : mg.sources) source_out.push_back(run(p));
  for (const Point& p : mg.followups) followup_out.push_back(run(p));
  return !mr.relation_holds(source_out, followup_out);
}

std::string format_mg(const MetamorphicGroup& mg) {
  return mg.mr_id + '\t' + std::to_string(mg.variant) + '\t' +
         format_points(mg.sources) + '\t' + format_points(mg.followups);
}

MetamorphicGroup parse_mg(std::string_view line) {
  auto fields = split(line, '\t');
  if (fields.size() != 4 || fields[0].empty()) {
    throw FormatError("MG line needs 4 tab-separated fields: '" +
                      std::string(line) + "'");
  }
  MetamorphicGroup mg;
  mg.mr_id = std::string(fields[0]);
  mg.variant = static_cast<std::size_t>(parse_number(fields[1]));
  mg.sources = parse_points(fields[2]);
  mg.followups = parse_points(fields[3]);
  return mg;
}

void write_mgs(std::ostream& out, std::span<const MetamorphicGroup> mgs) {
  for (const auto& mg : mgs) out << format_mg(mg) << '\n';
}

std::vector<MetamorphicGroup> read_mgs(std::istream& in) {
  std::vector<MetamorphicGroup> mgs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    mgs.push_back(parse_mg(line));
  }
  return mgs;
}

}  // namespace psalm
