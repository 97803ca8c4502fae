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

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "psalm/csv.hpp"
#include "psalm/error.hpp"
#include "psalm/experiment.hpp"

namespace psalm {
namespace {

// Runs fn(i) for i in [0, count) on `jobs` threads. The first exception is
// rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t j = 0; j < jobs; ++j) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count && !stop; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            stop = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

bool any_hit(const Selection& sel, const std::vector<bool>& hit) {
  for (std::size_t p : sel.positions) {
    if (hit[p]) return true;
  }
  return false;
}

bool multi_source_hit(const PreparedSubject& prepared, const FaultMap& faults,
                      const Selection& sel, Rng& rng) {
  if (prepared.multi_source_mrs.empty()) return false;
  std::vector<Point> points;
  points.reserve(sel.positions.size());
  for (std::size_t p : sel.positions) points.push_back(prepared.source_domain.element(p).point);
  for (const auto& mr : prepared.multi_source_mrs) {
    for (const auto& mg : construct_mgs(mr, points, PairingPolicy::kShuffleSequential, rng)) {
      if (check_mr(faults.program, mr, mg)) return true;
    }
  }
  return false;
}

Selection select_at(const PreparedSubject& prepared, Strategy strategy, Level level,
                    std::size_t n, Rng& rng, std::size_t art_k) {
  if (level == Level::kSt) {
    switch (strategy) {
      case Strategy::kRs: return select_rs(prepared.source_domain, n, rng);
      case Strategy::kPsalm: return select_psalm(*prepared.source_scheme, n, rng);
      case Strategy::kArt: return select_art(prepared.source_domain, n, rng, art_k);
      case Strategy::kMtArt:
        throw DomainKindError("mt-art selects metamorphic groups, not source inputs");
    }
  }
  if (!prepared.mg) throw DomainKindError("subject has no MG domain");
  switch (strategy) {
    case Strategy::kRs: return select_rs(prepared.mg->domain, n, rng);
    case Strategy::kPsalm: return select_psalm(*prepared.mg_scheme, n, rng);
    case Strategy::kMtArt: return select_mt_art(prepared.mg->domain, n, rng, art_k);
    case Strategy::kArt: break;
  }
  throw DomainKindError("art selects source inputs; use mt-art for MGs");
}

std::string fmt_shortest(double v) { return format_number(v); }

}  // namespace

MgSchemeKind parse_mg_scheme(std::string_view id) {
  if (id == "by-source-subdomain") return MgSchemeKind::kBySourceSubdomain;
  if (id == "by-mr") return MgSchemeKind::kByMr;
  throw ConfigError("unknown MG scheme '" + std::string(id) + "'");
}

std::string_view mg_scheme_id(MgSchemeKind kind) {
  return kind == MgSchemeKind::kByMr ? "by-mr" : "by-source-subdomain";
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (selection_multiplier < 1) throw ConfigError("selection_multiplier must be at least 1");
  if (art_k < 1) throw ConfigError("art_k must be at least 1");
  if (subjects.empty()) throw ConfigError("no subjects configured");
  if (strategies.empty()) throw ConfigError("no strategies configured");
  if (levels.empty()) throw ConfigError("no levels configured");
  for (const auto& s : strategies) {
    try {
      parse_strategy(s);
    } catch (const UnknownStrategyError& e) {
      throw ConfigError(e.what());
    }
  }
}

std::size_t PreparedSubject::budget(Level level, std::size_t multiplier) const {
  if (level == Level::kMg) return multiplier * mg_scheme->k();
  const std::size_t n = multiplier * source_scheme->k();
  return (n + arity_lcm - 1) / arity_lcm * arity_lcm;
}

PreparedSubject prepare_subject(const SubjectProgram& subject, std::span<const Box> scheme,
                                MgSchemeKind mg_scheme, std::uint64_t pairing_seed) {
  PreparedSubject out{.subject_id = subject.id, .source_domain = subject.source_domain()};
  out.source_scheme = partition_by_boxes(
      out.source_domain, scheme.empty() ? std::span<const Box>(subject.default_scheme) : scheme);

  const auto elements = out.source_domain.elements();
  std::vector<Point> points;
  std::map<Point, std::size_t> position;
  for (std::size_t p = 0; p < elements.size(); ++p) {
    points.push_back(elements[p].point);
    position.emplace(elements[p].point, p);
  }

  std::vector<std::vector<MetamorphicGroup>> per_mr;
  for (const auto& mr : subject.mrs) {
    Rng rng(derive_seed(pairing_seed, {subject.id, mr.id}));
    if (mr.source_arity == 1) {
      out.single_source_mrs.push_back(mr);
      per_mr.push_back(construct_mgs(mr, points, PairingPolicy::kInOrder, rng));
      continue;
    }
    out.multi_source_mrs.push_back(mr);
    out.arity_lcm = std::lcm(out.arity_lcm, mr.source_arity);
    std::vector<Point> pool = points;
    rng.shuffle(std::span<Point>(pool));
    pool.resize(pool.size() / mr.source_arity * mr.source_arity);
    per_mr.push_back(construct_mgs(mr, pool, PairingPolicy::kShuffleSequential, rng));
  }
  out.mg = build_mg_domain(per_mr);

  std::vector<std::size_t> labels;
  labels.reserve(out.mg->groups.size());
  std::map<std::string, std::size_t> mr_index;
  for (std::size_t i = 0; i < subject.mrs.size(); ++i) mr_index[subject.mrs[i].id] = i;
  for (const auto& g : out.mg->groups) {
    if (mg_scheme == MgSchemeKind::kByMr) {
      labels.push_back(mr_index.at(g.mr_id));
    } else {
      labels.push_back(out.source_scheme->subdomain_of(position.at(g.sources.front())));
    }
  }
  out.mg_scheme = partition_by_labels(out.mg->domain, labels);
  return out;
}

FaultMap map_faults(const PreparedSubject& prepared, const Program& program) {
  FaultMap faults;
  faults.program = program;
  faults.source_hit.assign(prepared.source_domain.elements().size(), false);
  std::map<Point, std::size_t> position;
  const auto elements = prepared.source_domain.elements();
  for (std::size_t p = 0; p < elements.size(); ++p) position.emplace(elements[p].point, p);

  std::map<std::string, const MetamorphicRelation*> by_id;
  for (const auto& mr : prepared.single_source_mrs) by_id[mr.id] = &mr;
  for (const auto& mr : prepared.multi_source_mrs) by_id[mr.id] = &mr;

  const auto& groups = prepared.mg->groups;
  faults.mg_hit.assign(groups.size(), false);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const MetamorphicRelation& mr = *by_id.at(groups[g].mr_id);
    const bool hit = check_mr(program, mr, groups[g]);
    faults.mg_hit[g] = hit;
    if (hit && mr.source_arity == 1) faults.source_hit[position.at(groups[g].sources[0])] = true;
  }
  return faults;
}

bool runs_at(Strategy strategy, Level level) {
  switch (strategy) {
    case Strategy::kRs:
    case Strategy::kPsalm: return true;
    case Strategy::kArt: return level == Level::kSt;
    case Strategy::kMtArt: return level == Level::kMg;
  }
  return false;
}

double estimate_p_measure(const PreparedSubject& prepared, const FaultMap& faults,
                          Strategy strategy, Level level, std::size_t n,
                          std::size_t iterations, Rng& rng, std::size_t art_k) {
  if (iterations == 0) throw DomainError("iterations must be positive");
  std::size_t detections = 0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const Selection sel = select_at(prepared, strategy, level, n, rng, art_k);
    bool hit;
    if (level == Level::kSt) {
      hit = any_hit(sel, faults.source_hit) || multi_source_hit(prepared, faults, sel, rng);
    } else {
      hit = any_hit(sel, faults.mg_hit);
    }
    if (hit) ++detections;
  }
  return static_cast<double>(detections) / static_cast<double>(iterations);
}

double estimate_p_measure(const SubjectProgram& subject,
                          std::optional<std::string_view> mutant_id, Strategy strategy,
                          Level level, std::size_t n, std::size_t iterations, Rng& rng,
                          std::size_t art_k) {
  const Program program = subject.program(mutant_id);
  const PreparedSubject prepared =
      prepare_subject(subject, {}, MgSchemeKind::kBySourceSubdomain, rng.next());
  const FaultMap faults = map_faults(prepared, program);
  return estimate_p_measure(prepared, faults, strategy, level, n, iterations, rng, art_k);
}

std::string CategorizationTable::file_name() const {
  return "categorization_" + level + "_" + strategy_a + "_vs_" + strategy_b + ".csv";
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const SubjectRegistry& registry, std::size_t jobs) {
  config.validate();
  std::vector<Strategy> strategies;
  for (const auto& s : config.strategies) strategies.push_back(parse_strategy(s));

  struct SubjectPlan {
    const SubjectProgram* subject;
    const SubjectSpec* spec;
    std::vector<const Mutant*> mutants;
  };
  std::vector<SubjectPlan> plans;
  std::vector<bool> filter_used(config.mutants.size(), false);
  for (const auto& spec : config.subjects) {
    SubjectPlan plan{&registry.get(spec.id), &spec, {}};
    for (const auto& m : plan.subject->mutants) {
      bool keep = config.mutants.empty();
      for (std::size_t f = 0; f < config.mutants.size(); ++f) {
        const std::string& entry = config.mutants[f];
        if (entry == m.id || entry == spec.id + ":" + m.id) {
          keep = true;
          filter_used[f] = true;
        }
      }
      if (keep) plan.mutants.push_back(&m);
    }
    plans.push_back(std::move(plan));
  }
  for (std::size_t f = 0; f < config.mutants.size(); ++f) {
    if (!filter_used[f]) throw UnknownIdError("unknown mutant '" + config.mutants[f] + "'");
  }

  std::vector<PreparedSubject> prepared;
  for (const auto& plan : plans) {
    prepared.push_back(prepare_subject(*plan.subject, plan.spec->scheme, config.mg_scheme,
                                       derive_seed(config.master_seed,
                                                   {plan.subject->id, "pairing"})));
  }

  struct MutantRef {
    std::size_t plan;
    const Mutant* mutant;
  };
  std::vector<MutantRef> mutant_refs;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    for (const Mutant* m : plans[p].mutants) mutant_refs.push_back({p, m});
  }
  std::vector<FaultMap> faults(mutant_refs.size());
  parallel_for(mutant_refs.size(), jobs, [&](std::size_t i) {
    faults[i] = map_faults(prepared[mutant_refs[i].plan], mutant_refs[i].mutant->mutated_fn);
  });

  ExperimentResult result;
  struct Cell {
    std::size_t mutant_ref;
    Strategy strategy;
    Level level;
    std::size_t n;
  };
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    for (Level level : config.levels) {
      const std::size_t k = level == Level::kSt ? prepared[p].source_scheme->k()
                                                : prepared[p].mg_scheme->k();
      const std::size_t domain_size = level == Level::kSt
                                          ? prepared[p].source_domain.elements().size()
                                          : prepared[p].mg->groups.size();
      result.design.push_back({plans[p].subject->id, level, k,
                               config.selection_multiplier * k,
                               prepared[p].budget(level, config.selection_multiplier),
                               domain_size});
    }
  }
  for (std::size_t r = 0; r < mutant_refs.size(); ++r) {
    const PreparedSubject& prep = prepared[mutant_refs[r].plan];
    for (Level level : config.levels) {
      for (Strategy s : strategies) {
        if (!runs_at(s, level)) continue;
        cells.push_back({r, s, level, prep.budget(level, config.selection_multiplier)});
      }
    }
  }

  result.trials.resize(cells.size() * config.trials);
  parallel_for(result.trials.size(), jobs, [&](std::size_t idx) {
    const Cell& cell = cells[idx / config.trials];
    const std::size_t trial = idx % config.trials;
    const MutantRef& ref = mutant_refs[cell.mutant_ref];
    const std::string& subject_id = plans[ref.plan].subject->id;
    Rng rng(derive_seed(config.master_seed,
                        {subject_id, ref.mutant->id, strategy_id(cell.strategy),
                         level_id(cell.level)},
                        trial));
    TrialResult& out = result.trials[idx];
    out.subject = subject_id;
    out.mutant = ref.mutant->id;
    out.strategy = std::string(strategy_id(cell.strategy));
    out.level = cell.level;
    out.trial = trial;
    out.p_estimate = estimate_p_measure(prepared[ref.plan], faults[cell.mutant_ref],
                                        cell.strategy, cell.level, cell.n,
                                        config.iterations, rng, config.art_k);
  });
  summarize(result);
  return result;
}

void summarize(ExperimentResult& result, double alpha) {
  result.summary.clear();
  result.categorization.clear();
  // samples[subject][level][strategy][mutant] -> per-trial estimates.
  using TrialSeries = std::vector<double>;
  std::vector<std::string> subjects;
  std::map<std::string, std::map<Level, std::map<std::string, std::map<std::string, TrialSeries>>>>
      samples;
  std::map<std::string, std::vector<std::string>> mutant_order;
  for (const auto& t : result.trials) {
    if (!samples.contains(t.subject)) subjects.push_back(t.subject);
    auto& series = samples[t.subject][t.level][t.strategy][t.mutant];
    auto& order = mutant_order[t.subject];
    if (std::find(order.begin(), order.end(), t.mutant) == order.end()) {
      order.push_back(t.mutant);
    }
    if (series.size() <= t.trial) series.resize(t.trial + 1, 0.0);
    series[t.trial] = t.p_estimate;
  }

  auto trial_means = [&](const std::vector<std::string>& subject_ids, Level level,
                         const std::string& strategy) {
    std::vector<double> sums;
    std::size_t count = 0;
    for (const auto& s : subject_ids) {
      const auto& by_mutant = samples[s][level][strategy];
      for (const auto& m : mutant_order[s]) {
        auto it = by_mutant.find(m);
        if (it == by_mutant.end()) continue;
        if (sums.size() < it->second.size()) sums.resize(it->second.size(), 0.0);
        for (std::size_t i = 0; i < it->second.size(); ++i) sums[i] += it->second[i];
        ++count;
      }
    }
    for (double& v : sums) v /= static_cast<double>(count);
    return sums;
  };
  auto compare_series = [](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() >= 2 && b.size() >= 2) return compare(a, b);
    ComparisonSummary s;
    s.mean_a = mean(a);
    s.mean_b = mean(b);
    if (s.mean_b != 0) s.improvement_pct = improvement_pct(s.mean_a, s.mean_b);
    s.a12 = vargha_delaney_a12(a, b);
    return s;
  };
  auto has = [&](const std::string& s, Level level, const std::string& strategy) {
    auto it = samples[s].find(level);
    return it != samples[s].end() && it->second.contains(strategy);
  };

  struct Comparison {
    std::string level;
    Level level_a;
    Level level_b;
    std::string a;
    std::string b;
  };
  std::vector<Comparison> comparisons;
  for (Level level : {Level::kSt, Level::kMg}) {
    for (const char* b : {"rs", "art", "mt-art"}) {
      bool present = false;
      for (const auto& s : subjects) present = present || (has(s, level, "psalm") && has(s, level, b));
      if (present) comparisons.push_back({std::string(level_id(level)), level, level, "psalm", b});
    }
  }
  {
    bool present = false;
    for (const auto& s : subjects) {
      present = present || (has(s, Level::kMg, "psalm") && has(s, Level::kSt, "psalm"));
    }
    if (present) comparisons.push_back({"mg-vs-st", Level::kMg, Level::kSt, "psalm", "psalm"});
  }

  for (const auto& c : comparisons) {
    CategorizationTable table{c.level, c.a, c.b, {}};
    CategoryCounts all;
    std::vector<std::string> included;
    for (const auto& s : subjects) {
      if (!has(s, c.level_a, c.a) || !has(s, c.level_b, c.b)) continue;
      included.push_back(s);
      result.summary.push_back({s, c.level, c.a, c.b,
                                compare_series(trial_means({s}, c.level_a, c.a),
                                               trial_means({s}, c.level_b, c.b))});
      std::vector<ComparisonSummary> per_mutant;
      const auto& a_map = samples[s][c.level_a][c.a];
      const auto& b_map = samples[s][c.level_b][c.b];
      for (const auto& m : mutant_order[s]) {
        auto ia = a_map.find(m);
        auto ib = b_map.find(m);
        if (ia == a_map.end() || ib == b_map.end()) continue;
        per_mutant.push_back(compare_series(ia->second, ib->second));
      }
      const CategoryCounts counts = categorize_mutants(per_mutant, alpha);
      all += counts;
      table.rows.push_back({s, counts});
    }
    if (included.size() > 1) {
      result.summary.push_back({"ALL", c.level, c.a, c.b,
                                compare_series(trial_means(included, c.level_a, c.a),
                                               trial_means(included, c.level_b, c.b))});
    }
    table.rows.push_back({"ALL", all});
    result.categorization.push_back(std::move(table));
  }
}

void write_raw_csv(std::ostream& out, const ExperimentResult& result) {
  out << "subject,mutant,strategy,level,trial,p\n";
  for (const auto& t : result.trials) {
    out << csv_field(t.subject) << ',' << csv_field(t.mutant) << ',' << t.strategy << ','
        << level_id(t.level) << ',' << t.trial << ',' << fmt_shortest(t.p_estimate) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  out << "subject,level,strategy_a,strategy_b,mean_a,mean_b,improvement_pct,p_value,a12\n";
  for (const auto& r : result.summary) {
    const auto& s = r.summary;
    out << csv_field(r.subject) << ',' << r.level << ',' << r.strategy_a << ','
        << r.strategy_b << ',' << format_fixed(s.mean_a, 4) << ','
        << format_fixed(s.mean_b, 4) << ','
        << (s.improvement_pct ? format_fixed(*s.improvement_pct, 2) : std::string("-"))
        << ',' << (s.p_value ? format_general(*s.p_value, 4) : std::string("-")) << ','
        << format_fixed(s.a12, 3) << '\n';
  }
}

void write_categorization_csv(std::ostream& out, const CategorizationTable& table) {
  out << "subject,better,nodiff,worse,total_mutants\n";
  for (const auto& r : table.rows) {
    out << csv_field(r.subject) << ',' << r.counts.better << ',' << r.counts.no_difference
        << ',' << r.counts.worse << ',' << r.counts.total() << '\n';
  }
}

void write_design_csv(std::ostream& out, const ExperimentResult& result) {
  out << "subject,level,k,n,n_effective,domain_size\n";
  for (const auto& d : result.design) {
    out << csv_field(d.subject) << ',' << level_id(d.level) << ',' << d.k << ',' << d.n
        << ',' << d.n_effective << ',' << d.domain_size << '\n';
  }
}

std::vector<std::filesystem::path> write_results(const std::filesystem::path& dir,
                                                 const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, auto&& writer) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + path.string());
    writer(out);
    written.push_back(path);
  };
  emit("raw.csv", [&](std::ostream& o) { write_raw_csv(o, result); });
  emit("summary.csv", [&](std::ostream& o) { write_summary_csv(o, result); });
  if (!result.design.empty()) {
    emit("design.csv", [&](std::ostream& o) { write_design_csv(o, result); });
  }
  for (const auto& table : result.categorization) {
    emit(table.file_name(), [&](std::ostream& o) { write_categorization_csv(o, table); });
  }
  return written;
}

std::vector<TrialResult> read_raw_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "subject,mutant,strategy,level,trial,p") {
    throw FormatError("raw CSV header expected");
  }
  std::vector<TrialResult> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 6) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 6 fields");
    }
    TrialResult t;
    t.subject = fields[0];
    t.mutant = fields[1];
    t.strategy = fields[2];
    try {
      t.level = parse_level(fields[3]);
    } catch (const DomainError&) {
      throw FormatError("line " + std::to_string(line_no) + ": bad level");
    }
    t.trial = static_cast<std::size_t>(parse_uint(fields[4], line_no));
    t.p_estimate = parse_real(fields[5], line_no);
    if (!(t.p_estimate >= 0 && t.p_estimate <= 1)) {
      throw FormatError("line " + std::to_string(line_no) + ": p outside [0, 1]");
    }
    rows.push_back(std::move(t));
  }
  return rows;
}

}  // namespace psalm
