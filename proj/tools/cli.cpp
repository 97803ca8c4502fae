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

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "psalm/allocation.hpp"
#include "psalm/config.hpp"
#include "psalm/csv.hpp"
#include "psalm/error.hpp"
#include "psalm/experiment.hpp"
#include "psalm/oracle.hpp"
#include "psalm/subjects.hpp"

namespace psalm::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<double> sizes;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string subject;
  std::string mutant;
  std::string strategy;
  std::string level = "st";
  std::string mg_scheme = "by-source-subdomain";
  std::size_t art_k = kDefaultCandidateSetSize;
  std::size_t iterations = 1000;
  std::string config_path;
  std::size_t jobs = 1;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> config_iterations;
  int prop = 0;
  std::size_t instances = 10000;
  std::string table;
  std::string raw_path;
};

// Writes to --out when given, else to `out`.
void emit(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (o.out_path.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file) throw DomainError("cannot write " + o.out_path);
  fn(file);
}

std::string join_point(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ';';
    s += format_number(p[i]);
  }
  return s;
}

std::uint64_t seed_of(const Options& o) {
  if (!o.seed) throw UsageError("--seed is required");
  return *o.seed;
}

void add_seed(CLI::App* cmd, Options& o, const std::string& what) {
  cmd->add_option("--seed", o.seed, what)->required();
}

void add_out(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out_path, "Write to this file instead of standard output");
}

void run_allocate(const Options& o, std::ostream& out) {
  Rng rng(seed_of(o));
  const Allocation a = bma_mt(o.sizes, *o.n, rng);
  emit(o, out, [&](std::ostream& s) {
    for (std::size_t i = 0; i < a.counts.size(); ++i) s << (i ? "," : "") << a.counts[i];
    s << '\n';
  });
}

void run_select(const Options& o, std::ostream& out) {
  const std::uint64_t seed = seed_of(o);
  const SubjectProgram& subject = register_subjects().get(o.subject);
  const Strategy strategy = parse_strategy(o.strategy);
  const Level level = parse_level(o.level);
  const PreparedSubject prep = prepare_subject(subject, {}, parse_mg_scheme(o.mg_scheme),
                                               derive_seed(seed, {subject.id, "pairing"}));
  const std::size_t n = o.n.value_or(prep.budget(level, 3));
  Rng rng(seed);
  const PartitionScheme& scheme = level == Level::kSt ? *prep.source_scheme : *prep.mg_scheme;
  Selection sel;
  if (strategy == Strategy::kPsalm) {
    sel = select_psalm(scheme, n, rng);
  } else if (strategy == Strategy::kRs) {
    sel = select_rs(scheme.domain(), n, rng);
  } else if (strategy == Strategy::kArt && level == Level::kSt) {
    sel = select_art(scheme.domain(), n, rng, o.art_k);
  } else if (strategy == Strategy::kMtArt) {
    sel = select_mt_art(scheme.domain(), n, rng, o.art_k);
  } else {
    throw DomainKindError("art selects source inputs; use mt-art for MGs");
  }
  emit(o, out, [&](std::ostream& s) {
    s << (level == Level::kSt ? "unit,subdomain,input\n" : "unit,subdomain,mg\n");
    for (std::size_t i = 0; i < sel.positions.size(); ++i) {
      const std::size_t pos = sel.positions[i];
      s << i + 1 << ',' << scheme.subdomain_of(pos) + 1 << ',';
      if (level == Level::kSt) {
        s << join_point(scheme.domain().element(pos).point) << '\n';
      } else {
        s << csv_field(format_mg(prep.mg->groups[pos])) << '\n';
      }
    }
  });
}

void run_estimate(const Options& o, std::ostream& out) {
  const std::uint64_t seed = seed_of(o);
  const SubjectProgram& subject = register_subjects().get(o.subject);
  const Strategy strategy = parse_strategy(o.strategy);
  const Level level = parse_level(o.level);
  const Program program =
      subject.program(o.mutant.empty() ? std::nullopt : std::optional<std::string_view>(o.mutant));
  const PreparedSubject prep = prepare_subject(subject, {}, parse_mg_scheme(o.mg_scheme),
                                               derive_seed(seed, {subject.id, "pairing"}));
  const FaultMap faults = map_faults(prep, program);
  const std::size_t n = o.n.value_or(prep.budget(level, 3));
  Rng rng(seed);
  const double p =
      estimate_p_measure(prep, faults, strategy, level, n, o.iterations, rng, o.art_k);
  emit(o, out, [&](std::ostream& s) { s << format_number(p) << '\n'; });
}

void run_experiment_cmd(const Options& o, std::ostream& out) {
  ExperimentConfig config = load_config(o.config_path);
  config.master_seed = seed_of(o);
  if (o.trials) config.trials = *o.trials;
  if (o.config_iterations) config.iterations = *o.config_iterations;
  const ExperimentResult result = run_experiment(config, register_subjects(), o.jobs);
  if (!o.out_path.empty()) write_results(o.out_path, result);
  write_summary_csv(out, result);
}

void run_report(const Options& o, std::ostream& out) {
  std::ifstream in(o.raw_path);
  if (!in) throw DomainError("cannot read " + o.raw_path);
  ExperimentResult result;
  result.trials = read_raw_csv(in);
  summarize(result);
  if (!o.out_path.empty()) {
    std::filesystem::create_directories(o.out_path);
    std::ofstream s(std::filesystem::path(o.out_path) / "summary.csv", std::ios::binary);
    write_summary_csv(s, result);
    for (const auto& t : result.categorization) {
      std::ofstream c(std::filesystem::path(o.out_path) / t.file_name(), std::ios::binary);
      write_categorization_csv(c, t);
    }
  }
  write_summary_csv(out, result);
}

CaseTable parse_table(const std::string& id) {
  if (id == "prop4") return CaseTable::kProp4;
  if (id == "prop5") return CaseTable::kProp5;
  throw UsageError("--table must be prop4 or prop5");
}

void print_cases(std::ostream& s, const std::vector<CaseRow>& rows) {
  s << "case,p_st,p_mg,relation\n";
  for (const auto& r : rows) {
    s << r.index << ',' << format_fixed(r.p_st, 3) << ',' << format_fixed(r.p_mg, 3) << ','
      << r.relation << '\n';
  }
}

// Returns the number of failures.
std::size_t run_verify(const Options& o, std::ostream& out) {
  if (o.prop >= 4) {
    const CaseTable table = o.prop == 4 ? CaseTable::kProp4 : CaseTable::kProp5;
    const auto rows = reproduce_cases(table);
    const auto cells = table_cells(table);
    std::size_t pass = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) pass += matches_cell(rows[i], cells[i]);
    emit(o, out, [&](std::ostream& s) {
      s << "pass=" << pass << " fail=" << rows.size() - pass << '\n';
      print_cases(s, rows);
    });
    return rows.size() - pass;
  }
  const VerificationReport report =
      verify_proposition(o.prop, o.instances, seed_of(o), o.jobs);
  emit(o, out, [&](std::ostream& s) {
    s << "pass=" << report.pass << " fail=" << report.fail << '\n';
    if (o.prop != 3) {
      s << "bma_mt_below=" << report.integer_allocation_below
        << " max_gap=" << format_general(report.max_integer_gap, 6) << '\n';
    }
    for (const auto& w : report.witnesses) s << "witness: " << w << '\n';
  });
  return report.fail;
}

void run_list(const Options& o, std::ostream& out) {
  emit(o, out, [&](std::ostream& s) {
    s << "subject,inputs,mutants,mrs,k,description\n";
    for (const auto& subj : register_subjects().all()) {
      s << subj.id << ',' << subj.inputs.size() << ',' << subj.mutants.size() << ','
        << subj.mrs.size() << ',' << subj.default_scheme.size() << ','
        << csv_field(subj.description) << '\n';
    }
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partition-based selection of source test cases and metamorphic groups",
               "psalm"};
  app.require_subcommand(1);
  Options o;

  auto* allocate = app.add_subcommand("allocate", "Allocate n units over subdomains (BMA-MT)");
  allocate->add_option("--sizes", o.sizes, "Subdomain sizes, comma separated")
      ->required()
      ->delimiter(',');
  allocate->add_option("--n", o.n, "Total number of units")->required();
  add_seed(allocate, o, "Seed for random tie breaking");
  add_out(allocate, o);

  auto* select = app.add_subcommand("select", "Select source test cases or MGs of a subject");
  select->add_option("--subject", o.subject, "Subject id")->required();
  select->add_option("--strategy", o.strategy, "rs, psalm, art or mt-art")->required();
  select->add_option("--level", o.level, "st or mg")->capture_default_str();
  select->add_option("--n", o.n, "Number of units (default 3k)");
  select->add_option("--mg-scheme", o.mg_scheme, "by-source-subdomain or by-mr")
      ->capture_default_str();
  select->add_option("--art-k", o.art_k, "ART candidate set size")->capture_default_str();
  add_seed(select, o, "Seed of the selection stream");
  add_out(select, o);

  auto* estimate = app.add_subcommand("estimate", "Monte Carlo P-measure of one cell");
  estimate->add_option("--subject", o.subject, "Subject id")->required();
  estimate->add_option("--mutant", o.mutant, "Mutant id (default: the reference)");
  estimate->add_option("--strategy", o.strategy, "rs, psalm, art or mt-art")->required();
  estimate->add_option("--level", o.level, "st or mg")->capture_default_str();
  estimate->add_option("--n", o.n, "Units per selection (default 3k)");
  estimate->add_option("--iterations", o.iterations, "Selections to run")
      ->capture_default_str();
  estimate->add_option("--mg-scheme", o.mg_scheme, "by-source-subdomain or by-mr")
      ->capture_default_str();
  estimate->add_option("--art-k", o.art_k, "ART candidate set size")->capture_default_str();
  add_seed(estimate, o, "Seed of the estimation stream");
  add_out(estimate, o);

  auto* experiment = app.add_subcommand("experiment", "Run the full comparison protocol");
  experiment->add_option("--config", o.config_path, "JSON experiment config")->required();
  add_seed(experiment, o, "Master seed (overrides the config)");
  experiment->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
  experiment->add_option("--trials", o.trials, "Override the configured trial count");
  experiment->add_option("--iterations", o.config_iterations,
                         "Override the configured iteration count");
  experiment->add_option("--out", o.out_path, "Directory for the CSV outputs");

  auto* verify = app.add_subcommand("verify", "Check propositions on random or fixed instances");
  verify->add_option("--prop", o.prop, "Proposition 1-5")
      ->required()
      ->check(CLI::Range(1, 5));
  verify->add_option("--instances", o.instances, "Random instances (props 1-3)")
      ->capture_default_str();
  verify->add_option("--seed", o.seed, "Seed (required for props 1-3)");
  verify->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
  add_out(verify, o);

  auto* cases = app.add_subcommand("reproduce-cases", "Recompute the hand-built cases");
  cases->add_option("--table", o.table, "prop4 or prop5")->required();
  add_out(cases, o);

  auto* list = app.add_subcommand("list-subjects", "List registered subjects");
  add_out(list, o);

  auto* report = app.add_subcommand("report", "Summarize a raw results CSV");
  report->add_option("--raw", o.raw_path, "raw.csv from an experiment run")->required();
  report->add_option("--out", o.out_path, "Directory for summary and categorization CSVs");

  std::vector<std::string> storage;
  storage.emplace_back("psalm");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*allocate) {
      run_allocate(o, out);
    } else if (*select) {
      run_select(o, out);
    } else if (*estimate) {
      run_estimate(o, out);
    } else if (*experiment) {
      run_experiment_cmd(o, out);
    } else if (*verify) {
      if (o.prop <= 3) seed_of(o);
      if (const std::size_t failed = run_verify(o, out); failed > 0) {
        err << "error: VerificationFailure: " << failed << " instance(s) failed\n";
        return kExitDomainError;
      }
    } else if (*cases) {
      const auto rows = reproduce_cases(parse_table(o.table));
      emit(o, out, [&](std::ostream& s) { print_cases(s, rows); });
    } else if (*list) {
      run_list(o, out);
    } else if (*report) {
      run_report(o, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace psalm::cli
