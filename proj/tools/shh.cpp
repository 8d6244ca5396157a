//  Copyright 2026 The shh Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

// shh: generate data, compute exact tables, run one algorithm, or run a
// full threshold-sweep experiment.
//
// Exit status: 0 success, 2 configuration error, 3 runtime error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shh/shh.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, delim)) out.push_back(cur);
  if (!s.empty() && s.back() == delim) out.emplace_back();
  return out;
}

std::vector<std::size_t> parse_indices_1based(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& tok : split(text, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad coordinate list '" + text + "'");
    }
    if (pos != tok.size() || v == 0) throw ConfigError("coordinates are 1-based integers: '" + text + "'");
    out.push_back(v - 1);
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : split(text, ',')) {
    auto dash = tok.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(tok));
      } else {
        std::uint64_t lo = std::stoull(tok.substr(0, dash)), hi = std::stoull(tok.substr(dash + 1));
        if (hi < lo || hi - lo > 100000) throw ConfigError("bad seed range '" + tok + "'");
        for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("bad seed list '" + text + "'");
    }
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split(text, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::logic_error&) {
      throw ConfigError("bad number list '" + text + "'");
    }
  }
  return out;
}

struct InputOptions {
  std::string data;
  std::string delimiter = ",";
  bool header = false;
  std::size_t class_col = 0;  // 1-based, 0 = none

  void add_to(CLI::App* app) {
    app->add_option("--data,-d", data, "Delimited text input")->required();
    app->add_option("--delimiter", delimiter, "Field delimiter (',' default; 'tab' or '\\t' for TSV)");
    app->add_flag("--header", header, "First line is a header");
    app->add_option("--class-col", class_col, "1-based class column");
  }

  shh::Schema schema() const {
    shh::Schema s;
    if (delimiter == "tab" || delimiter == "\\t" || delimiter == "\t") {
      s.delimiter = '\t';
    } else if (delimiter.size() == 1) {
      s.delimiter = delimiter[0];
    } else {
      throw ConfigError("delimiter must be a single character");
    }
    s.has_header = header;
    if (class_col > 0) s.class_col = class_col - 1;
    return s;
  }

  shh::Dataset open() const { return shh::Dataset::open(data, schema()); }
};

std::vector<shh::Subcube> parse_subcubes(const std::vector<std::string>& specs, std::size_t d) {
  std::vector<shh::Subcube> out;
  for (const auto& s : specs) out.push_back(shh::make_subcube(parse_indices_1based(s), d));
  return out;
}

std::vector<std::size_t> one_based(const shh::Subcube& t) {
  std::vector<std::size_t> out;
  for (std::size_t c : t.coords()) out.push_back(c + 1);
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw shh::Error(shh::ErrorCode::kIo, "cannot write " + path);
  out << text;
}

// ----------------------------------------------------------------------- gen

struct GenOptions {
  std::string profile = "paper-synthetic";
  std::uint64_t m = 0;
  std::uint64_t seed = 1;
  std::string fix_class;
  std::string output;
  std::optional<double> skew;
  std::string cardinalities;
  std::size_t classes = 1;
};

int run_gen(const GenOptions& o) {
  std::optional<shh::NBGenerator> g;
  if (o.profile == "paper-synthetic") {
    g = shh::clickstream_profile(o.seed, o.skew.value_or(shh::kClickstreamSkew));
  } else if (o.profile == "custom") {
    if (o.cardinalities.empty()) throw ConfigError("custom profile needs --cardinalities");
    std::vector<std::size_t> cards;
    for (double c : parse_doubles(o.cardinalities)) cards.push_back(static_cast<std::size_t>(c));
    g = shh::make_random_nb(cards, o.classes, o.skew.value_or(1.0), o.seed);
  } else {
    throw ConfigError("unknown profile '" + o.profile + "'");
  }
  std::optional<std::size_t> fix;
  if (!o.fix_class.empty()) {
    if (o.fix_class == "top") {
      fix = g->most_likely_class();
    } else {
      try {
        fix = std::stoul(o.fix_class);
      } catch (const std::logic_error&) {
        throw ConfigError("--fix-class takes a class index or 'top'");
      }
    }
  }
  // Data draws use a stream derived from, but distinct from, the model seed.
  shh::GeneratedData data = shh::sample(*g, o.m, shh::splitmix64(o.seed ^ 0x5eed5eed5eed5eedULL), fix);
  std::ostringstream out;
  shh::write_csv(data, out);
  emit(o.output, out.str());
  return 0;
}

// -------------------------------------------------------------------- oracle

struct OracleOptions {
  InputOptions input;
  std::vector<std::string> subcubes;
  std::string output;
};

nlohmann::json truth_json(const shh::Dataset& ds, const shh::GroundTruth& gt) {
  nlohmann::json j;
  j["subcube"] = one_based(gt.subcube);
  j["m"] = gt.m;
  j["table"] = nlohmann::json::array();
  for (const auto& [v, c] : gt.counts) {
    j["table"].push_back({{"v", ds.decode(gt.subcube, v)},
                          {"f", static_cast<double>(c) / static_cast<double>(gt.m)}});
  }
  return j;
}

int run_oracle(const OracleOptions& o) {
  shh::Dataset ds = o.input.open();
  auto subcubes = parse_subcubes(o.subcubes, ds.d());
  auto tables = shh::exact_tables(ds, subcubes);
  nlohmann::json out;
  if (tables.size() == 1) {
    out = truth_json(ds, tables.front());
  } else {
    out = nlohmann::json::array();
    for (const auto& gt : tables) out.push_back(truth_json(ds, gt));
  }
  emit(o.output, out.dump(1) + "\n");
  return 0;
}

// ----------------------------------------------------------------------- run

struct RunOptions {
  InputOptions input;
  std::string algo;
  std::vector<std::string> subcubes;
  double gamma = 0.0;
  std::optional<double> gamma_star;
  std::optional<std::uint64_t> sample_size;
  std::optional<double> memory_frac;
  std::uint64_t seed = 1;
  std::string value;
  std::string output;
};

const char* score_name(shh::Algorithm a) {
  switch (a) {
    case shh::Algorithm::kSampling: return "frequency";
    case shh::Algorithm::kNaiveBayes: return "score";
    default: return "product";
  }
}

int run_run(const RunOptions& o) {
  shh::Algorithm algo = shh::parse_algorithm(o.algo);
  if (algo == shh::Algorithm::kNaiveBayes && o.input.class_col == 0) {
    throw ConfigError("nb2p needs --class-col");
  }
  shh::HHParams params = o.gamma_star ? shh::HHParams(o.gamma, *o.gamma_star) : shh::HHParams(o.gamma);
  shh::Dataset ds = o.input.open().buffered();
  auto subcubes = parse_subcubes(o.subcubes, ds.d());
  shh::BuildOptions opt;
  opt.memory_frac = o.memory_frac;
  opt.sample_size = o.sample_size;
  opt.seed = o.seed;
  shh::Model model = shh::build_model(algo, ds, params, opt);

  nlohmann::json out;
  out["algo"] = shh::to_string(algo);
  out["gamma"] = params.gamma();
  out["gamma_star"] = params.gamma_star();
  out["m"] = ds.m();
  out["memory_slots"] = model.memory_slots();
  out["seed"] = o.seed;
  out["results"] = nlohmann::json::array();
  if (!o.value.empty()) {
    if (subcubes.size() != 1) throw ConfigError("--value needs exactly one --subcube");
    shh::JointValue v = ds.encode(subcubes[0], split(o.value, ','));
    shh::Verdict verdict = model.query(subcubes[0], v, params.gamma_star());
    out["results"].push_back({{"subcube", one_based(subcubes[0])},
                              {"v", split(o.value, ',')},
                              {score_name(algo), model.estimate(subcubes[0], v)},
                              {"verdict", shh::to_string(verdict)}});
  } else {
    for (const auto& t : subcubes) {
      nlohmann::json list = nlohmann::json::array();
      for (const auto& hh : model.all_query(t, params.gamma_star())) {
        list.push_back({{"v", ds.decode(t, hh.value)}, {score_name(algo), hh.score}, {"verdict", "YES"}});
      }
      out["results"].push_back({{"subcube", one_based(t)}, {"heavy_hitters", list}});
    }
  }
  emit(o.output, out.dump(1) + "\n");
  return 0;
}

// ---------------------------------------------------------------------- eval

struct EvalOptions {
  InputOptions input;
  std::string algos = "sampling,indep2p,cms-heuristic";
  std::vector<std::string> subcubes;
  double gamma = 0.0;
  std::string gamma_stars;
  std::optional<double> memory_frac;
  std::optional<std::uint64_t> sample_size;
  std::string seeds = "1";
  std::size_t top_k = 10;
  std::string cache_dir;
  std::string json_out;
  std::string csv_out;
};

int run_eval(const EvalOptions& o) {
  shh::ExperimentConfig cfg;
  cfg.dataset = o.input.data;
  cfg.schema = o.input.schema();
  for (const auto& a : split(o.algos, ',')) cfg.algorithms.push_back(shh::parse_algorithm(a));
  for (auto a : cfg.algorithms) {
    if (a == shh::Algorithm::kNaiveBayes && !cfg.schema.class_col) throw ConfigError("nb2p needs --class-col");
  }
  cfg.gamma = o.gamma;
  if (!o.gamma_stars.empty()) cfg.gamma_stars = parse_doubles(o.gamma_stars);
  cfg.memory_frac = o.memory_frac;
  cfg.sample_size = o.sample_size;
  cfg.seeds = parse_seeds(o.seeds);
  cfg.top_k = o.top_k;
  if (!o.cache_dir.empty()) cfg.cache_dir = o.cache_dir;

  shh::Dataset ds = shh::Dataset::open(*cfg.dataset, cfg.schema).buffered();
  cfg.subcubes = parse_subcubes(o.subcubes, ds.d());
  shh::HHParams check(cfg.gamma);
  (void)check;
  shh::MetricsReport report = shh::run_experiment(cfg, ds);
  if (!o.csv_out.empty()) emit(o.csv_out, report.to_csv());
  emit(o.json_out, report.to_json().dump(1) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subcube heavy hitters over categorical streams"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic Naive Bayes data as CSV");
  gen_cmd->add_option("--profile", gen.profile, "paper-synthetic | custom");
  gen_cmd->add_option("--m", gen.m, "Number of records")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--fix-class", gen.fix_class, "Emit features conditioned on one class (index or 'top')");
  gen_cmd->add_option("--skew", gen.skew, "Zipf exponent of the class conditionals");
  gen_cmd->add_option("--cardinalities", gen.cardinalities, "custom profile: comma-separated n_j");
  gen_cmd->add_option("--classes", gen.classes, "custom profile: number of classes");
  gen_cmd->add_option("-o,--output", gen.output, "Output file (stdout if omitted)");

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact joint frequency table as JSON");
  oracle.input.add_to(oracle_cmd);
  oracle_cmd->add_option("--subcube", oracle.subcubes, "1-based coordinates, e.g. 1,2,3 (repeatable)")->required();
  oracle_cmd->add_option("-o,--output", oracle.output, "Output file (stdout if omitted)");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Build one algorithm and answer AllQuery / Query");
  run.input.add_to(run_cmd);
  run_cmd->add_option("--algo", run.algo, "sampling | indep2p | nb2p | cms-heuristic")->required();
  run_cmd->add_option("--subcube", run.subcubes, "1-based coordinates (repeatable)")->required();
  run_cmd->add_option("--gamma", run.gamma, "Heavy-hitter ratio")->required();
  run_cmd->add_option("--gamma-star", run.gamma_star, "Decision threshold (default gamma/2)");
  auto* size_opt = run_cmd->add_option("--sample-size", run.sample_size, "Reservoir size for sampling");
  run_cmd->add_option("--memory-frac", run.memory_frac, "Memory budget as a fraction of the dataset")
      ->excludes(size_opt);
  run_cmd->add_option("--seed", run.seed, "Seed");
  run_cmd->add_option("--value", run.value, "Answer Query(T, v) for these comma-separated tokens");
  run_cmd->add_option("-o,--output", run.output, "Output file (stdout if omitted)");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Threshold-sweep experiment scored against exact tables");
  eval.input.add_to(eval_cmd);
  eval_cmd->add_option("--algos", eval.algos, "Comma-separated algorithms");
  eval_cmd->add_option("--subcube", eval.subcubes, "1-based coordinates (repeatable)")->required();
  eval_cmd->add_option("--gamma", eval.gamma, "Heavy-hitter ratio")->required();
  eval_cmd->add_option("--gamma-stars", eval.gamma_stars, "Comma-separated sweep (default: 12 points)");
  eval_cmd->add_option("--memory-frac", eval.memory_frac, "Memory budget as a fraction of the dataset");
  eval_cmd->add_option("--sample-size", eval.sample_size, "Reservoir size when no memory budget is given");
  eval_cmd->add_option("--seeds", eval.seeds, "Seeds, e.g. 1-10 or 1,5,9");
  eval_cmd->add_option("--top-k", eval.top_k, "Heavy hitters used for error metrics");
  eval_cmd->add_option("--cache-dir", eval.cache_dir, "Directory for cached exact tables");
  eval_cmd->add_option("--json", eval.json_out, "JSON report (stdout if omitted)");
  eval_cmd->add_option("--csv", eval.csv_out, "Flat CSV of detection rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*oracle_cmd) return run_oracle(oracle);
    if (*run_cmd) return run_run(run);
    if (*eval_cmd) return run_eval(eval);
  } catch (const ConfigError& e) {
    std::cerr << "shh: " << e.what() << "\n";
    return kExitConfig;
  } catch (const shh::Error& e) {
    std::cerr << "shh: " << e.what() << "\n";
    return e.is_config_error() ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "shh: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
