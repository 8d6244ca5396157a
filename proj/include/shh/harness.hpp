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

// Experiment orchestration: build every algorithm under a shared memory
// budget, sweep the decision threshold, and score against exact tables.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "shh/core.hpp"
#include "shh/heuristic.hpp"
#include "shh/independence.hpp"
#include "shh/naive_bayes.hpp"
#include "shh/oracle.hpp"
#include "shh/sampling.hpp"
#include "shh/stream_io.hpp"

namespace shh {

enum class Algorithm { kSampling, kIndependence, kNaiveBayes, kHeuristic };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kSampling: return "sampling";
    case Algorithm::kIndependence: return "indep2p";
    case Algorithm::kNaiveBayes: return "nb2p";
    case Algorithm::kHeuristic: return "cms-heuristic";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "sampling") return Algorithm::kSampling;
  if (name == "indep2p") return Algorithm::kIndependence;
  if (name == "nb2p") return Algorithm::kNaiveBayes;
  if (name == "cms-heuristic") return Algorithm::kHeuristic;
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + name + "'");
}

// ---------------------------------------------------------------- metrics

struct Detection {
  std::size_t tp = 0;
  std::size_t fp = 0;
  friend bool operator==(const Detection&, const Detection&) = default;
};

/// TP = |reported & {f >= gamma}|, FP = |reported \ {f >= gamma}|.
inline Detection compute_detection_metrics(const std::vector<JointValue>& reported, const GroundTruth& truth,
                                           const HHParams& p) {
  Detection d;
  std::set<JointValue> unique(reported.begin(), reported.end());
  for (const JointValue& v : unique) {
    if (truth.frequency(v) >= p.gamma()) {
      ++d.tp;
    } else {
      ++d.fp;
    }
  }
  return d;
}

inline Detection compute_detection_metrics(const std::vector<HeavyHitter>& reported, const GroundTruth& truth,
                                           const HHParams& p) {
  std::vector<JointValue> values;
  values.reserve(reported.size());
  for (const auto& h : reported) values.push_back(h.value);
  return compute_detection_metrics(values, truth, p);
}

struct ErrorMetrics {
  double mse = 0.0;
  double mae = 0.0;
  double mape = 0.0;
};

/// Errors over the `top_k` most frequent true values. A value without an
/// estimate counts as estimated 0.
inline ErrorMetrics compute_error_metrics(const std::map<JointValue, double>& estimates, const GroundTruth& truth,
                                          std::size_t top_k = 10) {
  if (truth.counts.empty()) throw Error(ErrorCode::kEmpty, "ground truth has no values");
  auto top = truth.top(top_k);
  ErrorMetrics e;
  for (const auto& [v, c] : top) {
    double f = static_cast<double>(c) / static_cast<double>(truth.m);
    auto it = estimates.find(v);
    double est = it == estimates.end() ? 0.0 : it->second;
    double err = est - f;
    e.mse += err * err;
    e.mae += std::abs(err);
    e.mape += std::abs(err) / f;
  }
  const double n = static_cast<double>(top.size());
  e.mse /= n;
  e.mae /= n;
  e.mape /= n;
  return e;
}

struct RocPoint {
  double gamma_star = 0.0;
  double tp = 0.0;
  double fp = 0.0;
};

/// Area under a threshold-sweep curve with y = TP / truth_size and
/// x = FP / fp_scale. The curve is anchored at (0, 0) and held flat from its
/// last point to x = 1.
inline double roc_auc(std::vector<RocPoint> points, double truth_size, double fp_scale) {
  if (truth_size <= 0.0) return 0.0;
  if (fp_scale <= 0.0) fp_scale = 1.0;
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fp != b.fp ? a.fp < b.fp : a.tp < b.tp;
  });
  double area = 0.0, x = 0.0, y = 0.0;
  for (const auto& pt : points) {
    double nx = std::min(1.0, pt.fp / fp_scale);
    double ny = std::min(1.0, pt.tp / truth_size);
    ny = std::max(ny, y);  // envelope: a larger FP budget never loses TP
    area += (nx - x) * (y + ny) / 2.0;
    x = nx;
    y = ny;
  }
  area += (1.0 - x) * y;
  return area;
}

/// 12 log-spaced thresholds spanning [gamma / 4, 2 * gamma].
inline std::vector<double> default_gamma_star_sweep(double gamma, std::size_t points = 12) {
  std::vector<double> out;
  const double lo = std::log(gamma / 4.0), hi = std::log(2.0 * gamma);
  for (std::size_t i = 0; i < points; ++i) {
    double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back(std::exp(lo + t * (hi - lo)));
  }
  out.front() = gamma / 4.0;
  out.back() = 2.0 * gamma;
  return out;
}

// ----------------------------------------------------------------- models

struct BuildOptions {
  /// Fraction of the dataset size (m * d value-code slots) the model may use.
  std::optional<double> memory_frac;
  /// Explicit reservoir size for the sampling algorithm.
  std::optional<std::uint64_t> sample_size;
  std::uint64_t seed = 1;
};

/// Any of the four algorithms behind one query surface.
class Model {
 public:
  using Variant = std::variant<SampleModel, IndepModel, NBModel, HeuristicModel>;

  Model(Algorithm algo, Variant v, std::uint64_t memory_slots)
      : algo_(algo), model_(std::move(v)), memory_slots_(memory_slots) {}

  Algorithm algorithm() const noexcept { return algo_; }
  std::uint64_t memory_slots() const noexcept { return memory_slots_; }
  const Variant& variant() const noexcept { return model_; }

  std::vector<HeavyHitter> all_query(const Subcube& t, double threshold) const {
    return std::visit([&](const auto& m) { return m.all_query(t, threshold); }, model_);
  }

  Verdict query(const Subcube& t, const JointValue& v, double threshold) const {
    return std::visit([&](const auto& m) { return m.query(t, v, threshold); }, model_);
  }

  double estimate(const Subcube& t, const JointValue& v) const {
    return std::visit(
        [&](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, SampleModel>) {
            return m.frequency(t, v);
          } else {
            return m.estimate(t, v);
          }
        },
        model_);
  }

 private:
  Algorithm algo_;
  Variant model_;
  std::uint64_t memory_slots_;
};

/// Memory budget in value-code slots: memory_frac * m * d.
inline std::uint64_t memory_budget_slots(double memory_frac, Count m, std::size_t d) {
  return static_cast<std::uint64_t>(std::floor(memory_frac * static_cast<double>(m) * static_cast<double>(d)));
}

/// Builds `algo` over `ds`. `params` must carry the smallest decision
/// threshold the model will be queried with (the retention threshold of the
/// two-pass models follows it). Raises BudgetTooSmall when the accounted
/// memory would exceed the budget.
inline Model build_model(Algorithm algo, const Dataset& ds, const HHParams& params, const BuildOptions& opt) {
  const std::size_t d = ds.d();
  std::optional<std::uint64_t> budget;
  if (opt.memory_frac) {
    if (!(*opt.memory_frac > 0.0)) throw Error(ErrorCode::kInvalidParams, "memory fraction must be > 0");
    budget = memory_budget_slots(*opt.memory_frac, ds.m(), d);
  }
  auto enforce = [&](std::uint64_t used) {
    if (budget && used > *budget) {
      throw Error(ErrorCode::kBudgetTooSmall, "model needs " + std::to_string(used) + " slots, budget is " +
                                                  std::to_string(*budget));
    }
  };
  switch (algo) {
    case Algorithm::kSampling: {
      std::uint64_t m_prime = 0;
      if (opt.sample_size) {
        m_prime = *opt.sample_size;
      } else if (budget) {
        m_prime = *budget / d;
      } else {
        m_prime = required_sample_size(params, d, d, *std::max_element(ds.cardinalities().begin(),
                                                                         ds.cardinalities().end()));
      }
      SampleModel model = build_sample(ds, m_prime, opt.seed, params);
      std::uint64_t used = model.memory_slots(d);
      enforce(used);
      return Model(algo, std::move(model), used);
    }
    case Algorithm::kIndependence:
    case Algorithm::kNaiveBayes: {
      std::optional<std::size_t> max_counters;
      if (budget) max_counters = static_cast<std::size_t>(*budget / d);
      std::size_t counters = pass1_budget(params, max_counters);
      std::uint64_t used = two_pass_memory_slots(d, counters);
      enforce(used);
      if (algo == Algorithm::kIndependence) {
        return Model(algo, build_independence(ds, params, max_counters), used);
      }
      return Model(algo, build_naive_bayes(ds, params, max_counters), used);
    }
    case Algorithm::kHeuristic: {
      std::uint64_t cells = budget ? *budget : static_cast<std::uint64_t>(d) * 4 * candidate_budget(params.lambda());
      HeuristicModel model = heuristic_build(ds, cells, params, opt.seed);
      std::uint64_t used = model.memory_slots();
      enforce(used);
      return Model(algo, std::move(model), used);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm");
}

// ------------------------------------------------------------ oracle cache

namespace detail {

inline std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Content hash of the dataset file and schema; stable across runs.
inline std::string dataset_fingerprint(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    h = detail::fnv1a(h, buf, static_cast<std::size_t>(in.gcount()));
  }
  std::string tag = std::string(1, schema.delimiter) + (schema.has_header ? "H" : "-") +
                    (schema.class_col ? std::to_string(*schema.class_col) : "none");
  h = detail::fnv1a(h, tag.data(), tag.size());
  return detail::hex64(h);
}

/// Exact tables, read from / written to `cache_dir` when both it and the
/// dataset path are available. Entries are keyed by dataset fingerprint and
/// subcube.
inline std::vector<GroundTruth> cached_exact_tables(const Dataset& ds, const std::vector<Subcube>& subcubes,
                                                    const std::optional<std::filesystem::path>& cache_dir) {
  auto path = ds.path();
  if (!cache_dir || !path) return exact_tables(ds, subcubes);
  std::filesystem::create_directories(*cache_dir);
  const std::string fp = dataset_fingerprint(*path, ds.schema());
  std::vector<GroundTruth> out(subcubes.size());
  std::vector<Subcube> missing;
  std::vector<std::size_t> missing_at;
  auto file_for = [&](const Subcube& t) {
    return *cache_dir / ("oracle-" + fp + "-" + t.to_string_1based() + ".json");
  };
  for (std::size_t s = 0; s < subcubes.size(); ++s) {
    std::ifstream in(file_for(subcubes[s]));
    if (!in) {
      missing.push_back(subcubes[s]);
      missing_at.push_back(s);
      continue;
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("m") || !j.contains("counts")) {
      missing.push_back(subcubes[s]);
      missing_at.push_back(s);
      continue;
    }
    out[s].subcube = subcubes[s];
    out[s].m = j["m"].get<Count>();
    for (const auto& row : j["counts"]) {
      JointValue v(row[0].get<std::vector<Code>>());
      out[s].counts.emplace(std::move(v), row[1].get<Count>());
    }
  }
  if (!missing.empty()) {
    auto computed = exact_tables(ds, missing);
    for (std::size_t i = 0; i < missing.size(); ++i) {
      nlohmann::json j;
      j["m"] = computed[i].m;
      j["counts"] = nlohmann::json::array();
      for (const auto& [v, c] : computed[i].counts) j["counts"].push_back({v.values, c});
      std::ofstream(file_for(missing[i])) << j.dump();
      out[missing_at[i]] = std::move(computed[i]);
    }
  }
  return out;
}

// ------------------------------------------------------------- experiment

struct ExperimentConfig {
  std::optional<std::filesystem::path> dataset;
  Schema schema;
  std::vector<Algorithm> algorithms;
  std::vector<Subcube> subcubes;
  double gamma = 0.01;
  /// Empty means the default sweep.
  std::vector<double> gamma_stars;
  std::optional<double> memory_frac;
  std::optional<std::uint64_t> sample_size;
  std::vector<std::uint64_t> seeds = {1};
  std::size_t top_k = 10;
  std::optional<std::filesystem::path> cache_dir;
};

struct DetectionRow {
  Algorithm algo;
  std::size_t subcube;  // index into config subcubes
  double gamma_star;
  std::uint64_t seed;
  std::size_t tp;
  std::size_t fp;
  std::size_t reported;
};

struct ErrorRow {
  Algorithm algo;
  std::size_t subcube;
  std::uint64_t seed;
  ErrorMetrics metrics;
};

struct RocRow {
  Algorithm algo;
  std::size_t subcube;
  RocPoint point;
};

struct AucRow {
  Algorithm algo;
  std::size_t subcube;
  double auc;
};

struct SubcubeTruth {
  Subcube subcube;
  std::size_t heavy_hitters = 0;
  std::size_t observed = 0;
};

struct MetricsReport {
  std::vector<std::string> subcube_labels;
  std::vector<SubcubeTruth> truth;
  std::vector<DetectionRow> detection;
  std::vector<ErrorRow> errors;
  std::vector<RocRow> roc;
  std::vector<AucRow> auc;
  std::map<std::string, std::uint64_t> memory_slots;  // per algorithm, max over seeds
  std::uint64_t memory_budget = 0;
  Count m = 0;

  double mean_auc(Algorithm a) const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : auc) {
      if (r.algo == a) {
        sum += r.auc;
        ++n;
      }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
  }

  /// Seed-averaged FP at `gamma_star`, summed over subcubes.
  double mean_fp_at(Algorithm a, double gamma_star) const {
    double sum = 0.0;
    for (const auto& r : roc) {
      if (r.algo == a && r.point.gamma_star == gamma_star) sum += r.point.fp;
    }
    return sum;
  }

  /// MAE averaged over seeds and subcubes.
  double mean_mae(Algorithm a) const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : errors) {
      if (r.algo == a) {
        sum += r.metrics.mae;
        ++n;
      }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
  }

  nlohmann::json to_json() const {
    using nlohmann::json;
    json j;
    j["m"] = m;
    j["memory_budget"] = memory_budget;
    j["memory_slots"] = memory_slots;
    auto coords = [&](std::size_t s) {
      std::vector<std::size_t> c;
      for (std::size_t x : truth[s].subcube.coords()) c.push_back(x + 1);
      return c;
    };
    j["truth"] = json::array();
    for (std::size_t s = 0; s < truth.size(); ++s) {
      j["truth"].push_back(
          {{"subcube", coords(s)}, {"heavy_hitters", truth[s].heavy_hitters}, {"observed", truth[s].observed}});
    }
    j["detection"] = json::array();
    for (const auto& r : detection) {
      j["detection"].push_back({{"algo", to_string(r.algo)},
                                {"subcube", coords(r.subcube)},
                                {"gamma_star", r.gamma_star},
                                {"seed", r.seed},
                                {"tp", r.tp},
                                {"fp", r.fp},
                                {"reported", r.reported}});
    }
    j["errors"] = json::array();
    for (const auto& r : errors) {
      j["errors"].push_back({{"algo", to_string(r.algo)},
                             {"subcube", coords(r.subcube)},
                             {"seed", r.seed},
                             {"mse", r.metrics.mse},
                             {"mae", r.metrics.mae},
                             {"mape", r.metrics.mape}});
    }
    j["roc"] = json::array();
    for (const auto& r : roc) {
      j["roc"].push_back({{"algo", to_string(r.algo)},
                          {"subcube", coords(r.subcube)},
                          {"gamma_star", r.point.gamma_star},
                          {"tp", r.point.tp},
                          {"fp", r.point.fp}});
    }
    j["auc"] = json::array();
    for (const auto& r : auc) {
      j["auc"].push_back({{"algo", to_string(r.algo)}, {"subcube", coords(r.subcube)}, {"auc", r.auc}});
    }
    return j;
  }

  /// algo,subcube,gamma_star,seed,tp,fp,reported -- subcubes as 1-based
  /// indices joined by '-'.
  std::string to_csv() const {
    std::ostringstream out;
    out << "algo,subcube,gamma_star,seed,tp,fp,reported\n";
    for (const auto& r : detection) {
      std::string label = truth[r.subcube].subcube.to_string_1based();
      std::replace(label.begin(), label.end(), ',', '-');
      out << to_string(r.algo) << ',' << label << ',' << detail::format_double(r.gamma_star) << ',' << r.seed
          << ',' << r.tp << ',' << r.fp << ',' << r.reported << '\n';
    }
    return out.str();
  }
};

inline MetricsReport run_experiment(const ExperimentConfig& cfg, const Dataset& ds) {
  if (cfg.algorithms.empty()) throw Error(ErrorCode::kInvalidArgument, "no algorithm selected");
  if (cfg.subcubes.empty()) throw Error(ErrorCode::kInvalidArgument, "no subcube selected");
  if (cfg.seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "no seed given");
  for (const auto& t : cfg.subcubes) {
    if (t.max_coord() >= ds.d()) throw Error(ErrorCode::kIndexOutOfRange, "subcube exceeds dataset d");
  }
  const HHParams base(cfg.gamma);
  std::vector<double> sweep = cfg.gamma_stars.empty() ? default_gamma_star_sweep(cfg.gamma) : cfg.gamma_stars;
  for (double g : sweep) {
    if (!(g > 0.0)) throw Error(ErrorCode::kInvalidParams, "gamma_star must be positive");
  }
  const double lowest = *std::min_element(sweep.begin(), sweep.end());
  const HHParams build_params = base.with_gamma_star(lowest);

  MetricsReport report;
  report.m = ds.m();
  if (cfg.memory_frac) report.memory_budget = memory_budget_slots(*cfg.memory_frac, ds.m(), ds.d());
  std::vector<GroundTruth> truth = cached_exact_tables(ds, cfg.subcubes, cfg.cache_dir);
  for (std::size_t s = 0; s < truth.size(); ++s) {
    report.truth.push_back({cfg.subcubes[s], truth[s].at_least(cfg.gamma).size(), truth[s].counts.size()});
  }

  BuildOptions opt;
  opt.memory_frac = cfg.memory_frac;
  opt.sample_size = cfg.sample_size;
  for (std::uint64_t seed : cfg.seeds) {
    opt.seed = seed;
    for (Algorithm algo : cfg.algorithms) {
      Model model = build_model(algo, ds, build_params, opt);
      auto& mem = report.memory_slots[to_string(algo)];
      mem = std::max(mem, model.memory_slots());
      for (std::size_t s = 0; s < cfg.subcubes.size(); ++s) {
        const Subcube& t = cfg.subcubes[s];
        for (double g : sweep) {
          auto reported = model.all_query(t, g);
          Detection det = compute_detection_metrics(reported, truth[s], base);
          report.detection.push_back({algo, s, g, seed, det.tp, det.fp, reported.size()});
        }
        if (!truth[s].counts.empty()) {
          std::map<JointValue, double> estimates;
          for (const auto& [v, c] : truth[s].top(cfg.top_k)) estimates[v] = model.estimate(t, v);
          report.errors.push_back({algo, s, seed, compute_error_metrics(estimates, truth[s], cfg.top_k)});
        }
      }
    }
  }

  // Seed-averaged ROC points and per-subcube AUC on a shared FP axis.
  const double nseeds = static_cast<double>(cfg.seeds.size());
  for (std::size_t s = 0; s < cfg.subcubes.size(); ++s) {
    std::map<Algorithm, std::vector<RocPoint>> curves;
    double fp_scale = 0.0;
    for (Algorithm algo : cfg.algorithms) {
      for (double g : sweep) {
        RocPoint pt{g, 0.0, 0.0};
        for (const auto& r : report.detection) {
          if (r.algo == algo && r.subcube == s && r.gamma_star == g) {
            pt.tp += static_cast<double>(r.tp) / nseeds;
            pt.fp += static_cast<double>(r.fp) / nseeds;
          }
        }
        fp_scale = std::max(fp_scale, pt.fp);
        curves[algo].push_back(pt);
        report.roc.push_back({algo, s, pt});
      }
    }
    for (Algorithm algo : cfg.algorithms) {
      double auc = roc_auc(curves[algo], static_cast<double>(report.truth[s].heavy_hitters), fp_scale);
      report.auc.push_back({algo, s, auc});
    }
  }
  return report;
}

inline MetricsReport run_experiment(const ExperimentConfig& cfg) {
  if (!cfg.dataset) throw Error(ErrorCode::kInvalidArgument, "no dataset path");
  Dataset file = Dataset::open(*cfg.dataset, cfg.schema);
  Dataset ds = file.buffered();
  return run_experiment(cfg, ds);
}

}  // namespace shh
