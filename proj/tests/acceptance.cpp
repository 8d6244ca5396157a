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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Reference values come from the
// brute-force helpers in test_util.hpp, never from the library under test.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shh/shh.hpp"
#include "test_util.hpp"

namespace {

using namespace shh;

struct Outcome {
  bool pass;
  std::string detail;
};

// ------------------------------------------------------------ corpus (1, 2)

struct CorpusEntry {
  std::vector<Item> items;
  std::vector<Code> classes;
  std::size_t ell;
  double gamma;
  std::vector<std::size_t> order;  // coordinates in random order
};

std::vector<CorpusEntry> make_corpus() {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<std::size_t> dim(1, 5), rows(1, 20000), classes(1, 4);
  std::uniform_real_distribution<double> gam(0.02, 0.3);
  std::vector<CorpusEntry> corpus;
  for (int i = 0; i < 200; ++i) {
    CorpusEntry e;
    const std::size_t d = dim(rng);
    e.items = testing::random_items(rng, d, 12, rows(rng));
    e.gamma = gam(rng);
    e.ell = classes(rng);
    // Classes loosely tied to the first coordinate so conditionals differ.
    std::uniform_int_distribution<Code> noise(0, static_cast<Code>(e.ell - 1));
    for (const Item& it : e.items) {
      e.classes.push_back(rng() % 3 == 0 ? noise(rng) : it.values[0] % static_cast<Code>(e.ell));
    }
    e.order.resize(d);
    std::iota(e.order.begin(), e.order.end(), std::size_t{0});
    std::shuffle(e.order.begin(), e.order.end(), rng);
    corpus.push_back(std::move(e));
  }
  return corpus;
}

std::set<JointValue> values_of(const std::vector<HeavyHitter>& hh) {
  std::set<JointValue> out;
  for (const auto& h : hh) out.insert(h.value);
  return out;
}

std::vector<std::vector<Code>> observed_supports(const std::vector<std::map<Code, Count>>& marg,
                                                 const std::vector<std::size_t>& coords) {
  std::vector<std::vector<Code>> out;
  for (std::size_t c : coords) {
    std::vector<Code> s;
    for (const auto& [x, n] : marg[c]) s.push_back(x);
    out.push_back(std::move(s));
  }
  return out;
}

Outcome oracle_equivalence(const std::vector<CorpusEntry>& corpus) {
  std::size_t checked = 0, violations = 0;
  for (const auto& e : corpus) {
    const std::size_t d = e.order.size();
    Dataset ds = Dataset::from_items(e.items);
    HHParams p(e.gamma);
    IndepModel model = build_independence(ds, p);
    auto marg = testing::marginal_counts(e.items);
    const double m = static_cast<double>(e.items.size());
    for (std::size_t k = 1; k <= d; ++k) {
      std::vector<std::size_t> tc(e.order.begin(), e.order.begin() + static_cast<long>(k));
      Subcube t = make_subcube(tc, d);
      for (const auto& v : testing::cartesian(observed_supports(marg, tc))) {
        double prod = 1.0;
        for (std::size_t j = 0; j < k; ++j) prod *= static_cast<double>(marg[tc[j]].at(v[j])) / m;
        bool expected = prod >= p.lambda();
        ++checked;
        violations += (model.query(t, JointValue(v)) == Verdict::kYes) != expected;
      }
    }
  }
  return {violations == 0, std::to_string(checked) + " queries, " + std::to_string(violations) + " mismatches"};
}

Outcome all_query_brute_force(const std::vector<CorpusEntry>& corpus) {
  std::size_t indep_bad = 0, nb_bad = 0, queries = 0;
  for (const auto& e : corpus) {
    const std::size_t d = e.order.size();
    const double m = static_cast<double>(e.items.size());
    HHParams p(e.gamma);
    IndepModel indep = build_independence(Dataset::from_items(e.items), p);
    NBModel nb = build_naive_bayes(Dataset::from_items(e.items, e.classes), p);
    auto marg = testing::marginal_counts(e.items);

    std::vector<Count> nz(e.ell, 0);
    std::vector<std::map<std::pair<Code, Code>, Count>> nxz(d);
    for (std::size_t r = 0; r < e.items.size(); ++r) {
      ++nz[e.classes[r]];
      for (std::size_t i = 0; i < d; ++i) ++nxz[i][{e.items[r].values[i], e.classes[r]}];
    }
    // Values whose exact marginal reaches lambda.
    std::vector<std::vector<Code>> heavy(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (const auto& [x, n] : marg[i]) {
        if (static_cast<double>(n) / m >= p.lambda()) heavy[i].push_back(x);
      }
    }

    for (std::size_t k = 1; k <= d; ++k) {
      std::vector<std::size_t> tc(e.order.begin(), e.order.begin() + static_cast<long>(k));
      Subcube t = make_subcube(tc, d);
      std::vector<std::vector<Code>> lists;
      for (std::size_t c : tc) lists.push_back(heavy[c]);

      std::set<JointValue> indep_brute, nb_brute;
      for (const auto& v : testing::cartesian(observed_supports(marg, tc))) {
        double prod = 1.0;
        for (std::size_t j = 0; j < k; ++j) prod *= static_cast<double>(marg[tc[j]].at(v[j])) / m;
        if (prod >= p.lambda()) indep_brute.insert(JointValue(v));
      }
      for (const auto& v : testing::cartesian(lists)) {
        std::vector<double> products(e.ell, 1.0);
        for (std::size_t j = 0; j < k; ++j) {
          for (std::size_t z = 0; z < e.ell; ++z) {
            auto it = nxz[tc[j]].find({v[j], static_cast<Code>(z)});
            Count c = it == nxz[tc[j]].end() ? 0 : it->second;
            products[z] *= nz[z] == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(nz[z]);
          }
        }
        double q = 0.0;
        for (std::size_t z = 0; z < e.ell; ++z) q += static_cast<double>(nz[z]) / m * products[z];
        if (q >= p.lambda()) nb_brute.insert(JointValue(v));
      }
      ++queries;
      indep_bad += values_of(indep.all_query(t)) != indep_brute;
      nb_bad += values_of(nb.all_query(t)) != nb_brute;
    }
  }
  return {indep_bad == 0 && nb_bad == 0, std::to_string(queries) + " subcubes, indep mismatches " +
                                             std::to_string(indep_bad) + ", nb mismatches " +
                                             std::to_string(nb_bad)};
}

// -------------------------------------------------------- sampling (3)

Outcome sampling_guarantee() {
  const std::size_t d = 6, n = 50;
  const Count m = 100000;
  const HHParams p(0.01);
  // One class: coordinates are independent, each with a skewed law.
  NBGenerator g = make_random_nb(std::vector<std::size_t>(d, n), 1, 1.2, 77);
  Dataset ds = Dataset::from_items(sample(g, m, 78).items);
  std::vector<Subcube> subcubes = {make_subcube({0, 1, 2}, d), make_subcube({3, 4}, d), make_subcube({5, 1}, d)};
  const std::uint64_t m_prime = required_sample_size(p, d, 3, n);

  std::vector<GroundTruth> truth = exact_tables(ds, subcubes);
  std::size_t clean = 0, yes_values = 0, inconsistent = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SampleModel model = build_sample(ds, m_prime, seed, p);
    std::size_t violations = 0;
    for (std::size_t s = 0; s < subcubes.size(); ++s) {
      const Subcube& t = subcubes[s];
      std::vector<std::vector<Code>> domain;
      for (std::size_t c : t.coords()) {
        std::vector<Code> all(ds.cardinalities()[c]);
        std::iota(all.begin(), all.end(), Code{0});
        domain.push_back(std::move(all));
      }
      // One grouping pass gives every YES verdict; single queries are
      // spot-checked against it.
      std::set<JointValue> yes = values_of(model.all_query(t));
      std::size_t index = 0;
      for (const auto& v : testing::cartesian(domain)) {
        JointValue jv(v);
        TruthLabel label = truth_label(truth[s].frequency(jv), p);
        Verdict verdict = yes.count(jv) ? Verdict::kYes : Verdict::kNo;
        if ((label == TruthLabel::kMustYes || index++ % 997 == 0) && model.query(t, jv) != verdict) {
          ++inconsistent;
        }
        if (seed == 1) yes_values += label == TruthLabel::kMustYes;
        if (label == TruthLabel::kMustYes && verdict != Verdict::kYes) ++violations;
        if (label == TruthLabel::kMustNo && verdict != Verdict::kNo) ++violations;
      }
    }
    clean += violations == 0;
  }
  return {clean >= 18 && inconsistent == 0, std::to_string(clean) + "/20 clean seeds (need >= 18), m' = " +
                                              std::to_string(m_prime) + ", " + std::to_string(yes_values) +
                                              " MUST_YES values, " + std::to_string(inconsistent) +
                                              " query/all-query disagreements"};
}

// --------------------------------------------------- candidate promise (4)

Outcome candidate_promise() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> lam(0.01, 0.5);
  std::uniform_int_distribution<std::size_t> len(200, 8000);
  std::size_t violations = 0, streams = 0;
  for (int s = 0; s < 500; ++s) {
    const double lambda = lam(rng);
    std::vector<Code> xs;
    if (s % 2 == 0) {
      xs = testing::adversarial_stream(rng, s / 2, lambda, len(rng));
    } else {
      for (const Item& it : testing::random_items(rng, 1, 40, len(rng), 1.0 + (s % 5))) xs.push_back(it.values[0]);
    }
    std::vector<Item> items;
    for (Code x : xs) items.push_back(Item{x});
    CandidateSets c = indep_pass1(Dataset::from_items(items), HHParams(2 * lambda));
    std::map<Code, Count> truth;
    for (Code x : xs) ++truth[x];
    for (const auto& [x, n] : truth) {
      double f = static_cast<double>(n) / static_cast<double>(xs.size());
      if (f >= lambda / 2 && !c.contains(0, x)) ++violations;
      if (f < lambda / 4 && c.contains(0, x)) ++violations;
    }
    ++streams;
  }
  return {violations == 0, std::to_string(streams) + " streams, " + std::to_string(violations) + " violations"};
}

// ------------------------------------------------------- sketch bounds (5)

Outcome sketch_bounds() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> len(1, 300), width(1, 16);
  std::uniform_int_distribution<Code> domain(1, 30);
  std::size_t mg_bad = 0, cms_bad = 0;
  for (int s = 0; s < 1000; ++s) {
    const std::size_t budget = std::size_t{1} << (s % 4);
    const Code n = domain(rng);
    std::uniform_int_distribution<Code> draw(0, n - 1);
    const std::size_t length = len(rng);
    MisraGries<Code> mg(budget);
    CountMin cms(width(rng), 1 + s % 4, static_cast<std::uint64_t>(s));
    std::vector<Count> truth(n, 0);
    Count processed = 0;
    for (std::size_t r = 0; r < length; ++r) {
      Code x = draw(rng);
      mg.update(x);
      cms.update(x);
      ++truth[x];
      ++processed;
      for (Code y = 0; y < n; ++y) {
        Count est = mg.estimate(y);
        // true - processed / budget <= est <= true, scaled by budget.
        if (est > truth[y] || est * budget + processed < truth[y] * budget) ++mg_bad;
        if (cms.point_query(y) < truth[y]) ++cms_bad;
      }
    }
  }

  const std::size_t depth = 4, w = 32;
  std::size_t queries = 0, over = 0;
  for (int s = 0; s < 200; ++s) {
    std::uniform_int_distribution<Code> draw(0, 499);
    CountMin cms(w, depth, 1000 + static_cast<std::uint64_t>(s));
    std::vector<Count> truth(500, 0);
    for (int r = 0; r < 2000; ++r) {
      Code x = draw(rng);
      cms.update(x);
      ++truth[x];
    }
    for (Code y = 0; y < 500; ++y) {
      ++queries;
      over += static_cast<double>(cms.point_query(y) - truth[y]) > 2.0 / w * 2000.0;
    }
  }
  const double rate = static_cast<double>(over) / static_cast<double>(queries);
  const double limit = std::pow(2.0, -static_cast<double>(depth) + 1);
  std::ostringstream detail;
  detail << "MG violations " << mg_bad << ", CMS violations " << cms_bad << ", overshoot rate " << rate
         << " (limit " << limit << ")";
  return {mg_bad == 0 && cms_bad == 0 && rate <= limit, detail.str()};
}

// ------------------------------------------------- NB identities (6)

Outcome nb_identities(const std::vector<CorpusEntry>& corpus) {
  std::size_t bad_identity = 0, bad_single = 0, stored = 0;
  for (const auto& e : corpus) {
    const std::size_t d = e.order.size();
    HHParams p(e.gamma);
    NBModel nb = build_naive_bayes(Dataset::from_items(e.items, e.classes), p);
    bad_identity += !nb.verify_identities();

    // sum_z (n_z / m)(n_xz / n_z) = n_x / m, as integers after clearing m.
    std::vector<Count> nz(e.ell, 0);
    std::vector<std::map<Code, std::vector<Count>>> nxz(d);
    for (std::size_t r = 0; r < e.items.size(); ++r) {
      ++nz[e.classes[r]];
      for (std::size_t i = 0; i < d; ++i) {
        auto& row = nxz[i][e.items[r].values[i]];
        row.resize(e.ell, 0);
        ++row[e.classes[r]];
      }
    }
    const Count m = e.items.size();
    for (std::size_t i = 0; i < d; ++i) {
      for (const auto& [x, row] : nxz[i]) {
        if (!nb.marginal(i, x)) continue;
        ++stored;
        Count numerator = 0;
        for (std::size_t z = 0; z < e.ell; ++z) {
          if (nz[z] > 0) numerator += row[z];
          double expected = nz[z] == 0 ? 0.0 : static_cast<double>(row[z]) / static_cast<double>(nz[z]);
          if (*nb.conditional(i, x, z) != expected) ++bad_identity;
        }
        Count nx = std::accumulate(row.begin(), row.end(), Count{0});
        if (numerator != nx) ++bad_identity;
        if (*nb.marginal(i, x) != static_cast<double>(nx) / static_cast<double>(m)) ++bad_identity;
      }
    }

    // One class: identical outputs to the independence model.
    NBModel single = build_naive_bayes(Dataset::from_items(e.items, std::vector<Code>(e.items.size(), 0)), p);
    IndepModel indep = build_independence(Dataset::from_items(e.items), p);
    for (std::size_t k = 1; k <= d; ++k) {
      Subcube t = make_subcube(std::vector<std::size_t>(e.order.begin(), e.order.begin() + static_cast<long>(k)), d);
      auto a = single.all_query(t);
      auto b = indep.all_query(t);
      if (a.size() != b.size()) {
        ++bad_single;
        continue;
      }
      for (std::size_t r = 0; r < a.size(); ++r) {
        if (a[r].value != b[r].value || a[r].score != b[r].score) ++bad_single;
      }
    }
  }
  return {bad_identity == 0 && bad_single == 0, std::to_string(stored) + " stored values, identity failures " +
                                                    std::to_string(bad_identity) + ", single-class mismatches " +
                                                    std::to_string(bad_single)};
}

// ------------------------------------------------------- level sizes (7)

Outcome level_sizes() {
  std::size_t checked = 0, violations = 0, skipped = 0, levels = 0;
  const std::vector<double> gammas = {0.05, 0.1, 0.2};
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::vector<std::size_t> cards = {8, 12, 6, 10, 5};
    const std::size_t d = cards.size();
    const std::vector<Subcube> subcubes = {make_subcube({0, 1}, d), make_subcube({2, 3, 4}, d),
                                           make_subcube({0, 1, 2, 3, 4}, d)};
    NBGenerator indep_gen = make_random_nb(cards, 1, 1.5, seed);
    NBGenerator nb_gen = make_random_nb(cards, 3, 1.5, seed + 100);
    Dataset indep_ds = Dataset::from_items(sample(indep_gen, 80000, seed + 7).items);
    GeneratedData nb_data = sample(nb_gen, 80000, seed + 8);
    Dataset nb_ds = Dataset::from_items(nb_data.items, nb_data.classes);
    for (double gamma : gammas) {
      HHParams p(gamma);
      const auto bound = static_cast<std::size_t>(std::ceil(5.0 / (4.0 * p.lambda())));
      IndepModel indep = build_independence(indep_ds, p);
      NBModel nb = build_naive_bayes(nb_ds, p);
      for (const Subcube& t : subcubes) {
        if (empirical_alpha_independence(indep_ds, t) <= p.lambda() / 5) {
          ++checked;
          for (const auto& w : indep.all_query_levels(t, p.gamma_star())) {
            ++levels;
            violations += w.entries.size() > bound;
          }
        } else {
          ++skipped;
        }
        if (empirical_alpha_nb(nb_ds, t) <= p.lambda() / 5) {
          ++checked;
          for (const auto& w : nb.all_query_levels(t, p.gamma_star())) {
            ++levels;
            violations += w.entries.size() > bound;
          }
        } else {
          ++skipped;
        }
      }
    }
  }
  return {violations == 0 && checked > 0, std::to_string(checked) + " verified (model, subcube) pairs, " +
                                              std::to_string(levels) + " levels, " + std::to_string(violations) +
                                              " violations, " + std::to_string(skipped) + " skipped"};
}

// ------------------------------------------------ clickstream-like data (8, 9)

Dataset clickstream_data() {
  NBGenerator g = clickstream_profile(1);
  GeneratedData data = sample(g, 135000, splitmix64(1 ^ 0x5eed5eed5eed5eedULL), g.most_likely_class());
  return Dataset::from_items(std::move(data.items));
}

ExperimentConfig clickstream_config() {
  ExperimentConfig cfg;
  const std::size_t d = clickstream_cardinalities().size();
  cfg.subcubes = {make_subcube({0, 1}, d), make_subcube({0, 4}, d), make_subcube({2, 3}, d)};
  cfg.gamma = 0.002;
  cfg.seeds.resize(10);
  std::iota(cfg.seeds.begin(), cfg.seeds.end(), std::uint64_t{1});
  return cfg;
}

Outcome roc_dominance(const Dataset& ds) {
  ExperimentConfig cfg = clickstream_config();
  cfg.algorithms = {Algorithm::kSampling, Algorithm::kIndependence, Algorithm::kHeuristic};
  cfg.memory_frac = 0.02;
  MetricsReport r = run_experiment(cfg, ds);
  const double lowest = default_gamma_star_sweep(cfg.gamma).front();
  const double auc_s = r.mean_auc(Algorithm::kSampling);
  const double auc_i = r.mean_auc(Algorithm::kIndependence);
  const double fp_i = r.mean_fp_at(Algorithm::kIndependence, lowest);
  const double fp_h = r.mean_fp_at(Algorithm::kHeuristic, lowest);
  std::ostringstream detail;
  detail << "AUC two-pass " << auc_i << " vs sampling " << auc_s << "; FP at lowest gamma* two-pass " << fp_i
         << " vs heuristic " << fp_h;
  return {auc_i >= auc_s && fp_i <= fp_h, detail.str()};
}

Outcome mae_trend(const Dataset& ds) {
  std::ostringstream detail;
  bool pass = true;
  for (double frac : {0.001, 0.002, 0.005, 0.01}) {
    ExperimentConfig cfg = clickstream_config();
    cfg.algorithms = {Algorithm::kSampling, Algorithm::kHeuristic};
    cfg.memory_frac = frac;
    cfg.gamma_stars = {cfg.gamma / 2};
    MetricsReport r = run_experiment(cfg, ds);
    const double h = r.mean_mae(Algorithm::kHeuristic);
    const double s = r.mean_mae(Algorithm::kSampling);
    pass = pass && h <= s;
    detail << (frac == 0.001 ? "" : "; ") << frac * 100 << "%: heuristic " << h << " vs sampling " << s;
  }
  return {pass, detail.str()};
}

// ------------------------------------------------------- determinism (10)

int run_cli(const std::string& args) {
  std::string cmd = std::string(SHH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome cli_determinism() {
  const auto dir = testing::temp_dir() / "acceptance";
  std::filesystem::create_directories(dir);
  const std::string data = (dir / "data.csv").string();
  const std::string nb = (dir / "nb.csv").string();
  std::vector<std::string> commands = {
      "gen --m 20000 --seed 9 --fix-class top -o ",
      "gen --profile custom --cardinalities 30,20,10 --classes 3 --m 5000 --seed 2 -o ",
      "oracle -d " + data + " --subcube 1,2 --subcube 3 -o ",
      "run -d " + data + " --algo sampling --memory-frac 0.02 --gamma 0.01 --subcube 1,5 --seed 3 -o ",
      "run -d " + data + " --algo indep2p --gamma 0.01 --subcube 1,5 -o ",
      "run -d " + nb + " --class-col 1 --algo nb2p --gamma 0.02 --subcube 1,2 -o ",
      "run -d " + data + " --algo cms-heuristic --memory-frac 0.02 --gamma 0.01 --subcube 1,5 --seed 3 -o ",
      "eval -d " + data + " --subcube 1,2 --subcube 4,5 --gamma 0.01 --memory-frac 0.02 --seeds 1-3 --csv " +
          (dir / "eval.csv").string() + " --json ",
  };
  std::size_t identical = 0, failed = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      auto out = dir / ("out" + std::to_string(c) + "_" + std::to_string(rep));
      std::string target = c == 0 ? data : c == 1 ? nb : out.string();
      if (run_cli(commands[c] + target) != 0) ++failed;
      outputs[rep] = testing::read_file(target);
      if (c == 7) outputs[rep] += testing::read_file(dir / "eval.csv");
    }
    identical += !outputs[0].empty() && outputs[0] == outputs[1];
  }
  return {failed == 0 && identical == commands.size(),
          std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands byte-identical, " +
              std::to_string(failed) + " failed runs"};
}

}  // namespace

int main() {
  std::cout.setf(std::ios::fixed);
  std::cout.precision(4);
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << o.detail << " (" << secs
              << " s)" << std::endl;
  };

  const auto corpus = make_corpus();
  report(1, "independence query equals oracle", [&] { return oracle_equivalence(corpus); });
  report(2, "all-subcube queries equal brute force", [&] { return all_query_brute_force(corpus); });
  report(3, "sampling guarantee", sampling_guarantee);
  report(4, "candidate promise", candidate_promise);
  report(5, "Misra-Gries and Count-Min bounds", sketch_bounds);
  report(6, "Naive Bayes identities", [&] { return nb_identities(corpus); });
  report(7, "intermediate level size bound", level_sizes);
  const Dataset profile = clickstream_data();
  report(8, "two-pass ROC dominance at 2% memory", [&] { return roc_dominance(profile); });
  report(9, "heuristic MAE at most sampling MAE", [&] { return mae_trend(profile); });
  report(10, "CLI determinism", cli_determinism);
  return failures == 0 ? 0 : 1;
}
