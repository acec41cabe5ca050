// Acceptance suite. Prints one PASS/FAIL line per criterion; exits nonzero if
// any selected criterion fails. `--only N` runs a single criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "auctag/corpus.hpp"
#include "auctag/error.hpp"
#include "auctag/metrics.hpp"
#include "auctag/model.hpp"
#include "auctag/optimize.hpp"
#include "auctag/random.hpp"
#include "auctag/runner.hpp"
#include "auctag/scenarios.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace auctag;
namespace oracle = auctag::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path config_path(const std::string& name) {
  return fs::path(AUCTAG_ACCEPTANCE_DIR) / "configs" / name;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("auctag_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 1. Closed-form pair loss against O(P*N) enumeration.
Outcome loss_oracle() {
  Clock clock;
  Rng rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t p = 1 + rng.uniform_index(60);
    const std::size_t n = 1 + rng.uniform_index(60);
    std::vector<double> pos(p), neg(n);
    for (auto& v : pos) v = rng.uniform01();
    for (auto& v : neg) v = rng.uniform01();
    const double m = rng.uniform(0.0, 2.0);
    worst = std::max(worst, oracle::relative_error(auc_pair_loss(pos, neg, m),
                                                   oracle::brute_pair_loss(pos, neg, m),
                                                   1e-300));
  }
  // Full-batch loss through the model as well.
  double worst_model = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto sp = oracle::random_problem(5000 + t, 16, 6, 4, 12, 6);
    const double m = rng.uniform(0.0, 2.0);
    worst_model = std::max(
        worst_model,
        oracle::relative_error(auc_loss_and_grad(sp.model, sp.batch, m).loss,
                               oracle::naive_auc_loss(sp.model, sp.batch, m), 1e-300));
  }
  const double secs = clock.seconds();
  Outcome o;
  o.pass = worst <= 1e-9 && worst_model <= 1e-9 && secs < 5.0;
  o.detail = "1000 pair instances max rel err " + fmt("%.2e", worst) +
             ", 100 model batches max rel err " + fmt("%.2e", worst_model) + ", " +
             fmt("%.2f", secs) + " s";
  return o;
}

// 2. Analytic gradients against central differences.
Outcome gradient_check() {
  Clock clock;
  double worst_ce = 0.0, worst_auc = 0.0;
  const int models = 100;
  for (int t = 0; t < models; ++t) {
    const auto sp = oracle::random_problem(900 + t, 16, 5, 3 + t % 3, 8, 5);
    const std::span<const Example> batch(sp.batch);
    const auto ce = ce_loss_and_grad(sp.model, batch);
    const auto ce_fd = oracle::finite_difference(
        sp.model, [&](const Model& m) { return oracle::naive_ce_loss(m, batch); }, 1e-5);
    worst_ce = std::max(worst_ce, oracle::max_relative_error(oracle::flatten(ce.grad), ce_fd));
    const double margin = 0.5 + 0.01 * t;
    const auto auc = auc_loss_and_grad(sp.model, batch, margin);
    const auto auc_fd = oracle::finite_difference(
        sp.model, [&](const Model& m) { return oracle::naive_auc_loss(m, batch, margin); },
        1e-5);
    worst_auc =
        std::max(worst_auc, oracle::max_relative_error(oracle::flatten(auc.grad), auc_fd));
  }
  const double secs = clock.seconds();
  Outcome o;
  o.pass = worst_ce <= 1e-4 && worst_auc <= 1e-4 && secs < 60.0;
  o.detail = std::to_string(models) + " models, max rel err CE " + fmt("%.2e", worst_ce) +
             ", AUC " + fmt("%.2e", worst_auc) + ", " + fmt("%.2f", secs) + " s";
  return o;
}

// Cohen's kappa written out from its definition.
double kappa_by_hand(const std::vector<std::vector<double>>& cm) {
  double n = 0.0, agree = 0.0;
  std::vector<double> rows(cm.size(), 0.0), cols(cm.size(), 0.0);
  for (std::size_t i = 0; i < cm.size(); ++i) {
    for (std::size_t j = 0; j < cm.size(); ++j) {
      n += cm[i][j];
      rows[i] += cm[i][j];
      cols[j] += cm[i][j];
      if (i == j) agree += cm[i][j];
    }
  }
  double pe = 0.0;
  for (std::size_t i = 0; i < cm.size(); ++i) pe += rows[i] * cols[i] / (n * n);
  return (agree / n - pe) / (1.0 - pe);
}

// 3. Metric oracles.
Outcome metric_oracles() {
  Outcome o;
  Rng rng(303);
  int instances = 0, auc_mismatch = 0;
  for (std::size_t n = 2; n <= 200; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> s(n);
      std::vector<int> y(n);
      const std::size_t levels = 1 + rng.uniform_index(20);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = static_cast<double>(rng.uniform_index(levels));
        y[i] = rng.uniform01() < 0.5 ? 1 : 0;
      }
      y[0] = 1;
      y[n - 1] = 0;
      ++instances;
      if (*roc_auc(s, y) != oracle::brute_auc(s, y)) ++auc_mismatch;
    }
  }

  // TP=20, FP=5, FN=10, TN=65 with class 1 as the positive class.
  std::vector<std::size_t> gold, pred;
  auto push = [&](std::size_t g, std::size_t p, int count) {
    for (int i = 0; i < count; ++i) {
      gold.push_back(g);
      pred.push_back(p);
    }
  };
  push(1, 1, 20);
  push(0, 1, 5);
  push(1, 0, 10);
  push(0, 0, 65);
  const auto cm = confusion(pred, gold, 2);
  const double kappa = cohens_kappa(cm);
  const double kappa_hand = kappa_by_hand({{65, 5}, {10, 20}});
  const double f1_value = f1(cm, 1);
  const double f1_expected = 40.0 / 55.0;

  // All correct over three classes; then every prediction in one column.
  std::vector<std::size_t> all(45);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i % 3;
  const double kappa_perfect = cohens_kappa(confusion(all, all, 3));
  const std::vector<std::size_t> g2 = {0, 0, 0, 1, 1, 2}, p2(6, 0);
  const double kappa_chance = cohens_kappa(confusion(p2, g2, 3));

  const bool auc_ok = auc_mismatch == 0;
  const bool kappa_ok = kappa == 0.625 && std::abs(kappa - kappa_hand) < 1e-15 &&
                        kappa_perfect == 1.0 && kappa_chance == 0.0;
  const bool f1_ok = std::abs(f1_value - f1_expected) <= 1e-12;
  o.pass = auc_ok && kappa_ok && f1_ok;
  o.detail = "roc_auc exact on " + std::to_string(instances - auc_mismatch) + "/" +
             std::to_string(instances) + " instances; kappa " + fmt("%.17g", kappa) +
             ", perfect " + fmt("%g", kappa_perfect) + ", chance " + fmt("%g", kappa_chance) +
             "; F1 " + fmt("%.15f", f1_value);
  return o;
}

struct Item {
  std::size_t id = 0;
  int label = 0;
};

// 4. Generator exactness.
Outcome generator_exactness() {
  Outcome o;
  const ScenarioSpec defaults;
  int cells = 0, wrong = 0;
  for (double ratio : defaults.ratios) {
    for (std::size_t n : {std::size_t{50}, std::size_t{100}, std::size_t{1000}}) {
      std::vector<Item> pool;
      for (std::size_t i = 0; i < 2 * n; ++i) pool.push_back({i, 1});
      for (std::size_t i = 0; i < 2 * n; ++i) pool.push_back({2 * n + i, 0});
      const auto out = make_imbalanced<Item>(pool, ratio, n, 17 + cells);
      const auto expected = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))));
      const auto positives = static_cast<std::size_t>(
          std::count_if(out.begin(), out.end(), [](const Item& it) { return it.label == 1; }));
      std::vector<std::size_t> ids;
      for (const auto& it : out) ids.push_back(it.id);
      std::sort(ids.begin(), ids.end());
      const bool distinct = std::adjacent_find(ids.begin(), ids.end()) == ids.end();
      ++cells;
      if (out.size() != n || positives != expected || !distinct) ++wrong;
    }
  }

  // Train-shift on real windows: the test side must equal the pool byte for byte.
  SynthSpec synth;
  synth.n_sessions = 30;
  synth.sentences_per_session = 40;
  synth.seed = 21;
  const Corpus corpus = synth_corpus(synth);
  const auto [train_c, test_c] = split_sessions(corpus, SplitSpec{0.8, 4});
  const auto train_w = binarize(build_context_windows(train_c, true), corpus.label_set, "FP");
  const auto test_w = binarize(build_context_windows(test_c, true), corpus.label_set, "FP");
  auto dump = [](const std::vector<LabeledWindow>& ws) {
    std::string s;
    for (const auto& w : ws) {
      s += sentence_to_json(w.window.current).dump();
      s += w.window.prev1 ? sentence_to_json(*w.window.prev1).dump() : "-";
      s += w.window.prev2 ? sentence_to_json(*w.window.prev2).dump() : "-";
      s += std::to_string(w.label) + "\n";
    }
    return s;
  };
  const std::string before = dump(test_w);
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kImbalanceTrainShift;
  spec.train_n = 50;
  bool untouched = true;
  for (double ratio : spec.ratios) {
    const auto cond = build_condition<LabeledWindow>(train_w, test_w, spec, ratio, 99);
    untouched = untouched && dump(cond.test) == before && dump(test_w) == before;
  }
  o.pass = wrong == 0 && untouched;
  o.detail = std::to_string(cells - wrong) + "/" + std::to_string(cells) +
             " (ratio, n) cells exact; train-shift test pool " +
             (untouched ? "byte-identical" : "CHANGED") + " over " +
             std::to_string(spec.ratios.size()) + " ratios";
  return o;
}

int run_process(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return status;
}

// 5. Two end-to-end executions from one config file.
Outcome determinism() {
  Outcome o;
  const fs::path dir = scratch_dir("determinism");
  fs::copy_file(config_path("determinism.json"), dir / "config.json");
  const std::vector<std::string> files = {"trials.csv", "summary.json", "plotdata.json"};
  std::vector<fs::path> runs = {dir / "run_a", dir / "run_b"};
  for (const auto& out : runs) {
#ifdef AUCTAG_CLI_PATH
    const std::string cmd = std::string(AUCTAG_CLI_PATH) + " sweep-lowres --config " +
                            (dir / "config.json").string() + " --out " + out.string() +
                            " > /dev/null";
    if (run_process(cmd) != 0) {
      o.pass = false;
      o.detail = "CLI sweep failed";
      return o;
    }
#else
    auto config = load_experiment_config(dir / "config.json");
    config.output_dir = out;
    fs::create_directories(out);
    report(sweep_low_resource(config), out);
#endif
  }
  std::size_t identical = 0;
  for (const auto& f : files) {
    const std::string a = slurp(runs[0] / f);
    if (!a.empty() && a == slurp(runs[1] / f)) ++identical;
  }
  const std::string csv = slurp(runs[0] / "trials.csv");
  const auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  o.pass = identical == files.size();
  o.detail = std::to_string(identical) + "/3 report files byte-identical across two runs (" +
             std::to_string(rows) + " trials)";
  fs::remove_all(dir);
  return o;
}

// 6. COMAUC with the AUC phase ablated reduces to CE.
Outcome reduction_sanity() {
  Outcome o;
  SynthSpec synth;
  synth.n_sessions = 8;
  synth.sentences_per_session = 40;
  synth.num_classes = 5;
  synth.seed = 6;
  const Corpus corpus = synth_corpus(synth);
  FeatureConfig fc;
  fc.dim = 2048;
  const auto examples = featurize_all(build_context_windows(corpus, true), fc);
  const std::span<const Example> all(examples);
  const std::size_t n_val = validation_count(all.size());
  const Model init = init_model(corpus.label_set, 16, fc, 66);
  TrainConfig tc;
  tc.max_epochs = 15;
  tc.patience = 15;
  tc.seed = 606;
  LossConfig ablated;
  ablated.regime = Regime::kCOMAUC;
  ablated.comauc_disable_auc = true;
  const auto ce = train(init, all.first(all.size() - n_val), all.last(n_val), LossConfig{}, tc);
  const auto ab = train(init, all.first(all.size() - n_val), all.last(n_val), ablated, tc);
  const bool same_model = ce.model == ab.model;
  bool same_history = ce.history.epochs.size() == ab.history.epochs.size();
  for (std::size_t e = 0; same_history && e < ce.history.epochs.size(); ++e) {
    const auto& a = ce.history.epochs[e];
    const auto& b = ab.history.epochs[e];
    same_history = a.regime == b.regime && a.train_loss == b.train_loss && a.val_f1 == b.val_f1;
  }
  o.pass = same_model && same_history;
  o.detail = std::to_string(ce.history.epochs.size()) + " epochs, parameters " +
             (same_model ? "bit-identical" : "DIFFER") + ", history " +
             (same_history ? "bit-identical" : "DIFFERS");
  return o;
}

std::map<std::pair<std::string, double>, const Aggregate*> index_aggregates(
    const SweepResult& r) {
  std::map<std::pair<std::string, double>, const Aggregate*> out;
  for (const auto& a : r.aggregates) out[{a.method, a.condition.value}] = &a;
  return out;
}

// 7. Low-resource direction.
Outcome low_resource_direction() {
  Clock clock;
  Outcome o;
  const auto config = load_experiment_config(config_path("lowres.json"));
  const auto data = prepare_data(config);
  const auto result = sweep(config, data);
  const double secs = clock.seconds();
  auto agg = index_aggregates(result);
  auto f1_at = [&](const std::string& m, double size) { return agg.at({m, size})->f1.mean; };
  const double ce100 = f1_at("CE", 100), dam100 = f1_at("DAM", 100),
               com100 = f1_at("COMAUC", 100);
  const double gap100 = dam100 - ce100;
  const double gap800 = f1_at("DAM", 800) - f1_at("CE", 800);
  o.pass = data.train_pool.size() >= 2000 && dam100 >= ce100 && com100 >= ce100 &&
           gap100 >= gap800 && secs < 600.0;
  o.detail = "pool " + std::to_string(data.train_pool.size()) + "; macro-F1 at 100: CE " +
             fmt("%.4f", ce100) + ", DAM " + fmt("%.4f", dam100) + ", COMAUC " +
             fmt("%.4f", com100) + "; DAM-CE gap 100 " + fmt("%+.4f", gap100) + " vs 800 " +
             fmt("%+.4f", gap800) + "; " + fmt("%.1f", secs) + " s";
  return o;
}

// 8. Imbalance robustness direction.
Outcome imbalance_direction() {
  Clock clock;
  Outcome o;
  const auto config = load_experiment_config(config_path("imbalance.json"));
  const auto data = prepare_data(config);
  const auto result = sweep(config, data);
  const double secs = clock.seconds();
  auto agg = index_aggregates(result);
  auto kappa_at = [&](const std::string& m, double r) { return agg.at({m, r})->kappa.mean; };
  std::map<std::string, double> drop;
  std::string detail = "kappa 0.2 -> 0.8:";
  for (const char* m : {"CE", "DAM", "COMAUC"}) {
    drop[m] = kappa_at(m, 0.2) - kappa_at(m, 0.8);
    detail += std::string(" ") + m + " " + fmt("%.4f", kappa_at(m, 0.2)) + " -> " +
              fmt("%.4f", kappa_at(m, 0.8)) + " (drop " + fmt("%.4f", drop[m]) + ");";
  }
  const bool dam_ok = drop["DAM"] < drop["CE"];
  const bool com_ok = drop["COMAUC"] < drop["CE"];
  detail += std::string(" kappa@0.8 >= 0.60 (reported only): DAM ") +
            (kappa_at("DAM", 0.8) >= 0.6 ? "yes" : "no") + ", COMAUC " +
            (kappa_at("COMAUC", 0.8) >= 0.6 ? "yes" : "no") + "; " + fmt("%.1f", secs) + " s";
  o.pass = dam_ok && com_ok && secs < 600.0;
  o.detail = detail;
  return o;
}

// 9. Trial accounting at the default grids.
Outcome trial_accounting() {
  Clock clock;
  Outcome o;
  ExperimentConfig base;
  SynthSpec synth;
  synth.n_sessions = 40;
  synth.sentences_per_session = 40;
  synth.num_classes = 4;
  synth.seed = 9;
  base.data.synth = synth;
  // Grid, partitions and methods stay at their defaults; training is cut short.
  base.train.max_epochs = 1;
  base.hidden_dim = 2;
  base.features.dim = 64;

  ExperimentConfig lowres = base;
  lowres.scenario.kind = ScenarioKind::kLowResource;
  const auto a = sweep_low_resource(lowres);

  ExperimentConfig imbalance = base;
  imbalance.scenario.kind = ScenarioKind::kImbalanceTrainShift;
  const auto b = sweep_imbalance(imbalance);

  auto csv_rows = [](const SweepResult& r) {
    const std::string csv = trials_csv(r);
    return static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) - 1;
  };
  o.pass = a.trials.size() == 180 && csv_rows(a) == 180 && b.trials.size() == 210 &&
           csv_rows(b) == 210 && planned_trial_count(lowres) == 180 &&
           planned_trial_count(imbalance) == 210;
  o.detail = "sweep-lowres " + std::to_string(a.trials.size()) + " trials, sweep-imbalance " +
             std::to_string(b.trials.size()) + " trials; " + fmt("%.1f", clock.seconds()) +
             " s";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<Criterion> criteria = {
      {1, "loss oracle equivalence", loss_oracle},
      {2, "gradient correctness", gradient_check},
      {3, "metric oracles", metric_oracles},
      {4, "generator exactness", generator_exactness},
      {5, "determinism", determinism},
      {6, "reduction sanity", reduction_sanity},
      {7, "low-resource direction", low_resource_direction},
      {8, "imbalance robustness direction", imbalance_direction},
      {9, "trial accounting", trial_accounting},
  };
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %d %s: %s (%s)\n", c.id, c.name, out.pass ? "PASS" : "FAIL",
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
