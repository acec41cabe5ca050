// auctag: train and evaluate dialogue-act classifiers under CE, DAM and
// COMAUC, and run the low-resource and imbalance sweeps.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "auctag/corpus.hpp"
#include "auctag/error.hpp"
#include "auctag/metrics.hpp"
#include "auctag/model.hpp"
#include "auctag/optimize.hpp"
#include "auctag/random.hpp"
#include "auctag/runner.hpp"
#include "auctag/scenarios.hpp"

namespace fs = std::filesystem;
using namespace auctag;

namespace {

int fail(std::string_view kind, std::string_view message) {
  nlohmann::json j = {{"error", std::string(kind)}, {"message", std::string(message)}};
  std::cerr << j.dump() << std::endl;
  return 1;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

LabelSet labels_or_default(const std::string& path) {
  return path.empty() ? default_label_set() : load_label_set(path);
}

struct SynthArgs {
  SynthSpec spec;
  std::vector<double> priors;
  std::string out;
  std::string labels_out;
};

struct TrainArgs {
  std::string data, labels, method = "ce", out, history;
  double margin = 1.0;
  std::uint64_t seed = 0;
  std::size_t hidden = 32;
  std::size_t dim = FeatureConfig{}.dim;
  int comauc_period = 1;
  TrainConfig train;
};

struct EvalArgs {
  std::string model, data, mode = "ova", out;
};

struct SweepArgs {
  std::string config, out;
};

struct ReportArgs {
  std::string sweep, out;
};

int run_synth(const SynthArgs& a) {
  SynthSpec spec = a.spec;
  spec.class_priors = a.priors;
  const Corpus corpus = synth_corpus(spec);
  save_corpus(corpus, a.out);
  if (!a.labels_out.empty()) save_label_set(corpus.label_set, a.labels_out);
  std::cout << nlohmann::json{{"sentences", corpus.size()},
                              {"sessions", corpus.sessions.size()},
                              {"out", a.out}}
                   .dump()
            << '\n';
  return 0;
}

int run_train(const TrainArgs& a) {
  const LabelSet labels = labels_or_default(a.labels);
  const Corpus corpus = load_corpus(a.data, labels);
  auto windows = build_context_windows(corpus, true);
  if (windows.size() < 2) {
    throw Error(ErrorKind::kValidation, "need at least 2 labeled sentences");
  }
  Rng rng(mix_seed(a.seed, 1));
  rng.shuffle(windows);
  const std::size_t n_val = std::max<std::size_t>(
      1, static_cast<std::size_t>(0.2 * static_cast<double>(windows.size()) + 0.5));

  FeatureConfig features;
  features.dim = a.dim;
  features.validate();
  const auto examples = featurize_all(windows, features);
  const std::span<const Example> all(examples);
  const auto fit = all.first(all.size() - n_val);
  const auto val = all.last(n_val);

  LossConfig loss;
  loss.regime = parse_regime(a.method);
  loss.margin = a.margin;
  loss.comauc_period = a.comauc_period;
  loss.validate();
  TrainConfig tc = a.train;
  tc.seed = mix_seed(a.seed, 2);

  Model model = init_model(labels, a.hidden, features, mix_seed(a.seed, 3));
  TrainResult result = train(std::move(model), fit, val, loss, tc);
  save_checkpoint(result.model, a.out);
  const std::string history = a.history.empty() ? a.out + ".history.json" : a.history;
  write_json(history, history_to_json(result.history));

  const double best = result.history.epochs[result.history.best_epoch].val_f1;
  std::cout << nlohmann::json{{"model", a.out},
                              {"history", history},
                              {"epochs", result.history.epochs.size()},
                              {"best_epoch", result.history.best_epoch},
                              {"best_val_f1", best},
                              {"stop_reason", std::string(to_string(result.history.stop_reason))}}
                   .dump()
            << '\n';
  return 0;
}

int run_evaluate(const EvalArgs& a) {
  const Model model = load_checkpoint(a.model);
  const Corpus corpus = load_corpus(a.data, model.label_set);
  const auto windows = build_context_windows(corpus, true);
  if (windows.empty()) throw Error(ErrorKind::kValidation, "no labeled sentences");
  const auto examples = featurize_all(windows, model.features);
  const auto report = evaluate(model, examples, parse_score_mode(a.mode));
  const auto j = to_json(report);
  if (a.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json(a.out, j);
  }
  return 0;
}

int run_sweep(const SweepArgs& a, bool lowres) {
  ExperimentConfig config = load_experiment_config(a.config);
  if (!a.out.empty()) config.output_dir = a.out;
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo, "cannot create '" + config.output_dir.string() + "'");
  }
  write_json(config.output_dir / "config.resolved.json", to_json(config));
  const SweepResult result =
      lowres ? sweep_low_resource(config) : sweep_imbalance(config);
  write_json(config.output_dir / "sweep.json", to_json(result));
  report(result, config.output_dir);
  std::cout << nlohmann::json{{"trials", result.trials.size()},
                              {"out", config.output_dir.string()}}
                   .dump()
            << '\n';
  return 0;
}

int run_report(const ReportArgs& a) {
  std::ifstream in(a.sweep);
  if (!in) throw Error(ErrorKind::kIo, "cannot open sweep '" + a.sweep + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("sweep: ") + e.what());
  }
  const SweepResult result = sweep_from_json(j);
  const fs::path out = a.out.empty() ? fs::path(a.sweep).parent_path() : fs::path(a.out);
  report(result, out.empty() ? fs::path(".") : out);
  std::cout << nlohmann::json{{"trials", result.trials.size()}, {"out", out.string()}}.dump()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dialogue-act classifiers trained with CE, DAM and COMAUC"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Emit a synthetic corpus as JSONL");
  synth_cmd->add_option("--sessions", synth.spec.n_sessions, "Number of sessions");
  synth_cmd->add_option("--sentences", synth.spec.sentences_per_session,
                        "Sentences per session");
  synth_cmd->add_option("--classes", synth.spec.num_classes, "Number of classes K");
  synth_cmd->add_option("--priors", synth.priors, "Class priors (K values)")->delimiter(',');
  synth_cmd->add_option("--separability", synth.spec.separability, "In [0, 1]");
  synth_cmd->add_option("--vocab", synth.spec.vocab_size, "Vocabulary size per pool");
  synth_cmd->add_option("--seed", synth.spec.seed, "PRNG seed");
  synth_cmd->add_option("--out", synth.out, "Output JSONL")->required();
  synth_cmd->add_option("--labels-out", synth.labels_out, "Write the label set JSON");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a single model");
  train_cmd->add_option("--data", tr.data, "Corpus JSONL")->required();
  train_cmd->add_option("--labels", tr.labels, "Label set JSON (default: 31 codes)");
  train_cmd->add_option("--method", tr.method, "ce | dam | comauc")
      ->check(CLI::IsMember({"ce", "dam", "comauc", "CE", "DAM", "COMAUC"}));
  train_cmd->add_option("--margin", tr.margin, "AUC margin m");
  train_cmd->add_option("--seed", tr.seed, "PRNG seed");
  train_cmd->add_option("--out", tr.out, "Checkpoint path")->required();
  train_cmd->add_option("--history", tr.history, "History JSON path");
  train_cmd->add_option("--hidden", tr.hidden, "Encoder width");
  train_cmd->add_option("--dim", tr.dim, "Hashed feature dimension (power of two)");
  train_cmd->add_option("--batch", tr.train.batch_size, "Mini-batch size");
  train_cmd->add_option("--lr", tr.train.learning_rate, "Learning rate");
  train_cmd->add_option("--momentum", tr.train.momentum, "Momentum");
  train_cmd->add_option("--epochs", tr.train.max_epochs, "Maximum epochs");
  train_cmd->add_option("--patience", tr.train.patience, "Early-stopping patience");
  train_cmd->add_option("--comauc-period", tr.comauc_period, "Epochs per COMAUC phase");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  eval_cmd->add_option("--model", ev.model, "Checkpoint path")->required();
  eval_cmd->add_option("--data", ev.data, "Corpus JSONL")->required();
  eval_cmd->add_option("--mode", ev.mode, "ova | softmax")
      ->check(CLI::IsMember({"ova", "softmax"}));
  eval_cmd->add_option("--out", ev.out, "EvalReport JSON path (default: stdout)");

  SweepArgs lowres, imbalance;
  auto* lowres_cmd = app.add_subcommand("sweep-lowres", "Low-resource sweep");
  lowres_cmd->add_option("--config", lowres.config, "Experiment config JSON")->required();
  lowres_cmd->add_option("--out", lowres.out, "Override output directory");
  auto* imb_cmd = app.add_subcommand("sweep-imbalance", "Imbalance-ratio sweep");
  imb_cmd->add_option("--config", imbalance.config, "Experiment config JSON")->required();
  imb_cmd->add_option("--out", imbalance.out, "Override output directory");

  ReportArgs rep;
  auto* report_cmd = app.add_subcommand("report", "Write csv/json reports from sweep.json");
  report_cmd->add_option("--sweep", rep.sweep, "sweep.json path")->required();
  report_cmd->add_option("--out", rep.out, "Output directory");

  std::string labels_out;
  auto* labels_cmd = app.add_subcommand("labels", "Write the default label set");
  labels_cmd->add_option("--out", labels_out, "Output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*train_cmd) return run_train(tr);
    if (*eval_cmd) return run_evaluate(ev);
    if (*lowres_cmd) return run_sweep(lowres, true);
    if (*imb_cmd) return run_sweep(imbalance, false);
    if (*report_cmd) return run_report(rep);
    if (*labels_cmd) {
      save_label_set(default_label_set(), labels_out);
      return 0;
    }
  } catch (const Error& e) {
    return fail(to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
