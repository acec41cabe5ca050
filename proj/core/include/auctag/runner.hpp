#ifndef AUCTAG_RUNNER_HPP_
#define AUCTAG_RUNNER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auctag/corpus.hpp"
#include "auctag/features.hpp"
#include "auctag/optimize.hpp"
#include "auctag/scenarios.hpp"

namespace auctag {

struct MethodSpec {
  std::string name;
  LossConfig loss;
};

// CE, DAM and COMAUC with default loss settings.
std::vector<MethodSpec> default_methods();

struct DataSource {
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> labels;  // default 31-code list if unset
  std::optional<SynthSpec> synth;
};

struct ExperimentConfig {
  DataSource data;
  SplitSpec split;
  ScenarioSpec scenario;
  std::vector<MethodSpec> methods = default_methods();
  TrainConfig train;
  std::size_t hidden_dim = 32;
  FeatureConfig features;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir = "out";
  std::size_t threads = 1;
  // Measured wall time makes trials.csv non-reproducible, so it is opt-in;
  // the column reads 0 otherwise.
  bool record_wall_time = false;
  bool export_conditions = false;

  void validate() const;
};

// Relative paths in `data` are resolved against `base_dir`.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

// Featurized pools shared read-only by every trial of a sweep.
struct PreparedData {
  ScenarioKind kind = ScenarioKind::kLowResource;
  LabelSet label_set;  // K classes, or {not_target, target} for imbalance
  std::vector<Example> train_pool;
  std::vector<Example> test_pool;
  // Window views of the pools, kept for condition export.
  std::vector<LabeledWindow> train_windows;
  std::vector<LabeledWindow> test_windows;
  std::size_t train_sessions = 0;
  std::size_t test_sessions = 0;
};

Corpus load_source(const ExperimentConfig& config);
PreparedData prepare_data(const ExperimentConfig& config);
PreparedData prepare_data(const ExperimentConfig& config, const Corpus& corpus);

struct Condition {
  ScenarioKind kind = ScenarioKind::kLowResource;
  std::size_t index = 0;
  double value = 0.0;  // training size or positive ratio
};

// Shortest round-trip decimal, e.g. "100" or "0.01".
std::string format_number(double value);

std::vector<Condition> conditions_of(const ScenarioSpec& spec);

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t condition_index,
                         std::size_t partition);

struct TrialResult {
  std::string method;
  std::size_t method_index = 0;
  Condition condition;
  std::size_t partition = 0;
  std::uint64_t seed = 0;
  double f1 = 0.0;  // macro-F1 (multi-class) or positive-class F1 (binary)
  double kappa = 0.0;
  std::optional<double> auc;  // binary tasks only
  int epochs = 0;
  double wall_time = 0.0;
};

struct MetricStats {
  double mean = 0.0;
  double sd = 0.0;
  double ci95 = 0.0;
};

struct Aggregate {
  std::string method;
  std::size_t method_index = 0;
  Condition condition;
  std::size_t n = 0;
  MetricStats f1;
  MetricStats kappa;
  std::optional<MetricStats> auc;
};

struct SweepResult {
  std::vector<TrialResult> trials;
  std::vector<Aggregate> aggregates;
  nlohmann::json metadata;
};

// Two-sided 95% Student-t quantile, t(0.975, df).
double t_quantile_975(std::size_t df);
MetricStats summarize(const std::vector<double>& values);

// Size of the validation carve: round(0.2 * n), at least 1.
std::size_t validation_count(std::size_t n);

// Samples, carves the last 20% for validation, trains and evaluates.
TrialResult run_trial(const ExperimentConfig& config, const PreparedData& data,
                      std::size_t method_index, const Condition& condition,
                      std::size_t partition, std::uint64_t seed);
TrialResult run_trial(const ExperimentConfig& config, std::size_t method_index,
                      const Condition& condition, std::uint64_t seed);

std::size_t planned_trial_count(const ExperimentConfig& config);

SweepResult sweep(const ExperimentConfig& config, const PreparedData& data);
SweepResult sweep_low_resource(const ExperimentConfig& config);
SweepResult sweep_imbalance(const ExperimentConfig& config);

std::vector<Aggregate> aggregate(const std::vector<TrialResult>& trials);

nlohmann::ordered_json to_json(const SweepResult& sweep);
SweepResult sweep_from_json(const nlohmann::json& j);

std::string trials_csv(const SweepResult& sweep);
nlohmann::ordered_json summary_json(const SweepResult& sweep);
nlohmann::ordered_json plotdata_json(const SweepResult& sweep);

// Writes trials.csv, summary.json and plotdata.json.
void report(const SweepResult& sweep, const std::filesystem::path& out_dir);

}  // namespace auctag

#endif  // AUCTAG_RUNNER_HPP_
