#ifndef AUCTAG_OPTIMIZE_HPP_
#define AUCTAG_OPTIMIZE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "auctag/features.hpp"
#include "auctag/model.hpp"

namespace auctag {

// Optimization regime of a whole training run.
enum class Regime { kCE, kDAM, kCOMAUC };
// Loss actually applied during one epoch.
enum class EpochLoss { kCE, kAUC };

std::string_view to_string(Regime regime);
std::string_view to_string(EpochLoss loss);
Regime parse_regime(std::string_view text);
EpochLoss parse_epoch_loss(std::string_view text);

struct LossConfig {
  Regime regime = Regime::kCE;
  double margin = 1.0;
  int comauc_period = 1;
  EpochLoss comauc_start = EpochLoss::kCE;
  // Ablation: COMAUC never switches to the AUC loss.
  bool comauc_disable_auc = false;

  void validate() const;
};

nlohmann::json to_json(const LossConfig& config);
LossConfig loss_config_from_json(const nlohmann::json& j);

struct TrainConfig {
  std::size_t batch_size = 32;
  double learning_rate = 0.1;
  double momentum = 0.9;
  int max_epochs = 100;
  int patience = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);

// A featurized training item.
struct Example {
  FeatureVector features;
  int label = 0;
};

std::vector<Example> featurize_all(std::span<const LabeledWindow> windows,
                                   const FeatureConfig& config);

struct LossAndGrad {
  double loss = 0.0;
  Params grad;
};

// Mean negative log softmax probability of the true class. `batch` selects
// items from `examples`; an empty selection uses all of them.
LossAndGrad ce_loss_and_grad(const Model& model, std::span<const Example> examples,
                             std::span<const std::size_t> batch = {});

// Mean over all positive/negative pairs of (m - p + q)^2; 0 if either side is
// empty.
double auc_pair_loss(std::span<const double> pos_scores,
                     std::span<const double> neg_scores, double margin);

// Sum over classes of the one-vs-all pairwise AUC margin loss on sigmoid
// scores. Classes without positives or negatives in the batch contribute 0.
LossAndGrad auc_loss_and_grad(const Model& model, std::span<const Example> examples,
                              double margin,
                              std::span<const std::size_t> batch = {});

// Only meaningful for Regime::kCOMAUC.
EpochLoss regime_for_epoch(const LossConfig& config, int epoch);

// Loss used in `epoch` for any regime.
EpochLoss epoch_loss(const LossConfig& config, int epoch);

// v <- momentum * v - lr * g; p <- p + v.
void sgd_step(Params& params, const Params& grad, Params& velocity, double lr,
              double momentum);

enum class StopReason { kMaxEpochs, kEarlyStop };

std::string_view to_string(StopReason reason);

struct EpochRecord {
  int epoch = 0;
  EpochLoss regime = EpochLoss::kCE;
  double train_loss = 0.0;
  double val_f1 = 0.0;

  bool operator==(const EpochRecord&) const = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  StopReason stop_reason = StopReason::kMaxEpochs;
  int best_epoch = 0;
};

nlohmann::json history_to_json(const TrainHistory& history);

struct TrainResult {
  Model model;
  TrainHistory history;
};

TrainResult train(Model model, std::span<const Example> train_set,
                  std::span<const Example> val_set, const LossConfig& loss,
                  const TrainConfig& config);

}  // namespace auctag

#endif  // AUCTAG_OPTIMIZE_HPP_
