#ifndef AUCTAG_METRICS_HPP_
#define AUCTAG_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "auctag/model.hpp"
#include "auctag/optimize.hpp"

namespace auctag {

// Rows are gold classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes)
      : k_(num_classes), counts_(num_classes * num_classes, 0) {}

  std::size_t num_classes() const { return k_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t at(std::size_t gold, std::size_t pred) const {
    return counts_[gold * k_ + pred];
  }
  void add(std::size_t gold, std::size_t pred) {
    ++counts_[gold * k_ + pred];
    ++total_;
  }
  std::uint64_t row_sum(std::size_t gold) const;
  std::uint64_t col_sum(std::size_t pred) const;

 private:
  std::size_t k_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

ConfusionMatrix confusion(std::span<const std::size_t> preds,
                          std::span<const std::size_t> gold,
                          std::size_t num_classes);

// 2TP / (2TP + FP + FN), 0 when the denominator is 0.
double f1(const ConfusionMatrix& cm, std::size_t k);
std::vector<double> f1_per_class(const ConfusionMatrix& cm);
double f1_macro(const ConfusionMatrix& cm);

double cohens_kappa(const ConfusionMatrix& cm);

// Mann-Whitney AUC with ties credited 0.5. Returns nullopt when the labels
// hold a single class.
std::optional<double> roc_auc(std::span<const double> scores,
                              std::span<const int> labels);

struct EvalReport {
  std::vector<std::string> labels;
  double f1_macro = 0.0;
  std::vector<double> f1_per_class;
  double kappa = 0.0;
  std::vector<std::optional<double>> auc_per_class;
  ConfusionMatrix confusion{0};
};

// Scores each example with `mode` and predicts by argmax.
EvalReport evaluate(const Model& model, std::span<const Example> examples,
                    ScoreMode mode);

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const EvalReport& report);

}  // namespace auctag

#endif  // AUCTAG_METRICS_HPP_
