#include "auctag/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "auctag/error.hpp"

namespace auctag {

std::uint64_t ConfusionMatrix::row_sum(std::size_t gold) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < k_; ++p) s += at(gold, p);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t pred) const {
  std::uint64_t s = 0;
  for (std::size_t g = 0; g < k_; ++g) s += at(g, pred);
  return s;
}

ConfusionMatrix confusion(std::span<const std::size_t> preds,
                          std::span<const std::size_t> gold,
                          std::size_t num_classes) {
  if (preds.size() != gold.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "length mismatch: " + std::to_string(preds.size()) +
                    " predictions vs " + std::to_string(gold.size()) + " gold");
  }
  if (preds.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "confusion of empty lists");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] >= num_classes || gold[i] >= num_classes) {
      throw Error(ErrorKind::kInvalidArgument,
                  "class index out of range at position " + std::to_string(i));
    }
    cm.add(gold[i], preds[i]);
  }
  return cm;
}

double f1(const ConfusionMatrix& cm, std::size_t k) {
  const auto tp = static_cast<double>(cm.at(k, k));
  const auto fp = static_cast<double>(cm.col_sum(k)) - tp;
  const auto fn = static_cast<double>(cm.row_sum(k)) - tp;
  const double denom = 2.0 * tp + fp + fn;
  return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
}

std::vector<double> f1_per_class(const ConfusionMatrix& cm) {
  std::vector<double> out(cm.num_classes());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = f1(cm, k);
  return out;
}

double f1_macro(const ConfusionMatrix& cm) {
  if (cm.num_classes() == 0) return 0.0;
  const auto per = f1_per_class(cm);
  return std::accumulate(per.begin(), per.end(), 0.0) /
         static_cast<double>(per.size());
}

double cohens_kappa(const ConfusionMatrix& cm) {
  if (cm.total() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "kappa of an empty matrix");
  }
  // kappa = (n * diag - sum r_k c_k) / (n^2 - sum r_k c_k), kept in integers
  // so that hand-computable cases come out exact.
  __extension__ typedef unsigned __int128 Wide;
  const Wide n = cm.total();
  Wide diag = 0, chance = 0;
  for (std::size_t k = 0; k < cm.num_classes(); ++k) {
    diag += cm.at(k, k);
    chance += static_cast<Wide>(cm.row_sum(k)) * cm.col_sum(k);
  }
  // p_e == 1 only when a single class fills both marginals, which forces
  // p_o == 1.
  if (chance >= n * n) return 1.0;
  const auto num = static_cast<long double>(n * diag) - static_cast<long double>(chance);
  const auto den = static_cast<long double>(n * n - chance);
  return static_cast<double>(num / den);
}

std::optional<double> roc_auc(std::span<const double> scores,
                              std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorKind::kInvalidArgument, "scores/labels length mismatch");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of midranks of positives, computed in doubled units so that tie
  // credit stays an exact integer.
  std::uint64_t positives = 0, negatives = 0;
  std::uint64_t doubled_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1..j share midrank (i+1+j)/2.
    const std::uint64_t doubled_mid = i + 1 + j;
    for (std::size_t t = i; t < j; ++t) {
      const int y = labels[order[t]];
      if (y != 0 && y != 1) {
        throw Error(ErrorKind::kInvalidArgument, "labels must be 0 or 1");
      }
      if (y == 1) {
        ++positives;
        doubled_rank_sum += doubled_mid;
      } else {
        ++negatives;
      }
    }
    i = j;
  }
  if (positives == 0 || negatives == 0) return std::nullopt;
  // 2U = 2R - P(P+1); AUC = U / (P N).
  const std::uint64_t doubled_u = doubled_rank_sum - positives * (positives + 1);
  return static_cast<double>(doubled_u) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

EvalReport evaluate(const Model& model, std::span<const Example> examples,
                    ScoreMode mode) {
  const std::size_t classes = model.num_classes();
  std::vector<std::size_t> preds(examples.size()), gold(examples.size());
  std::vector<std::vector<double>> per_class(classes,
                                             std::vector<double>(examples.size()));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto scores = predict_proba(model, examples[i].features, mode);
    preds[i] = argmax(scores);
    gold[i] = static_cast<std::size_t>(examples[i].label);
    for (std::size_t k = 0; k < classes; ++k) per_class[k][i] = scores[k];
  }
  EvalReport r;
  r.labels = model.label_set.codes();
  r.confusion = confusion(preds, gold, classes);
  r.f1_per_class = f1_per_class(r.confusion);
  r.f1_macro = f1_macro(r.confusion);
  r.kappa = cohens_kappa(r.confusion);
  std::vector<int> binary(examples.size());
  for (std::size_t k = 0; k < classes; ++k) {
    for (std::size_t i = 0; i < gold.size(); ++i) binary[i] = gold[i] == k ? 1 : 0;
    r.auc_per_class.push_back(roc_auc(per_class[k], binary));
  }
  return r;
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t g = 0; g < cm.num_classes(); ++g) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t p = 0; p < cm.num_classes(); ++p) row.push_back(cm.at(g, p));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json auc = nlohmann::json::array();
  for (const auto& a : r.auc_per_class) {
    auc.push_back(a ? nlohmann::json(*a) : nlohmann::json(nullptr));
  }
  return {{"labels", r.labels},
          {"f1_macro", r.f1_macro},
          {"f1_per_class", r.f1_per_class},
          {"kappa", r.kappa},
          {"auc_per_class", auc},
          {"confusion", to_json(r.confusion)},
          {"n", r.confusion.total()}};
}

}  // namespace auctag
