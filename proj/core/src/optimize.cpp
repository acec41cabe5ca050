#include "auctag/optimize.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "auctag/error.hpp"
#include "auctag/metrics.hpp"
#include "auctag/random.hpp"

namespace auctag {
namespace {

struct Forward {
  std::vector<std::size_t> items;  // indices into examples
  std::vector<double> latent;      // items x hidden
  std::vector<double> z;           // items x classes
};

std::vector<std::size_t> resolve_batch(std::span<const Example> examples,
                                       std::span<const std::size_t> batch) {
  std::vector<std::size_t> items;
  if (batch.empty()) {
    items.resize(examples.size());
    std::iota(items.begin(), items.end(), std::size_t{0});
  } else {
    items.assign(batch.begin(), batch.end());
  }
  if (items.empty()) throw Error(ErrorKind::kInvalidArgument, "empty batch");
  return items;
}

Forward forward(const Model& model, std::span<const Example> examples,
                std::span<const std::size_t> batch) {
  Forward f;
  f.items = resolve_batch(examples, batch);
  const std::size_t hidden = model.hidden_dim();
  const std::size_t classes = model.num_classes();
  f.latent.resize(f.items.size() * hidden);
  f.z.resize(f.items.size() * classes);
  for (std::size_t i = 0; i < f.items.size(); ++i) {
    const Example& ex = examples[f.items[i]];
    if (ex.label < 0 || static_cast<std::size_t>(ex.label) >= classes) {
      throw Error(ErrorKind::kInvalidArgument,
                  "label " + std::to_string(ex.label) + " out of range");
    }
    const auto h = encode(model, ex.features);
    std::copy(h.begin(), h.end(), f.latent.begin() + static_cast<std::ptrdiff_t>(i * hidden));
    for (std::size_t k = 0; k < classes; ++k) {
      f.z[i * classes + k] = class_logit(model, h, k);
    }
  }
  return f;
}

// Backpropagates dL/dz (items x classes) through heads and encoder.
Params backward(const Model& model, std::span<const Example> examples,
                const Forward& f, const std::vector<double>& dz) {
  const Params& p = model.params;
  const std::size_t hidden = p.hidden_dim;
  const std::size_t classes = p.num_classes;
  Params g = p.zeros_like();
  std::vector<double> dh(hidden);
  for (std::size_t i = 0; i < f.items.size(); ++i) {
    const double* h = f.latent.data() + i * hidden;
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t k = 0; k < classes; ++k) {
      const double d = dz[i * classes + k];
      if (d == 0.0) continue;
      g.head_b[k] += d;
      double* gw = g.head_w.data() + k * hidden;
      const double* w = p.head_w.data() + k * hidden;
      for (std::size_t j = 0; j < hidden; ++j) {
        gw[j] += d * h[j];
        dh[j] += d * w[j];
      }
    }
    const FeatureVector& fv = examples[f.items[i]].features;
    for (std::size_t r = 0; r < hidden; ++r) {
      // Rectifier derivative is taken as 0 at the kink.
      if (h[r] <= 0.0 || dh[r] == 0.0) continue;
      g.b1[r] += dh[r];
      double* row = g.w1.data() + r * p.input_dim;
      for (const auto& e : fv.entries) row[e.index] += dh[r] * e.value;
    }
  }
  return g;
}

// Sum over all pairs of (a_p + q)^2 with a_p = m - p, in closed form.
double pair_sum(std::span<const double> pos, std::span<const double> neg,
                double margin) {
  double sum_a = 0.0, sum_a2 = 0.0, sum_q = 0.0, sum_q2 = 0.0;
  for (double p : pos) {
    const double a = margin - p;
    sum_a += a;
    sum_a2 += a * a;
  }
  for (double q : neg) {
    sum_q += q;
    sum_q2 += q * q;
  }
  const auto np = static_cast<double>(pos.size());
  const auto nn = static_cast<double>(neg.size());
  return nn * sum_a2 + 2.0 * sum_a * sum_q + np * sum_q2;
}

void check_finite(const std::vector<double>& values, const char* name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::kDivergence, std::string("non-finite gradient in ") +
                                              name + "[" + std::to_string(i) + "]");
    }
  }
}

void momentum_update(std::vector<double>& param, const std::vector<double>& grad,
                     std::vector<double>& velocity, double lr, double momentum) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    velocity[i] = momentum * velocity[i] - lr * grad[i];
    param[i] += velocity[i];
  }
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kCE: return "CE";
    case Regime::kDAM: return "DAM";
    case Regime::kCOMAUC: return "COMAUC";
  }
  return "?";
}

std::string_view to_string(EpochLoss loss) {
  return loss == EpochLoss::kCE ? "CE" : "AUC";
}

Regime parse_regime(std::string_view text) {
  if (text == "CE" || text == "ce") return Regime::kCE;
  if (text == "DAM" || text == "dam") return Regime::kDAM;
  if (text == "COMAUC" || text == "comauc") return Regime::kCOMAUC;
  throw Error(ErrorKind::kInvalidArgument, "unknown regime '" + std::string(text) + "'");
}

EpochLoss parse_epoch_loss(std::string_view text) {
  if (text == "CE" || text == "ce") return EpochLoss::kCE;
  if (text == "AUC" || text == "auc") return EpochLoss::kAUC;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown epoch loss '" + std::string(text) + "'");
}

void LossConfig::validate() const {
  if (!(margin > 0.0) || !std::isfinite(margin)) {
    throw Error(ErrorKind::kInvalidArgument, "margin must be positive");
  }
  if (comauc_period < 1) {
    throw Error(ErrorKind::kInvalidArgument, "comauc_period must be >= 1");
  }
}

nlohmann::json to_json(const LossConfig& c) {
  return {{"regime", std::string(to_string(c.regime))},
          {"margin", c.margin},
          {"comauc_period", c.comauc_period},
          {"comauc_start", std::string(to_string(c.comauc_start))},
          {"comauc_disable_auc", c.comauc_disable_auc}};
}

LossConfig loss_config_from_json(const nlohmann::json& j) {
  LossConfig c;
  if (j.contains("regime")) c.regime = parse_regime(j.at("regime").get<std::string>());
  c.margin = j.value("margin", c.margin);
  c.comauc_period = j.value("comauc_period", c.comauc_period);
  if (j.contains("comauc_start")) {
    c.comauc_start = parse_epoch_loss(j.at("comauc_start").get<std::string>());
  }
  c.comauc_disable_auc = j.value("comauc_disable_auc", c.comauc_disable_auc);
  c.validate();
  return c;
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw Error(ErrorKind::kInvalidArgument, "batch_size must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorKind::kInvalidArgument, "learning_rate must be finite and >= 0");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "momentum must be in [0, 1)");
  }
  if (max_epochs < 1) throw Error(ErrorKind::kInvalidArgument, "max_epochs must be >= 1");
  if (patience < 1) throw Error(ErrorKind::kInvalidArgument, "patience must be >= 1");
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
          {"momentum", c.momentum},     {"max_epochs", c.max_epochs},
          {"patience", c.patience},     {"seed", c.seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.batch_size = j.value("batch_size", c.batch_size);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.momentum = j.value("momentum", c.momentum);
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.patience = j.value("patience", c.patience);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

std::vector<Example> featurize_all(std::span<const LabeledWindow> windows,
                                   const FeatureConfig& config) {
  std::vector<Example> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back({featurize(w.window, config), w.label});
  return out;
}

LossAndGrad ce_loss_and_grad(const Model& model, std::span<const Example> examples,
                             std::span<const std::size_t> batch) {
  const Forward f = forward(model, examples, batch);
  const std::size_t classes = model.num_classes();
  const auto n = static_cast<double>(f.items.size());
  std::vector<double> dz(f.z.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < f.items.size(); ++i) {
    std::span<const double> z(f.z.data() + i * classes, classes);
    const auto y = static_cast<std::size_t>(examples[f.items[i]].label);
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - zmax);
    loss += zmax + std::log(sum) - z[y];
    for (std::size_t k = 0; k < classes; ++k) {
      const double p = std::exp(z[k] - zmax) / sum;
      dz[i * classes + k] = (p - (k == y ? 1.0 : 0.0)) / n;
    }
  }
  return {loss / n, backward(model, examples, f, dz)};
}

double auc_pair_loss(std::span<const double> pos_scores,
                     std::span<const double> neg_scores, double margin) {
  if (!(margin > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "margin must be positive");
  }
  if (pos_scores.empty() || neg_scores.empty()) return 0.0;
  const double pairs =
      static_cast<double>(pos_scores.size()) * static_cast<double>(neg_scores.size());
  // The closed form can round a few ulps below zero at exact saturation.
  return std::max(0.0, pair_sum(pos_scores, neg_scores, margin) / pairs);
}

LossAndGrad auc_loss_and_grad(const Model& model, std::span<const Example> examples,
                              double margin, std::span<const std::size_t> batch) {
  if (!(margin > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "margin must be positive");
  }
  const Forward f = forward(model, examples, batch);
  const std::size_t classes = model.num_classes();
  const std::size_t n = f.items.size();

  std::vector<double> s(f.z.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = sigmoid(f.z[i]);

  std::vector<double> dz(f.z.size(), 0.0);
  std::vector<double> pos, neg;
  double loss = 0.0;
  for (std::size_t k = 0; k < classes; ++k) {
    pos.clear();
    neg.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const double score = s[i * classes + k];
      if (static_cast<std::size_t>(examples[f.items[i]].label) == k) {
        pos.push_back(score);
      } else {
        neg.push_back(score);
      }
    }
    if (pos.empty() || neg.empty()) continue;
    loss += auc_pair_loss(pos, neg, margin);

    const auto np = static_cast<double>(pos.size());
    const auto nn = static_cast<double>(neg.size());
    const double sum_pos = std::accumulate(pos.begin(), pos.end(), 0.0);
    const double sum_neg = std::accumulate(neg.begin(), neg.end(), 0.0);
    const double scale = 2.0 / (np * nn);
    for (std::size_t i = 0; i < n; ++i) {
      const double score = s[i * classes + k];
      double ds;
      if (static_cast<std::size_t>(examples[f.items[i]].label) == k) {
        ds = -scale * (nn * (margin - score) + sum_neg);
      } else {
        ds = scale * (np * (margin + score) - sum_pos);
      }
      dz[i * classes + k] = ds * score * (1.0 - score);
    }
  }
  return {loss, backward(model, examples, f, dz)};
}

EpochLoss regime_for_epoch(const LossConfig& config, int epoch) {
  if (config.regime != Regime::kCOMAUC) {
    throw Error(ErrorKind::kInvalidArgument,
                "regime_for_epoch requires the COMAUC regime");
  }
  if (epoch < 0) throw Error(ErrorKind::kInvalidArgument, "negative epoch");
  if (config.comauc_period < 1) {
    throw Error(ErrorKind::kInvalidArgument, "comauc_period must be >= 1");
  }
  if (config.comauc_disable_auc) return EpochLoss::kCE;
  const bool flipped = (epoch / config.comauc_period) % 2 == 1;
  const EpochLoss other =
      config.comauc_start == EpochLoss::kCE ? EpochLoss::kAUC : EpochLoss::kCE;
  return flipped ? other : config.comauc_start;
}

EpochLoss epoch_loss(const LossConfig& config, int epoch) {
  switch (config.regime) {
    case Regime::kCE: return EpochLoss::kCE;
    case Regime::kDAM: return EpochLoss::kAUC;
    case Regime::kCOMAUC: return regime_for_epoch(config, epoch);
  }
  return EpochLoss::kCE;
}

void sgd_step(Params& params, const Params& grad, Params& velocity, double lr,
              double momentum) {
  if (!params.same_shape(grad) || !params.same_shape(velocity)) {
    throw Error(ErrorKind::kInvalidArgument, "parameter/gradient shape mismatch");
  }
  check_finite(grad.w1, "W1");
  check_finite(grad.b1, "b1");
  check_finite(grad.head_w, "heads.w");
  check_finite(grad.head_b, "heads.c");
  momentum_update(params.w1, grad.w1, velocity.w1, lr, momentum);
  momentum_update(params.b1, grad.b1, velocity.b1, lr, momentum);
  momentum_update(params.head_w, grad.head_w, velocity.head_w, lr, momentum);
  momentum_update(params.head_b, grad.head_b, velocity.head_b, lr, momentum);
}

std::string_view to_string(StopReason reason) {
  return reason == StopReason::kMaxEpochs ? "max_epochs" : "early_stop";
}

nlohmann::json history_to_json(const TrainHistory& history) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : history.epochs) {
    out.push_back({{"epoch", e.epoch},
                   {"regime", std::string(to_string(e.regime))},
                   {"train_loss", e.train_loss},
                   {"val_f1", e.val_f1}});
  }
  return out;
}

TrainResult train(Model model, std::span<const Example> train_set,
                  std::span<const Example> val_set, const LossConfig& loss,
                  const TrainConfig& config) {
  if (train_set.empty()) throw Error(ErrorKind::kInvalidArgument, "empty training set");
  if (val_set.empty()) throw Error(ErrorKind::kInvalidArgument, "empty validation set");
  loss.validate();
  config.validate();

  const std::size_t classes = model.num_classes();
  std::vector<std::size_t> val_gold(val_set.size());
  for (std::size_t i = 0; i < val_set.size(); ++i) {
    val_gold[i] = static_cast<std::size_t>(val_set[i].label);
  }
  auto validate = [&](const Model& m) {
    std::vector<std::size_t> preds(val_set.size());
    for (std::size_t i = 0; i < val_set.size(); ++i) {
      preds[i] = argmax(logits(m, val_set[i].features));
    }
    return f1_macro(confusion(preds, val_gold, classes));
  };

  TrainResult result{model, {}};
  double best_f1 = -std::numeric_limits<double>::infinity();
  int stale = 0;
  Params velocity = model.params.zeros_like();
  Rng rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  result.history.stop_reason = StopReason::kMaxEpochs;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const EpochLoss which = epoch_loss(loss, epoch);
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t first = 0; first < order.size(); first += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, order.size() - first);
      std::span<const std::size_t> batch(order.data() + first, count);
      LossAndGrad lg = which == EpochLoss::kCE
                           ? ce_loss_and_grad(model, train_set, batch)
                           : auc_loss_and_grad(model, train_set, loss.margin, batch);
      if (!std::isfinite(lg.loss)) {
        throw Error(ErrorKind::kDivergence,
                    "non-finite loss at epoch " + std::to_string(epoch));
      }
      try {
        sgd_step(model.params, lg.grad, velocity, config.learning_rate,
                 config.momentum);
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " at epoch " +
                                  std::to_string(epoch));
      }
      loss_sum += lg.loss;
      ++batches;
    }
    const double val_f1 = validate(model);
    result.history.epochs.push_back(
        {epoch, which, loss_sum / static_cast<double>(batches), val_f1});
    if (val_f1 > best_f1 + 1e-6) {
      best_f1 = val_f1;
      stale = 0;
      result.model = model;
      result.history.best_epoch = epoch;
    } else if (++stale >= config.patience) {
      result.history.stop_reason = StopReason::kEarlyStop;
      break;
    }
  }
  return result;
}

}  // namespace auctag
