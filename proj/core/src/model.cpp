#include "auctag/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "auctag/error.hpp"
#include "auctag/random.hpp"

namespace auctag {

Params Params::zeros(std::size_t input_dim, std::size_t hidden_dim,
                     std::size_t num_classes) {
  Params p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.num_classes = num_classes;
  p.w1.assign(hidden_dim * input_dim, 0.0);
  p.b1.assign(hidden_dim, 0.0);
  p.head_w.assign(num_classes * hidden_dim, 0.0);
  p.head_b.assign(num_classes, 0.0);
  return p;
}

bool Params::same_shape(const Params& o) const {
  return input_dim == o.input_dim && hidden_dim == o.hidden_dim &&
         num_classes == o.num_classes && w1.size() == o.w1.size() &&
         b1.size() == o.b1.size() && head_w.size() == o.head_w.size() &&
         head_b.size() == o.head_b.size();
}

void Params::set_zero() {
  std::fill(w1.begin(), w1.end(), 0.0);
  std::fill(b1.begin(), b1.end(), 0.0);
  std::fill(head_w.begin(), head_w.end(), 0.0);
  std::fill(head_b.begin(), head_b.end(), 0.0);
}

std::string_view to_string(ScoreMode mode) {
  return mode == ScoreMode::kOva ? "ova" : "softmax";
}

ScoreMode parse_score_mode(std::string_view text) {
  if (text == "ova") return ScoreMode::kOva;
  if (text == "softmax") return ScoreMode::kSoftmax;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown score mode '" + std::string(text) + "'");
}

Model init_model(const LabelSet& label_set, std::size_t hidden_dim,
                 const FeatureConfig& features, std::uint64_t seed) {
  if (hidden_dim < 1) {
    throw Error(ErrorKind::kInvalidArgument, "hidden_dim must be >= 1");
  }
  if (label_set.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "label set needs K >= 2");
  }
  features.validate();
  Model m;
  m.label_set = label_set;
  m.features = features;
  m.params = Params::zeros(features.dim, hidden_dim, label_set.size());
  const double a =
      std::sqrt(6.0 / static_cast<double>(features.dim + hidden_dim));
  Rng rng(seed);
  for (auto& w : m.params.w1) w = rng.uniform(-a, a);
  return m;
}

std::vector<double> encode(const Model& model, const FeatureVector& fv) {
  const Params& p = model.params;
  if (fv.dimension != p.input_dim) {
    throw Error(ErrorKind::kInvalidArgument,
                "feature dimension " + std::to_string(fv.dimension) +
                    " does not match model input " + std::to_string(p.input_dim));
  }
  std::vector<double> h(p.b1);
  for (std::size_t r = 0; r < p.hidden_dim; ++r) {
    const double* row = p.w1.data() + r * p.input_dim;
    double acc = h[r];
    for (const auto& e : fv.entries) acc += row[e.index] * e.value;
    h[r] = acc > 0.0 ? acc : 0.0;
  }
  return h;
}

double class_logit(const Model& model, std::span<const double> latent,
                   std::size_t k) {
  const Params& p = model.params;
  if (k >= p.num_classes) {
    throw Error(ErrorKind::kInvalidArgument,
                "class index " + std::to_string(k) + " out of range [0, " +
                    std::to_string(p.num_classes) + ")");
  }
  if (latent.size() != p.hidden_dim) {
    throw Error(ErrorKind::kInvalidArgument, "latent size mismatch");
  }
  const double* w = p.head_w.data() + k * p.hidden_dim;
  double z = p.head_b[k];
  for (std::size_t j = 0; j < p.hidden_dim; ++j) z += w[j] * latent[j];
  return z;
}

std::vector<double> logits(const Model& model, std::span<const double> latent) {
  std::vector<double> z(model.params.num_classes);
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = class_logit(model, latent, k);
  return z;
}

std::vector<double> logits(const Model& model, const FeatureVector& fv) {
  return logits(model, encode(model, fv));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> p(z.size());
  if (z.empty()) return p;
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    p[k] = std::exp(z[k] - zmax);
    sum += p[k];
  }
  for (auto& v : p) v /= sum;
  return p;
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

std::vector<double> predict_proba_ova(const Model& model, const FeatureVector& fv) {
  auto z = logits(model, fv);
  for (auto& v : z) v = sigmoid(v);
  return z;
}

std::vector<double> predict_proba_ova(const Model& model,
                                      const ContextWindow& window) {
  return predict_proba_ova(model, featurize(window, model.features));
}

std::vector<double> predict_proba_softmax(const Model& model,
                                          const FeatureVector& fv) {
  return softmax(logits(model, fv));
}

std::vector<double> predict_proba_softmax(const Model& model,
                                          const ContextWindow& window) {
  return predict_proba_softmax(model, featurize(window, model.features));
}

std::vector<double> predict_proba(const Model& model, const FeatureVector& fv,
                                  ScoreMode mode) {
  return mode == ScoreMode::kOva ? predict_proba_ova(model, fv)
                                 : predict_proba_softmax(model, fv);
}

std::size_t predict_label(const Model& model, const FeatureVector& fv,
                          ScoreMode mode) {
  return argmax(predict_proba(model, fv, mode));
}

std::size_t predict_label(const Model& model, const ContextWindow& window,
                          ScoreMode mode) {
  return predict_label(model, featurize(window, model.features), mode);
}

nlohmann::json checkpoint_to_json(const Model& model) {
  const Params& p = model.params;
  nlohmann::json heads = nlohmann::json::array();
  for (std::size_t k = 0; k < p.num_classes; ++k) {
    auto first = p.head_w.begin() + static_cast<std::ptrdiff_t>(k * p.hidden_dim);
    heads.push_back({{"w", std::vector<double>(first, first + static_cast<std::ptrdiff_t>(p.hidden_dim))},
                     {"c", p.head_b[k]}});
  }
  return {{"version", kCheckpointVersion},
          {"label_set", model.label_set.codes()},
          {"feature_config", to_json(model.features)},
          {"hidden_dim", p.hidden_dim},
          {"W1", p.w1},
          {"b1", p.b1},
          {"heads", heads}};
}

Model checkpoint_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw Error(ErrorKind::kValidation,
                  "unsupported checkpoint version " + std::to_string(version));
    }
    Model m;
    m.label_set = LabelSet(j.at("label_set").get<std::vector<std::string>>());
    m.features = feature_config_from_json(j.at("feature_config"));
    const auto hidden = j.at("hidden_dim").get<std::size_t>();
    if (hidden < 1) throw Error(ErrorKind::kValidation, "hidden_dim must be >= 1");
    m.params = Params::zeros(m.features.dim, hidden, m.label_set.size());
    auto w1 = j.at("W1").get<std::vector<double>>();
    auto b1 = j.at("b1").get<std::vector<double>>();
    if (w1.size() != m.params.w1.size() || b1.size() != m.params.b1.size()) {
      throw Error(ErrorKind::kValidation, "encoder array sizes do not match");
    }
    m.params.w1 = std::move(w1);
    m.params.b1 = std::move(b1);
    const auto& heads = j.at("heads");
    if (!heads.is_array() || heads.size() != m.label_set.size()) {
      throw Error(ErrorKind::kValidation, "head count does not match label set");
    }
    for (std::size_t k = 0; k < heads.size(); ++k) {
      auto w = heads[k].at("w").get<std::vector<double>>();
      if (w.size() != hidden) {
        throw Error(ErrorKind::kValidation,
                    "head " + std::to_string(k) + " has wrong width");
      }
      std::copy(w.begin(), w.end(),
                m.params.head_w.begin() + static_cast<std::ptrdiff_t>(k * hidden));
      m.params.head_b[k] = heads[k].at("c").get<double>();
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << checkpoint_to_json(model).dump() << '\n';
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("checkpoint: ") + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace auctag
