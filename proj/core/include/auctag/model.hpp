#ifndef AUCTAG_MODEL_HPP_
#define AUCTAG_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "auctag/corpus.hpp"
#include "auctag/features.hpp"

namespace auctag {

// Trainable parameters. The same shape doubles as a gradient or a velocity
// buffer.
struct Params {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> w1;      // hidden_dim x input_dim, row-major
  std::vector<double> b1;      // hidden_dim
  std::vector<double> head_w;  // num_classes x hidden_dim, row-major
  std::vector<double> head_b;  // num_classes

  static Params zeros(std::size_t input_dim, std::size_t hidden_dim,
                      std::size_t num_classes);
  Params zeros_like() const { return zeros(input_dim, hidden_dim, num_classes); }
  bool same_shape(const Params& other) const;
  void set_zero();

  bool operator==(const Params&) const = default;
};

struct Model {
  LabelSet label_set;
  FeatureConfig features;
  Params params;

  std::size_t num_classes() const { return params.num_classes; }
  std::size_t hidden_dim() const { return params.hidden_dim; }

  bool operator==(const Model&) const = default;
};

enum class ScoreMode { kOva, kSoftmax };

std::string_view to_string(ScoreMode mode);
ScoreMode parse_score_mode(std::string_view text);

// W1 ~ U[-a, a] with a = sqrt(6 / (d_f + hidden_dim)); everything else zero.
Model init_model(const LabelSet& label_set, std::size_t hidden_dim,
                 const FeatureConfig& features, std::uint64_t seed);

// rectifier(W1 x + b1).
std::vector<double> encode(const Model& model, const FeatureVector& fv);

double class_logit(const Model& model, std::span<const double> latent,
                   std::size_t k);
std::vector<double> logits(const Model& model, std::span<const double> latent);
std::vector<double> logits(const Model& model, const FeatureVector& fv);

double sigmoid(double z);
// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> z);
// Lowest index wins ties.
std::size_t argmax(std::span<const double> v);

std::vector<double> predict_proba_ova(const Model& model, const FeatureVector& fv);
std::vector<double> predict_proba_ova(const Model& model,
                                      const ContextWindow& window);
std::vector<double> predict_proba_softmax(const Model& model,
                                          const FeatureVector& fv);
std::vector<double> predict_proba_softmax(const Model& model,
                                          const ContextWindow& window);
std::vector<double> predict_proba(const Model& model, const FeatureVector& fv,
                                  ScoreMode mode);

std::size_t predict_label(const Model& model, const FeatureVector& fv,
                          ScoreMode mode);
std::size_t predict_label(const Model& model, const ContextWindow& window,
                          ScoreMode mode);

inline constexpr int kCheckpointVersion = 1;

nlohmann::json checkpoint_to_json(const Model& model);
Model checkpoint_from_json(const nlohmann::json& j);
void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace auctag

#endif  // AUCTAG_MODEL_HPP_
