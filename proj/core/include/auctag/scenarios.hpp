#ifndef AUCTAG_SCENARIOS_HPP_
#define AUCTAG_SCENARIOS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "auctag/corpus.hpp"
#include "auctag/error.hpp"
#include "auctag/random.hpp"

namespace auctag {

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const SplitSpec& spec);
SplitSpec split_spec_from_json(const nlohmann::json& j);

enum class ScenarioKind {
  kLowResource,
  kImbalanceTrainShift,
  kImbalanceTrainTestShift,
};

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view text);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kLowResource;
  std::vector<std::size_t> sizes = {25, 50, 100, 200, 400, 800};
  std::vector<double> ratios = {0.01, 0.05, 0.10, 0.20, 0.40, 0.60, 0.80};
  std::string target_class = "FP";
  std::size_t partitions_per_condition = 10;
  std::size_t train_n = 100;
  std::size_t test_n = 50;

  void validate() const;
};

nlohmann::json to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_spec_from_json(const nlohmann::json& j);

// Whole sessions go to one side; train receives round(fraction * S) sessions.
std::pair<Corpus, Corpus> split_sessions(const Corpus& corpus, const SplitSpec& spec);

// round-half-up, with a floor of one positive.
std::size_t positive_count(double ratio, std::size_t n);

// Uniform sample of `size` items without replacement, in draw order.
template <typename T>
std::vector<T> sample_low_resource(std::span<const T> pool, std::size_t size,
                                   std::uint64_t seed) {
  if (size == 0) {
    throw Error(ErrorKind::kInvalidArgument, "sample size must be positive");
  }
  if (size > pool.size()) {
    throw Error(ErrorKind::kShortfall,
                "sample size " + std::to_string(size) + " exceeds pool of " +
                    std::to_string(pool.size()));
  }
  Rng rng(seed);
  std::vector<T> out;
  out.reserve(size);
  for (std::size_t i : rng.sample_indices(pool.size(), size)) out.push_back(pool[i]);
  return out;
}

// Exactly positive_count(ratio, n) items labeled 1 and the rest labeled 0,
// sampled without replacement and shuffled.
template <typename T>
std::vector<T> make_imbalanced(std::span<const T> pool, double ratio, std::size_t n,
                               std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "ratio must lie in (0, 1)");
  }
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "n must be positive");
  const std::size_t want_pos = positive_count(ratio, n);
  const std::size_t want_neg = n - want_pos;
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    (pool[i].label == 1 ? pos : neg).push_back(i);
  }
  if (pos.size() < want_pos) {
    throw Error(ErrorKind::kShortfall,
                "insufficient positives: need " + std::to_string(want_pos) +
                    ", pool has " + std::to_string(pos.size()) + " (shortfall " +
                    std::to_string(want_pos - pos.size()) + ")");
  }
  if (neg.size() < want_neg) {
    throw Error(ErrorKind::kShortfall,
                "insufficient negatives: need " + std::to_string(want_neg) +
                    ", pool has " + std::to_string(neg.size()) + " (shortfall " +
                    std::to_string(want_neg - neg.size()) + ")");
  }
  Rng rng(seed);
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i : rng.sample_indices(pos.size(), want_pos)) out.push_back(pool[pos[i]]);
  for (std::size_t i : rng.sample_indices(neg.size(), want_neg)) out.push_back(pool[neg[i]]);
  rng.shuffle(out);
  return out;
}

// {"not_<target>", target}: class 1 is the target.
LabelSet binary_label_set(std::string_view target_class);

// Maps labels to 1 for the target class and 0 otherwise; order preserved.
std::vector<LabeledWindow> binarize(std::span<const LabeledWindow> windows,
                                    const LabelSet& label_set,
                                    std::string_view target_class);

template <typename T>
struct ConditionData {
  std::vector<T> train;
  std::vector<T> test;
};

template <typename T>
ConditionData<T> build_condition(std::span<const T> train_pool,
                                 std::span<const T> test_pool,
                                 const ScenarioSpec& spec, double ratio,
                                 std::uint64_t seed) {
  ConditionData<T> out;
  switch (spec.kind) {
    case ScenarioKind::kImbalanceTrainShift:
      out.train = make_imbalanced(train_pool, ratio, spec.train_n, mix_seed(seed, 1));
      out.test.assign(test_pool.begin(), test_pool.end());
      break;
    case ScenarioKind::kImbalanceTrainTestShift:
      out.train = make_imbalanced(train_pool, ratio, spec.train_n, mix_seed(seed, 1));
      out.test = make_imbalanced(test_pool, ratio, spec.test_n, mix_seed(seed, 2));
      break;
    case ScenarioKind::kLowResource:
      throw Error(ErrorKind::kInvalidArgument,
                  "build_condition needs an imbalance scenario kind");
  }
  return out;
}

struct SynthSpec {
  std::size_t n_sessions = 50;
  std::size_t sentences_per_session = 60;
  std::size_t num_classes = 8;
  // Empty means uniform.
  std::vector<double> class_priors;
  double separability = 0.7;
  std::size_t vocab_size = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const nlohmann::json& j);

// Labels follow the class priors; each token comes from the label's private
// vocabulary with probability `separability`, otherwise from a shared one.
Corpus synth_corpus(const SynthSpec& spec);

// Writes <name>.jsonl (current sentence of each window, labels as codes of
// `labels`) and <name>.manifest.json.
void export_condition(std::span<const LabeledWindow> windows, const LabelSet& labels,
                      const std::filesystem::path& dir, const std::string& name,
                      const nlohmann::json& manifest);

}  // namespace auctag

#endif  // AUCTAG_SCENARIOS_HPP_
