#include "auctag/scenarios.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

namespace auctag {
namespace {

std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

}  // namespace

nlohmann::json to_json(const SplitSpec& spec) {
  return {{"train_fraction", spec.train_fraction}, {"seed", spec.seed}};
}

SplitSpec split_spec_from_json(const nlohmann::json& j) {
  SplitSpec s;
  s.train_fraction = j.value("train_fraction", s.train_fraction);
  s.seed = j.value("seed", s.seed);
  if (!(s.train_fraction > 0.0 && s.train_fraction < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "train_fraction must lie in (0, 1)");
  }
  return s;
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kLowResource: return "low_resource";
    case ScenarioKind::kImbalanceTrainShift: return "imbalance_train_shift";
    case ScenarioKind::kImbalanceTrainTestShift: return "imbalance_train_test_shift";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "low_resource") return ScenarioKind::kLowResource;
  if (text == "imbalance_train_shift") return ScenarioKind::kImbalanceTrainShift;
  if (text == "imbalance_train_test_shift") return ScenarioKind::kImbalanceTrainTestShift;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown scenario kind '" + std::string(text) + "'");
}

void ScenarioSpec::validate() const {
  if (kind == ScenarioKind::kLowResource) {
    if (sizes.empty()) throw Error(ErrorKind::kInvalidArgument, "sizes is empty");
    for (auto s : sizes) {
      if (s == 0) throw Error(ErrorKind::kInvalidArgument, "sizes must be positive");
    }
  } else {
    if (ratios.empty()) throw Error(ErrorKind::kInvalidArgument, "ratios is empty");
    for (double r : ratios) {
      if (!(r > 0.0 && r < 1.0)) {
        throw Error(ErrorKind::kInvalidArgument, "ratios must lie in (0, 1)");
      }
    }
    if (target_class.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "target_class is empty");
    }
  }
  if (partitions_per_condition == 0 || train_n == 0 || test_n == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "partitions_per_condition, train_n and test_n must be positive");
  }
}

nlohmann::json to_json(const ScenarioSpec& s) {
  return {{"kind", std::string(to_string(s.kind))},
          {"sizes", s.sizes},
          {"ratios", s.ratios},
          {"target_class", s.target_class},
          {"partitions_per_condition", s.partitions_per_condition},
          {"train_n", s.train_n},
          {"test_n", s.test_n}};
}

ScenarioSpec scenario_spec_from_json(const nlohmann::json& j) {
  ScenarioSpec s;
  if (j.contains("kind")) s.kind = parse_scenario_kind(j.at("kind").get<std::string>());
  s.sizes = j.value("sizes", s.sizes);
  s.ratios = j.value("ratios", s.ratios);
  s.target_class = j.value("target_class", s.target_class);
  s.partitions_per_condition = j.value("partitions_per_condition", s.partitions_per_condition);
  s.train_n = j.value("train_n", s.train_n);
  s.test_n = j.value("test_n", s.test_n);
  s.validate();
  return s;
}

std::pair<Corpus, Corpus> split_sessions(const Corpus& corpus, const SplitSpec& spec) {
  const std::size_t sessions = corpus.sessions.size();
  if (sessions < 2) {
    throw Error(ErrorKind::kInvalidArgument, "split needs at least 2 sessions");
  }
  const std::size_t n_train =
      round_half_up(spec.train_fraction * static_cast<double>(sessions));
  if (n_train < 1 || n_train >= sessions) {
    throw Error(ErrorKind::kInvalidArgument,
                "train fraction leaves one side without sessions");
  }
  std::vector<std::size_t> order(sessions);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  rng.shuffle(order);
  std::set<std::string> train_ids;
  for (std::size_t i = 0; i < n_train; ++i) train_ids.insert(corpus.sessions[order[i]]);

  Corpus train, test;
  train.label_set = test.label_set = corpus.label_set;
  for (const auto& id : corpus.sessions) {
    (train_ids.count(id) ? train : test).sessions.push_back(id);
  }
  for (const auto& s : corpus.sentences) {
    (train_ids.count(s.session_id) ? train : test).sentences.push_back(s);
  }
  return {std::move(train), std::move(test)};
}

std::size_t positive_count(double ratio, std::size_t n) {
  return std::max<std::size_t>(1, round_half_up(ratio * static_cast<double>(n)));
}

LabelSet binary_label_set(std::string_view target_class) {
  return LabelSet({"not_" + std::string(target_class), std::string(target_class)});
}

std::vector<LabeledWindow> binarize(std::span<const LabeledWindow> windows,
                                    const LabelSet& label_set,
                                    std::string_view target_class) {
  const int target = label_set.index_of(target_class);
  std::vector<LabeledWindow> out(windows.begin(), windows.end());
  for (auto& w : out) w.label = w.label == target ? 1 : 0;
  return out;
}

void SynthSpec::validate() const {
  if (n_sessions < 1 || sentences_per_session < 1) {
    throw Error(ErrorKind::kInvalidArgument, "synthetic corpus must be non-empty");
  }
  if (num_classes < 2) throw Error(ErrorKind::kInvalidArgument, "need K >= 2");
  if (vocab_size < 1) throw Error(ErrorKind::kInvalidArgument, "vocab_size must be >= 1");
  if (!(separability >= 0.0 && separability <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "separability must lie in [0, 1]");
  }
  if (!class_priors.empty()) {
    if (class_priors.size() != num_classes) {
      throw Error(ErrorKind::kInvalidArgument, "class_priors must have K entries");
    }
    double sum = 0.0;
    for (double p : class_priors) {
      if (!(p >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "negative prior");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorKind::kInvalidArgument, "class_priors must sum to 1");
    }
  }
}

nlohmann::json to_json(const SynthSpec& s) {
  return {{"n_sessions", s.n_sessions},
          {"sentences_per_session", s.sentences_per_session},
          {"num_classes", s.num_classes},
          {"class_priors", s.class_priors},
          {"separability", s.separability},
          {"vocab_size", s.vocab_size},
          {"seed", s.seed}};
}

SynthSpec synth_spec_from_json(const nlohmann::json& j) {
  SynthSpec s;
  s.n_sessions = j.value("n_sessions", s.n_sessions);
  s.sentences_per_session = j.value("sentences_per_session", s.sentences_per_session);
  s.num_classes = j.value("num_classes", s.num_classes);
  s.class_priors = j.value("class_priors", s.class_priors);
  s.separability = j.value("separability", s.separability);
  s.vocab_size = j.value("vocab_size", s.vocab_size);
  s.seed = j.value("seed", s.seed);
  s.validate();
  return s;
}

Corpus synth_corpus(const SynthSpec& spec) {
  spec.validate();
  std::vector<double> cdf(spec.num_classes);
  if (spec.class_priors.empty()) {
    for (std::size_t k = 0; k < cdf.size(); ++k) {
      cdf[k] = static_cast<double>(k + 1) / static_cast<double>(cdf.size());
    }
  } else {
    std::partial_sum(spec.class_priors.begin(), spec.class_priors.end(), cdf.begin());
  }
  LabelSet labels = default_label_set(spec.num_classes);
  Rng rng(spec.seed);

  std::vector<Sentence> sentences;
  sentences.reserve(spec.n_sessions * spec.sentences_per_session);
  char session_id[32];
  for (std::size_t s = 0; s < spec.n_sessions; ++s) {
    std::snprintf(session_id, sizeof session_id, "s%04zu", s);
    std::uint32_t turn = 0, in_turn = 0;
    for (std::size_t i = 0; i < spec.sentences_per_session; ++i) {
      if (i > 0) {
        if (rng.uniform01() < 0.5) {
          ++turn;
          in_turn = 0;
        } else {
          ++in_turn;
        }
      }
      const double u = rng.uniform01();
      std::size_t label = 0;
      while (label + 1 < cdf.size() && u >= cdf[label]) ++label;

      const std::size_t length = 4 + rng.uniform_index(7);
      std::string text;
      for (std::size_t t = 0; t < length; ++t) {
        if (t) text.push_back(' ');
        const bool own = rng.uniform01() < spec.separability;
        const std::size_t word = rng.uniform_index(spec.vocab_size);
        if (own) text += "c" + std::to_string(label) + "w" + std::to_string(word);
        else text += "w" + std::to_string(word);
      }
      Sentence sentence;
      sentence.session_id = session_id;
      sentence.turn_index = turn;
      sentence.sentence_index = in_turn;
      sentence.speaker = turn % 2 == 0 ? Speaker::kTutor : Speaker::kStudent;
      sentence.text = std::move(text);
      sentence.label = labels.code(label);
      sentences.push_back(std::move(sentence));
    }
  }
  return make_corpus(std::move(sentences), std::move(labels));
}

void export_condition(std::span<const LabeledWindow> windows, const LabelSet& labels,
                      const std::filesystem::path& dir, const std::string& name,
                      const nlohmann::json& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto jsonl = dir / (name + ".jsonl");
  std::ofstream out(jsonl);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + jsonl.string() + "'");
  for (const auto& w : windows) {
    Sentence s = w.window.current;
    s.label = w.label == kNoLabel ? std::nullopt
                                  : std::optional<std::string>(labels.code(
                                        static_cast<std::size_t>(w.label)));
    out << sentence_to_json(s).dump() << '\n';
  }
  const auto side = dir / (name + ".manifest.json");
  std::ofstream mf(side);
  if (!mf) throw Error(ErrorKind::kIo, "cannot write '" + side.string() + "'");
  mf << manifest.dump(2) << '\n';
}

}  // namespace auctag
