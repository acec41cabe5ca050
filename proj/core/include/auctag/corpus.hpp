#ifndef AUCTAG_CORPUS_HPP_
#define AUCTAG_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace auctag {

enum class Speaker { kTutor, kStudent };

std::string_view to_string(Speaker speaker);
Speaker parse_speaker(std::string_view text);

struct Sentence {
  std::string session_id;
  std::uint32_t turn_index = 0;
  std::uint32_t sentence_index = 0;
  Speaker speaker = Speaker::kTutor;
  std::string text;
  std::optional<std::string> label;

  bool operator==(const Sentence&) const = default;
};

// Ordered, distinct label codes. Position defines the class index.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> codes);

  std::size_t size() const { return codes_.size(); }
  const std::vector<std::string>& codes() const { return codes_; }
  const std::string& code(std::size_t index) const { return codes_.at(index); }
  bool contains(std::string_view code) const;
  // Throws Error(kValidation) naming the code if unknown.
  int index_of(std::string_view code) const;

  bool operator==(const LabelSet& other) const { return codes_ == other.codes_; }

 private:
  std::vector<std::string> codes_;
  std::unordered_map<std::string, int> index_;
};

// The shipped 31-code dialogue-act list. Codes are opaque.
LabelSet default_label_set();
// First `k` codes of the default list, extended with "C<k>" past 31.
LabelSet default_label_set(std::size_t k);

LabelSet load_label_set(const std::filesystem::path& path);
void save_label_set(const LabelSet& labels, const std::filesystem::path& path);

struct Corpus {
  std::vector<std::string> sessions;
  // Grouped by session in `sessions` order, sorted by (turn, sentence).
  std::vector<Sentence> sentences;
  LabelSet label_set;

  std::size_t size() const { return sentences.size(); }
};

// Builds a validated corpus from sentences in arbitrary order. Sessions keep
// the order of first appearance.
Corpus make_corpus(std::vector<Sentence> sentences, LabelSet label_set);

Corpus load_corpus(const std::filesystem::path& path, const LabelSet& label_set);
Corpus parse_corpus(std::istream& in, const LabelSet& label_set);
void write_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

nlohmann::json sentence_to_json(const Sentence& sentence);

struct ContextWindow {
  Sentence current;
  std::optional<Sentence> prev1;
  std::optional<Sentence> prev2;

  bool operator==(const ContextWindow&) const = default;
};

inline constexpr int kNoLabel = -1;

struct LabeledWindow {
  ContextWindow window;
  // Class index into the label set in use, or kNoLabel.
  int label = kNoLabel;

  bool operator==(const LabeledWindow&) const = default;
};

std::vector<LabeledWindow> build_context_windows(const Corpus& corpus,
                                                 bool labeled_only);

}  // namespace auctag

#endif  // AUCTAG_CORPUS_HPP_
