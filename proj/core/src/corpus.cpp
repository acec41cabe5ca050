#include "auctag/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "auctag/error.hpp"

namespace auctag {
namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

std::string at_line(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

Sentence sentence_from_json(const nlohmann::json& j, std::size_t line) {
  if (!j.is_object()) {
    throw Error(ErrorKind::kParse, at_line(line) + "expected a JSON object");
  }
  auto require = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end()) {
      throw Error(ErrorKind::kParse,
                  at_line(line) + "missing key '" + key + "'");
    }
    return *it;
  };
  auto index = [&](const char* key) -> std::uint32_t {
    const auto& v = require(key);
    if (!v.is_number_unsigned() &&
        !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw Error(ErrorKind::kParse, at_line(line) + "'" + key +
                                         "' must be a non-negative integer");
    }
    return v.get<std::uint32_t>();
  };

  Sentence s;
  const auto& session = require("session_id");
  if (!session.is_string()) {
    throw Error(ErrorKind::kParse, at_line(line) + "'session_id' must be a string");
  }
  s.session_id = session.get<std::string>();
  s.turn_index = index("turn_index");
  s.sentence_index = index("sentence_index");
  const auto& speaker = require("speaker");
  if (!speaker.is_string()) {
    throw Error(ErrorKind::kParse, at_line(line) + "'speaker' must be a string");
  }
  try {
    s.speaker = parse_speaker(speaker.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, at_line(line) + e.what());
  }
  const auto& text = require("text");
  if (!text.is_string()) {
    throw Error(ErrorKind::kParse, at_line(line) + "'text' must be a string");
  }
  s.text = text.get<std::string>();
  auto label = j.find("label");
  if (label != j.end() && !label->is_null()) {
    if (!label->is_string()) {
      throw Error(ErrorKind::kParse,
                  at_line(line) + "'label' must be a string or null");
    }
    s.label = label->get<std::string>();
  }
  return s;
}

}  // namespace

std::string_view to_string(Speaker speaker) {
  return speaker == Speaker::kTutor ? "tutor" : "student";
}

Speaker parse_speaker(std::string_view text) {
  if (text == "tutor") return Speaker::kTutor;
  if (text == "student") return Speaker::kStudent;
  throw Error(ErrorKind::kParse, "unknown speaker '" + std::string(text) + "'");
}

LabelSet::LabelSet(std::vector<std::string> codes) : codes_(std::move(codes)) {
  if (codes_.size() < 2) {
    throw Error(ErrorKind::kValidation, "label set needs at least 2 codes");
  }
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (codes_[i].empty()) {
      throw Error(ErrorKind::kValidation, "empty label code");
    }
    if (!index_.emplace(codes_[i], static_cast<int>(i)).second) {
      throw Error(ErrorKind::kValidation,
                  "duplicate label code '" + codes_[i] + "'");
    }
  }
}

bool LabelSet::contains(std::string_view code) const {
  return index_.find(std::string(code)) != index_.end();
}

int LabelSet::index_of(std::string_view code) const {
  auto it = index_.find(std::string(code));
  if (it == index_.end()) {
    throw Error(ErrorKind::kValidation,
                "unknown label code '" + std::string(code) + "'");
  }
  return it->second;
}

LabelSet default_label_set() { return default_label_set(31); }

LabelSet default_label_set(std::size_t k) {
  std::vector<std::string> codes = {"FP", "NF", "ACK"};
  for (std::size_t i = codes.size() + 1; codes.size() < 31; ++i) {
    codes.push_back((i < 10 ? "DA0" : "DA") + std::to_string(i));
  }
  if (k <= codes.size()) {
    codes.resize(k);
  } else {
    for (std::size_t i = codes.size(); i < k; ++i) {
      codes.push_back("C" + std::to_string(i));
    }
  }
  return LabelSet(std::move(codes));
}

LabelSet load_label_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open label set '" + path.string() + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, "label set: " + std::string(e.what()));
  }
  if (!j.is_array()) {
    throw Error(ErrorKind::kParse, "label set must be a JSON array of strings");
  }
  std::vector<std::string> codes;
  for (const auto& v : j) {
    if (!v.is_string()) {
      throw Error(ErrorKind::kParse, "label set must be a JSON array of strings");
    }
    codes.push_back(v.get<std::string>());
  }
  return LabelSet(std::move(codes));
}

void save_label_set(const LabelSet& labels, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  }
  out << nlohmann::json(labels.codes()).dump() << '\n';
}

Corpus make_corpus(std::vector<Sentence> sentences, LabelSet label_set) {
  std::map<std::string, std::size_t> session_rank;
  Corpus corpus;
  for (const auto& s : sentences) {
    if (is_blank(s.text)) {
      throw Error(ErrorKind::kValidation, "empty text in session '" +
                                              s.session_id + "'");
    }
    if (s.label && !label_set.contains(*s.label)) {
      throw Error(ErrorKind::kValidation,
                  "unknown label code '" + *s.label + "'");
    }
    if (session_rank.emplace(s.session_id, corpus.sessions.size()).second) {
      corpus.sessions.push_back(s.session_id);
    }
  }
  auto key = [&](const Sentence& s) {
    return std::make_tuple(session_rank.at(s.session_id), s.turn_index,
                           s.sentence_index);
  };
  std::stable_sort(sentences.begin(), sentences.end(),
                   [&](const Sentence& a, const Sentence& b) {
                     return key(a) < key(b);
                   });
  for (std::size_t i = 1; i < sentences.size(); ++i) {
    if (key(sentences[i - 1]) == key(sentences[i])) {
      const auto& s = sentences[i];
      throw Error(ErrorKind::kValidation,
                  "duplicate key (" + s.session_id + ", " +
                      std::to_string(s.turn_index) + ", " +
                      std::to_string(s.sentence_index) + ")");
    }
  }
  corpus.sentences = std::move(sentences);
  corpus.label_set = std::move(label_set);
  return corpus;
}

Corpus parse_corpus(std::istream& in, const LabelSet& label_set) {
  std::vector<Sentence> sentences;
  std::set<std::tuple<std::string, std::uint32_t, std::uint32_t>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorKind::kParse, at_line(line_no) + "malformed JSON");
    }
    Sentence s = sentence_from_json(j, line_no);
    if (s.label && !label_set.contains(*s.label)) {
      throw Error(ErrorKind::kValidation, at_line(line_no) +
                                              "unknown label code '" +
                                              *s.label + "'");
    }
    if (is_blank(s.text)) {
      throw Error(ErrorKind::kValidation, at_line(line_no) + "empty text");
    }
    if (!seen.emplace(s.session_id, s.turn_index, s.sentence_index).second) {
      throw Error(ErrorKind::kValidation,
                  at_line(line_no) + "duplicate key (" + s.session_id + ", " +
                      std::to_string(s.turn_index) + ", " +
                      std::to_string(s.sentence_index) + ")");
    }
    sentences.push_back(std::move(s));
  }
  if (sentences.empty()) {
    throw Error(ErrorKind::kValidation, "corpus file has no sentences");
  }
  return make_corpus(std::move(sentences), label_set);
}

Corpus load_corpus(const std::filesystem::path& path, const LabelSet& label_set) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open corpus '" + path.string() + "'");
  }
  return parse_corpus(in, label_set);
}

nlohmann::json sentence_to_json(const Sentence& s) {
  nlohmann::json out = {
      {"session_id", s.session_id},
      {"turn_index", s.turn_index},
      {"sentence_index", s.sentence_index},
      {"speaker", std::string(to_string(s.speaker))},
      {"text", s.text},
      {"label", s.label ? nlohmann::json(*s.label) : nlohmann::json(nullptr)},
  };
  return out;
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& s : corpus.sentences) {
    out << sentence_to_json(s).dump() << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  }
  write_corpus(corpus, out);
}

std::vector<LabeledWindow> build_context_windows(const Corpus& corpus,
                                                 bool labeled_only) {
  std::vector<LabeledWindow> windows;
  const auto& ss = corpus.sentences;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const Sentence& cur = ss[i];
    if (labeled_only && !cur.label) continue;
    LabeledWindow w;
    w.window.current = cur;
    if (i >= 1 && ss[i - 1].session_id == cur.session_id) {
      w.window.prev1 = ss[i - 1];
      if (i >= 2 && ss[i - 2].session_id == cur.session_id) {
        w.window.prev2 = ss[i - 2];
      }
    }
    w.label = cur.label ? corpus.label_set.index_of(*cur.label) : kNoLabel;
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace auctag
