#include "auctag/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "auctag/error.hpp"
#include "auctag/hash.hpp"

namespace auctag {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// ASCII punctuation, independent of the C locale.
bool is_edge_punct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

// Counts n-grams of one slot into its index range, then L2-normalizes.
void add_slot(std::string_view text, Slot slot, const FeatureConfig& config,
              std::vector<FeatureEntry>& out) {
  const auto tokens = tokenize(text);
  const auto [first, last] = slot_range(slot, config.dim);
  const std::uint64_t mask = (last - first) - 1;

  std::map<std::uint32_t, double> counts;
  std::string gram;
  for (int n : config.ngram_orders) {
    const auto order = static_cast<std::size_t>(n);
    if (tokens.size() < order) continue;
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      gram.clear();
      for (std::size_t t = 0; t < order; ++t) {
        if (t) gram.push_back(' ');
        gram += tokens[i + t];
      }
      // n-gram order is folded into the seed so "a b" as a bigram never
      // aliases a unigram containing a space.
      const std::uint64_t h =
          xxh64(gram, config.hash_seed + static_cast<std::uint64_t>(order));
      counts[static_cast<std::uint32_t>(first + (h & mask))] += 1.0;
    }
  }
  double norm2 = 0.0;
  for (const auto& [_, c] : counts) norm2 += c * c;
  if (norm2 == 0.0) return;
  const double inv = 1.0 / std::sqrt(norm2);
  for (const auto& [idx, c] : counts) out.push_back({idx, c * inv});
}

}  // namespace

void FeatureConfig::validate() const {
  if (dim < 4 || (dim & (dim - 1)) != 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "feature dim must be a power of two >= 4, got " +
                    std::to_string(dim));
  }
  if (dim > (std::size_t{1} << 31)) {
    throw Error(ErrorKind::kInvalidArgument, "feature dim too large");
  }
  if (ngram_orders.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no n-gram orders configured");
  }
  for (int n : ngram_orders) {
    if (n < 1) {
      throw Error(ErrorKind::kInvalidArgument,
                  "n-gram order must be >= 1, got " + std::to_string(n));
    }
  }
}

nlohmann::json to_json(const FeatureConfig& config) {
  return {{"dim", config.dim},
          {"ngram_orders", config.ngram_orders},
          {"hash", std::string(kFeatureHashName)},
          {"hash_seed", config.hash_seed}};
}

FeatureConfig feature_config_from_json(const nlohmann::json& j) {
  FeatureConfig c;
  c.dim = j.value("dim", c.dim);
  c.ngram_orders = j.value("ngram_orders", c.ngram_orders);
  c.hash_seed = j.value("hash_seed", c.hash_seed);
  if (j.contains("hash") && j.at("hash").get<std::string>() != kFeatureHashName) {
    throw Error(ErrorKind::kValidation,
                "unsupported feature hash '" + j.at("hash").get<std::string>() +
                    "'");
  }
  c.validate();
  return c;
}

std::pair<std::size_t, std::size_t> slot_range(Slot slot, std::size_t dim) {
  switch (slot) {
    case Slot::kCurrent: return {0, dim / 2};
    case Slot::kPrev1: return {dim / 2, dim / 2 + dim / 4};
    case Slot::kPrev2: return {dim / 2 + dim / 4, dim};
  }
  return {0, 0};
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    std::size_t b = i, e = j;
    while (b < e && is_edge_punct(text[b])) ++b;
    while (e > b && is_edge_punct(text[e - 1])) --e;
    if (b < e) {
      std::string tok(text.substr(b, e - b));
      for (auto& c : tok) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      }
      tokens.push_back(std::move(tok));
    }
    i = j;
  }
  return tokens;
}

FeatureVector featurize(const ContextWindow& window, const FeatureConfig& config) {
  FeatureVector fv;
  fv.dimension = config.dim;
  // Slots are appended in ascending index-range order, so entries stay sorted.
  add_slot(window.current.text, Slot::kCurrent, config, fv.entries);
  if (window.prev1) add_slot(window.prev1->text, Slot::kPrev1, config, fv.entries);
  if (window.prev2) add_slot(window.prev2->text, Slot::kPrev2, config, fv.entries);
  return fv;
}

}  // namespace auctag
