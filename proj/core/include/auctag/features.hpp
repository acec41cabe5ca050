#ifndef AUCTAG_FEATURES_HPP_
#define AUCTAG_FEATURES_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "auctag/corpus.hpp"

namespace auctag {

struct FeatureConfig {
  std::size_t dim = 32768;             // power of two, >= 4
  std::vector<int> ngram_orders = {1, 2};
  std::uint64_t hash_seed = 0x5EED0F1A7C0DEULL;

  // Throws Error(kInvalidArgument) on a bad dimension or n-gram order.
  void validate() const;

  bool operator==(const FeatureConfig&) const = default;
};

nlohmann::json to_json(const FeatureConfig& config);
FeatureConfig feature_config_from_json(const nlohmann::json& j);

struct FeatureEntry {
  std::uint32_t index = 0;
  double value = 0.0;

  bool operator==(const FeatureEntry&) const = default;
};

struct FeatureVector {
  std::size_t dimension = 0;
  // Strictly increasing indices.
  std::vector<FeatureEntry> entries;

  bool operator==(const FeatureVector&) const = default;
};

enum class Slot { kCurrent = 0, kPrev1 = 1, kPrev2 = 2 };

// Half-open index range [first, second) owned by a slot.
std::pair<std::size_t, std::size_t> slot_range(Slot slot, std::size_t dim);

// Lowercase (ASCII), split on whitespace, strip ASCII punctuation at token
// edges, drop tokens that end up empty.
std::vector<std::string> tokenize(std::string_view text);

FeatureVector featurize(const ContextWindow& window, const FeatureConfig& config);

}  // namespace auctag

#endif  // AUCTAG_FEATURES_HPP_
