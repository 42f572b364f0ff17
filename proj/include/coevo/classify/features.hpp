#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/classify/vocabulary.hpp"
#include "coevo/distill/change.hpp"

namespace coevo::classify {

struct FeatureVector {
    std::map<std::string, int> keyword_counts;  // one entry per vocabulary word
    std::array<int, distill::kModeledChangeTypeCount> change_type_counts{};

    int change_count(distill::ChangeType type) const;
    bool operator==(const FeatureVector&) const = default;
};

// Keyword counts of `message` over the vocabulary, and per-type counts of the
// supplied changes (callers pass production-code changes only). Unclassified
// changes are not counted.
FeatureVector extract_features(std::string_view message, std::span<const distill::SourceChange> changes,
                               const Vocabulary& vocab);

// Column names: "word:<w>" for each vocabulary word, then the change type names.
std::vector<std::string> feature_names(const Vocabulary& vocab);

// Flattened in feature_names order.
std::vector<double> to_row(const FeatureVector& features);

}  // namespace coevo::classify
