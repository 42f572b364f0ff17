#include "coevo/classify/features.hpp"

#include <algorithm>

namespace coevo::classify {

int FeatureVector::change_count(distill::ChangeType type) const {
    auto k = static_cast<std::size_t>(type);
    return k < change_type_counts.size() ? change_type_counts[k] : 0;
}

FeatureVector extract_features(std::string_view message, std::span<const distill::SourceChange> changes,
                               const Vocabulary& vocab) {
    FeatureVector f;
    for (const auto& w : vocab.words) f.keyword_counts.emplace(w, 0);
    for (const auto& token : tokenize_message(message)) {
        auto it = f.keyword_counts.find(token);
        if (it != f.keyword_counts.end()) ++it->second;
    }
    for (const auto& c : changes) {
        auto k = static_cast<std::size_t>(c.change_type);
        if (k < f.change_type_counts.size()) ++f.change_type_counts[k];
    }
    return f;
}

std::vector<std::string> feature_names(const Vocabulary& vocab) {
    std::vector<std::string> names;
    for (const auto& w : vocab.words) names.push_back("word:" + w);
    for (auto t : distill::modeled_change_types()) names.emplace_back(distill::to_string(t));
    return names;
}

std::vector<double> to_row(const FeatureVector& features) {
    std::vector<double> row;
    row.reserve(features.keyword_counts.size() + features.change_type_counts.size());
    for (const auto& [word, count] : features.keyword_counts) row.push_back(count);
    for (int c : features.change_type_counts) row.push_back(c);
    return row;
}

}  // namespace coevo::classify
