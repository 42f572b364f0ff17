#include "coevo/classify/vocabulary.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "coevo/error.hpp"

namespace coevo::classify {

namespace {

constexpr std::array<std::string_view, 124> kStopWords{
    "a",       "about",   "above",  "after",   "again",   "against", "all",     "also",    "am",     "an",
    "and",     "any",     "are",    "as",      "at",      "be",      "because", "been",    "before", "being",
    "below",   "between", "both",   "but",     "by",      "can",     "could",   "did",     "do",     "does",
    "doing",   "down",    "during", "each",    "etc",     "few",     "for",     "from",    "further", "had",
    "has",     "have",    "having", "he",      "her",     "here",    "hers",    "herself", "him",    "himself",
    "his",     "how",     "i",      "if",      "in",      "into",    "is",      "it",      "its",    "itself",
    "just",    "me",      "more",   "most",    "my",      "myself",  "no",      "nor",     "not",    "now",
    "of",      "off",     "on",     "once",    "only",    "or",      "other",   "our",     "ours",   "ourselves",
    "out",     "over",    "own",    "same",    "she",     "should",  "so",      "some",    "such",   "than",
    "that",    "the",     "their",  "theirs",  "them",    "themselves", "then", "there",   "these",  "they",
    "this",    "those",   "through", "to",     "too",     "under",   "until",   "up",      "very",   "via",
    "was",     "we",      "were",   "what",    "when",    "where",   "which",   "while",   "who",    "whom",
    "why",     "will",    "with",   "would",
};

}  // namespace

bool is_stop_word(std::string_view word) {
    return std::find(kStopWords.begin(), kStopWords.end(), word) != kStopWords.end();
}

std::vector<std::string> tokenize_message(std::string_view message) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && !is_stop_word(current)) out.push_back(current);
        current.clear();
    };
    for (char ch : message) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

Vocabulary build_vocabulary(std::span<const LabeledMessage> ground_truth) {
    if (ground_truth.empty()) throw InvalidInput("ground truth is empty");
    std::array<std::map<std::string, long>, 3> counts;
    std::array<std::size_t, 3> messages{};
    for (const auto& entry : ground_truth) {
        auto k = index_of(entry.label);
        ++messages[k];
        for (auto& w : tokenize_message(entry.message)) ++counts[k][w];
    }
    for (auto a : kActivities) {
        if (messages[index_of(a)] == 0) {
            throw InvalidInput("ground truth has no " + std::string(to_string(a)) + " commits");
        }
    }
    Vocabulary vocab;
    std::set<std::string> all;
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<std::pair<std::string, long>> ranked(counts[k].begin(), counts[k].end());
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& l, const auto& r) { return l.second > r.second; });
        for (std::size_t i = 0; i < ranked.size() && i < kWordsPerActivity; ++i) {
            vocab.top_words[k].push_back(ranked[i].first);
            all.insert(ranked[i].first);
        }
    }
    vocab.words.assign(all.begin(), all.end());
    return vocab;
}

}  // namespace coevo::classify
