#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/classify/activity.hpp"

namespace coevo::classify {

inline constexpr std::size_t kWordsPerActivity = 10;

// Lowercased alphanumeric runs of `message`, stop-words removed.
std::vector<std::string> tokenize_message(std::string_view message);

bool is_stop_word(std::string_view word);

struct LabeledMessage {
    MaintenanceActivity label = MaintenanceActivity::Corrective;
    std::string message;
};

struct Vocabulary {
    // Per activity, the most frequent words by descending count, ties lexicographic.
    std::array<std::vector<std::string>, 3> top_words;
    // Sorted union of the per-activity lists.
    std::vector<std::string> words;

    bool operator==(const Vocabulary&) const = default;
};

// Throws InvalidInput when the ground truth is empty or an activity has no messages.
Vocabulary build_vocabulary(std::span<const LabeledMessage> ground_truth);

}  // namespace coevo::classify
