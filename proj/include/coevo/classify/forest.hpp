#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include "json.hpp"
#include <span>
#include <string>
#include <vector>

#include "coevo/classify/activity.hpp"
#include "coevo/classify/features.hpp"
#include "coevo/classify/vocabulary.hpp"

namespace coevo::classify {

struct ForestOptions {
    int trees = 101;  // odd, so a two-way vote cannot tie
    std::uint64_t seed = 42;
    std::size_t min_examples_per_class = 5;

    bool operator==(const ForestOptions&) const = default;
};

struct TrainingExample {
    std::string commit_id;
    std::vector<double> features;
    MaintenanceActivity label = MaintenanceActivity::Corrective;
};

struct Vote {
    MaintenanceActivity label = MaintenanceActivity::Corrective;
    std::array<int, 3> counts{};
};

// Bagged Gini decision trees with floor(sqrt(F)) candidate features per split.
class RandomForest {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;   // feature value <= threshold
        int right = -1;  // feature value > threshold
        MaintenanceActivity label = MaintenanceActivity::Corrective;
        std::array<int, 3> counts{};
        bool operator==(const Node&) const = default;
    };
    using Tree = std::vector<Node>;  // node 0 is the root

    // Examples are put in canonical order before sampling, so the result does
    // not depend on their input order. Throws InvalidInput when a class has
    // fewer than options.min_examples_per_class examples.
    static RandomForest train(std::size_t feature_count, std::vector<TrainingExample> examples,
                              const ForestOptions& options);

    Vote vote(std::span<const double> row) const;
    std::size_t feature_count() const { return feature_count_; }
    const std::vector<Tree>& trees() const { return trees_; }

    bool operator==(const RandomForest&) const = default;

    // Trees as nested split records; feature indices are written as names.
    nlohmann::json to_json(const std::vector<std::string>& names) const;
    static RandomForest from_json(const nlohmann::json& doc, const std::vector<std::string>& names);

private:
    std::size_t feature_count_ = 0;
    std::vector<Tree> trees_;
};

struct ClassifierModel {
    static constexpr int kFormatVersion = 1;

    Vocabulary vocabulary;
    std::vector<std::string> feature_names;
    ForestOptions options;
    RandomForest forest;

    bool operator==(const ClassifierModel&) const = default;
};

struct LabeledCommit {
    std::string commit_id;
    MaintenanceActivity label = MaintenanceActivity::Corrective;
    FeatureVector features;
};

ClassifierModel train_classifier(const Vocabulary& vocab, std::span<const LabeledCommit> examples,
                                 const ForestOptions& options = {});

// Throws InvalidInput when the feature keys differ from the model vocabulary.
Vote classify(const ClassifierModel& model, const FeatureVector& features);

nlohmann::json model_to_json(const ClassifierModel& model);
ClassifierModel model_from_json(const nlohmann::json& doc);

}  // namespace coevo::classify
