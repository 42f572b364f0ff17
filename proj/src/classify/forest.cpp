#include "coevo/classify/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "coevo/error.hpp"

namespace coevo::classify {

namespace {

using Json = nlohmann::json;

MaintenanceActivity plurality(const std::array<int, 3>& counts) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < 3; ++k) {
        if (counts[k] > counts[best]) best = k;
    }
    return kActivities[best];
}

double gini(const std::array<int, 3>& counts, int total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (int c : counts) {
        double p = static_cast<double>(c) / total;
        g -= p * p;
    }
    return g;
}

class TreeBuilder {
public:
    TreeBuilder(const std::vector<TrainingExample>& examples, std::size_t feature_count, std::mt19937_64& rng)
        : examples_(examples), feature_count_(feature_count), rng_(rng) {
        mtry_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(feature_count)))));
    }

    RandomForest::Tree build(std::vector<std::size_t> sample) {
        tree_.clear();
        grow(std::move(sample));
        return std::move(tree_);
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double impurity = 0.0;
    };

    int grow(std::vector<std::size_t> sample) {
        int id = static_cast<int>(tree_.size());
        tree_.emplace_back();
        std::array<int, 3> counts{};
        for (auto i : sample) ++counts[index_of(examples_[i].label)];
        tree_[id].counts = counts;
        tree_[id].label = plurality(counts);
        int nonzero = 0;
        for (int c : counts) nonzero += c > 0;
        if (nonzero <= 1) return id;

        Split split = choose_split(sample);
        if (split.feature < 0) return id;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto i : sample) {
            (examples_[i].features[static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right).push_back(i);
        }
        tree_[id].feature = split.feature;
        tree_[id].threshold = split.threshold;
        int l = grow(std::move(left));
        int r = grow(std::move(right));
        tree_[id].left = l;
        tree_[id].right = r;
        return id;
    }

    // Best split over a random subset of features; when none of those can
    // separate the sample, the remaining features are tried as well.
    Split choose_split(const std::vector<std::size_t>& sample) {
        std::vector<std::size_t> order(feature_count_);
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = 0; i < order.size(); ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng_() % (order.size() - i));
            std::swap(order[i], order[j]);
        }
        Split best;
        std::size_t tried = 0;
        for (std::size_t f : order) {
            if (tried >= mtry_ && best.feature >= 0) break;
            ++tried;
            evaluate(sample, f, best);
        }
        return best;
    }

    void evaluate(const std::vector<std::size_t>& sample, std::size_t feature, Split& best) const {
        std::vector<std::pair<double, std::size_t>> values;
        values.reserve(sample.size());
        for (auto i : sample) values.emplace_back(examples_[i].features[feature], index_of(examples_[i].label));
        std::sort(values.begin(), values.end());
        if (values.front().first == values.back().first) return;

        std::array<int, 3> right{};
        for (const auto& v : values) ++right[v.second];
        std::array<int, 3> left{};
        const int n = static_cast<int>(values.size());
        for (int k = 0; k + 1 < n; ++k) {
            ++left[values[static_cast<std::size_t>(k)].second];
            --right[values[static_cast<std::size_t>(k)].second];
            double lo = values[static_cast<std::size_t>(k)].first;
            double hi = values[static_cast<std::size_t>(k) + 1].first;
            if (lo == hi) continue;
            int nl = k + 1;
            int nr = n - nl;
            double impurity = (nl * gini(left, nl) + nr * gini(right, nr)) / n;
            if (best.feature < 0 || impurity < best.impurity) {
                best.feature = static_cast<int>(feature);
                best.threshold = lo + (hi - lo) / 2.0;
                best.impurity = impurity;
            }
        }
    }

    const std::vector<TrainingExample>& examples_;
    std::size_t feature_count_;
    std::size_t mtry_ = 1;
    std::mt19937_64& rng_;
    RandomForest::Tree tree_;
};

MaintenanceActivity leaf_label(const RandomForest::Tree& tree, std::span<const double> row) {
    int id = 0;
    while (tree[static_cast<std::size_t>(id)].feature >= 0) {
        const auto& n = tree[static_cast<std::size_t>(id)];
        id = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return tree[static_cast<std::size_t>(id)].label;
}

Json node_to_json(const RandomForest::Tree& tree, int id, const std::vector<std::string>& names) {
    const auto& n = tree[static_cast<std::size_t>(id)];
    Json j;
    if (n.feature < 0) {
        j["leaf"] = std::string(to_string(n.label));
        j["counts"] = n.counts;
        return j;
    }
    j["feature"] = names.at(static_cast<std::size_t>(n.feature));
    j["threshold"] = n.threshold;
    j["counts"] = n.counts;
    j["le"] = node_to_json(tree, n.left, names);
    j["gt"] = node_to_json(tree, n.right, names);
    return j;
}

int node_from_json(const Json& j, const std::vector<std::string>& names, RandomForest::Tree& tree) {
    int id = static_cast<int>(tree.size());
    tree.emplace_back();
    RandomForest::Node node;
    node.counts = j.at("counts").get<std::array<int, 3>>();
    node.label = plurality(node.counts);
    if (j.contains("leaf")) {
        node.label = activity_from_string(j.at("leaf").get<std::string>());
        tree[static_cast<std::size_t>(id)] = node;
        return id;
    }
    auto name = j.at("feature").get<std::string>();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InvalidInput("model references unknown feature " + name);
    node.feature = static_cast<int>(it - names.begin());
    node.threshold = j.at("threshold").get<double>();
    tree[static_cast<std::size_t>(id)] = node;
    int l = node_from_json(j.at("le"), names, tree);
    int r = node_from_json(j.at("gt"), names, tree);
    tree[static_cast<std::size_t>(id)].left = l;
    tree[static_cast<std::size_t>(id)].right = r;
    return id;
}

}  // namespace

RandomForest RandomForest::train(std::size_t feature_count, std::vector<TrainingExample> examples,
                                 const ForestOptions& options) {
    if (options.trees < 1) throw InvalidInput("forest needs at least one tree");
    if (feature_count == 0) throw InvalidInput("forest needs at least one feature");
    std::array<std::size_t, 3> per_class{};
    for (const auto& e : examples) {
        if (e.features.size() != feature_count) {
            throw InvalidInput("training example " + e.commit_id + " has " + std::to_string(e.features.size()) +
                               " features, expected " + std::to_string(feature_count));
        }
        ++per_class[index_of(e.label)];
    }
    int classes = 0;
    for (auto c : per_class) classes += c > 0;
    if (classes < 2) throw InvalidInput("training data contains a single class");
    for (auto a : kActivities) {
        if (per_class[index_of(a)] < options.min_examples_per_class) {
            throw InvalidInput("training data has " + std::to_string(per_class[index_of(a)]) + " " +
                               std::string(to_string(a)) + " examples; at least " +
                               std::to_string(options.min_examples_per_class) + " are required");
        }
    }
    std::sort(examples.begin(), examples.end(), [](const TrainingExample& l, const TrainingExample& r) {
        if (l.commit_id != r.commit_id) return l.commit_id < r.commit_id;
        if (l.features != r.features) return l.features < r.features;
        return l.label < r.label;
    });

    RandomForest forest;
    forest.feature_count_ = feature_count;
    std::mt19937_64 rng(options.seed);
    TreeBuilder builder(examples, feature_count, rng);
    const std::size_t n = examples.size();
    for (int t = 0; t < options.trees; ++t) {
        std::vector<std::size_t> sample(n);
        for (auto& s : sample) s = static_cast<std::size_t>(rng() % n);
        forest.trees_.push_back(builder.build(std::move(sample)));
    }
    return forest;
}

Vote RandomForest::vote(std::span<const double> row) const {
    if (row.size() != feature_count_) {
        throw InvalidInput("feature row has " + std::to_string(row.size()) + " values, model expects " +
                           std::to_string(feature_count_));
    }
    Vote v;
    for (const auto& tree : trees_) ++v.counts[index_of(leaf_label(tree, row))];
    v.label = plurality(v.counts);
    return v;
}

Json RandomForest::to_json(const std::vector<std::string>& names) const {
    Json trees = Json::array();
    for (const auto& tree : trees_) trees.push_back(node_to_json(tree, 0, names));
    return trees;
}

RandomForest RandomForest::from_json(const Json& doc, const std::vector<std::string>& names) {
    RandomForest forest;
    forest.feature_count_ = names.size();
    for (const auto& t : doc) {
        Tree tree;
        node_from_json(t, names, tree);
        forest.trees_.push_back(std::move(tree));
    }
    return forest;
}

ClassifierModel train_classifier(const Vocabulary& vocab, std::span<const LabeledCommit> examples,
                                 const ForestOptions& options) {
    ClassifierModel model;
    model.vocabulary = vocab;
    model.feature_names = feature_names(vocab);
    model.options = options;
    std::vector<TrainingExample> rows;
    rows.reserve(examples.size());
    for (const auto& e : examples) {
        FeatureVector aligned = e.features;
        std::set<std::string> keys;
        for (const auto& [k, v] : aligned.keyword_counts) keys.insert(k);
        if (!std::equal(keys.begin(), keys.end(), vocab.words.begin(), vocab.words.end())) {
            throw InvalidInput("training example " + e.commit_id + " was not extracted with this vocabulary");
        }
        rows.push_back(TrainingExample{e.commit_id, to_row(aligned), e.label});
    }
    model.forest = RandomForest::train(model.feature_names.size(), std::move(rows), options);
    return model;
}

Vote classify(const ClassifierModel& model, const FeatureVector& features) {
    const auto& words = model.vocabulary.words;
    bool same = features.keyword_counts.size() == words.size();
    if (same) {
        std::size_t k = 0;
        for (const auto& entry : features.keyword_counts) {
            if (entry.first != words[k++]) {
                same = false;
                break;
            }
        }
    }
    if (!same) throw InvalidInput("feature vocabulary does not match the model vocabulary");
    return model.forest.vote(to_row(features));
}

Json model_to_json(const ClassifierModel& model) {
    Json doc;
    doc["format"] = "coevo-random-forest";
    doc["version"] = ClassifierModel::kFormatVersion;
    doc["seed"] = model.options.seed;
    doc["tree_count"] = model.options.trees;
    doc["min_examples_per_class"] = model.options.min_examples_per_class;
    Json vocab;
    for (auto a : kActivities) vocab[std::string(to_string(a))] = model.vocabulary.top_words[index_of(a)];
    doc["vocabulary"] = vocab;
    doc["features"] = model.feature_names;
    doc["trees"] = model.forest.to_json(model.feature_names);
    return doc;
}

ClassifierModel model_from_json(const Json& doc) {
    try {
        if (doc.at("version").get<int>() != ClassifierModel::kFormatVersion) {
            throw InvalidInput("unsupported classifier model version " + doc.at("version").dump());
        }
        ClassifierModel model;
        model.options.seed = doc.at("seed").get<std::uint64_t>();
        model.options.trees = doc.at("tree_count").get<int>();
        model.options.min_examples_per_class = doc.at("min_examples_per_class").get<std::size_t>();
        std::set<std::string> all;
        for (auto a : kActivities) {
            auto words = doc.at("vocabulary").at(std::string(to_string(a))).get<std::vector<std::string>>();
            all.insert(words.begin(), words.end());
            model.vocabulary.top_words[index_of(a)] = std::move(words);
        }
        model.vocabulary.words.assign(all.begin(), all.end());
        model.feature_names = doc.at("features").get<std::vector<std::string>>();
        if (model.feature_names != feature_names(model.vocabulary)) {
            throw InvalidInput("classifier model features disagree with its vocabulary");
        }
        model.forest = RandomForest::from_json(doc.at("trees"), model.feature_names);
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed classifier model: ") + e.what());
    }
}

}  // namespace coevo::classify
