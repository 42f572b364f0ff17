#include "coevo/pipeline/stages.hpp"

#include <fstream>
#include <map>
#include <set>

#include "coevo/classify/features.hpp"
#include "coevo/classify/vocabulary.hpp"
#include "coevo/java/parser.hpp"
#include "coevo/pipeline/csv.hpp"
#include "coevo/pipeline/jsonl.hpp"
#include "coevo/testdetect/detector.hpp"
#include "coevo/vcs/replay.hpp"

namespace coevo::pipeline {

namespace fs = std::filesystem;

namespace {

void require(const fs::path& path, const std::string& stage, const std::string& producer) {
    if (!fs::exists(path)) {
        throw StageError(stage, "missing " + path.string() + " (run the " + producer + " stage first)");
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

}  // namespace

std::vector<Project> name_projects(const std::vector<fs::path>& repos) {
    std::vector<Project> out;
    std::map<std::string, int> seen;
    for (const auto& repo : repos) {
        auto normalized = repo.lexically_normal();
        std::string base = normalized.filename().string();
        if (base.empty()) base = normalized.parent_path().filename().string();
        if (base.empty() || base == "." || base == "..") base = "project";
        int n = ++seen[base];
        out.push_back(Project{n == 1 ? base : base + "-" + std::to_string(n), repo});
    }
    return out;
}

std::vector<fs::path> read_repo_list(const fs::path& list_file) {
    std::ifstream in(list_file);
    if (!in) throw InvalidInput("cannot read repository list " + list_file.string());
    std::vector<fs::path> out;
    std::string line;
    while (std::getline(in, line)) {
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        auto e = line.find_last_not_of(" \t\r");
        fs::path p = line.substr(b, e - b + 1);
        if (p.is_relative()) p = list_file.parent_path() / p;
        out.push_back(p.lexically_normal());
    }
    return out;
}

void run_mine(const Workspace& ws, const Project& project) {
    auto dir = ws.project_dir(project.id);
    fs::create_directories(dir);
    auto history = vcs::enumerate_commits(project.repo);

    std::vector<Json> records;
    for (const auto& c : history.commits) records.push_back(to_json(c));
    write_jsonl(dir / "commits.jsonl", records);

    std::vector<std::string> diagnostics = history.diagnostics;
    auto head = vcs::head_sources(project.repo);
    std::vector<std::string> texts;
    std::vector<java::EntityNode> trees;
    for (const auto& [path, text] : head) {
        texts.push_back(text);
        try {
            trees.push_back(java::parse_compilation_unit(text));
        } catch (const java::ParseError& e) {
            diagnostics.push_back("head " + path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                                  ": " + e.what());
        }
    }
    vcs::ProjectStats stats;
    if (!history.commits.empty()) stats = vcs::compute_project_stats(history.commits, texts);
    auto counts = testdetect::count_head_tests(trees);

    Json summary{{"project", project.id},
                 {"repo", project.repo.string()},
                 {"loc", stats.loc},
                 {"developers", stats.developers},
                 {"age_days", stats.age_days},
                 {"java_commit_count", stats.java_commit_count},
                 {"test_methods", counts.test_methods},
                 {"test_classes", counts.test_classes},
                 {"diagnostics", diagnostics}};
    write_text(dir / "project.json", summary.dump(2) + "\n");
}

std::vector<vcs::CommitRecord> load_commits(const Workspace& ws, const std::string& project_id) {
    auto path = ws.project_dir(project_id) / "commits.jsonl";
    require(path, "distill", "mine");
    std::vector<vcs::CommitRecord> out;
    for (const auto& j : read_jsonl(path)) out.push_back(commit_from_json(j));
    return out;
}

ProjectSummary load_project_summary(const Workspace& ws, const std::string& project_id) {
    auto path = ws.project_dir(project_id) / "project.json";
    require(path, "dataset", "mine");
    std::ifstream in(path);
    Json j = Json::parse(in);
    ProjectSummary s;
    s.project_id = j.at("project").get<std::string>();
    s.stats.loc = j.at("loc").get<std::int64_t>();
    s.stats.developers = j.at("developers").get<std::int64_t>();
    s.stats.age_days = j.at("age_days").get<std::int64_t>();
    s.stats.java_commit_count = j.at("java_commit_count").get<std::int64_t>();
    s.head.test_methods = j.at("test_methods").get<int>();
    s.head.test_classes = j.at("test_classes").get<int>();
    s.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return s;
}

void run_distill(const Workspace& ws, const std::string& project_id) {
    auto commits = load_commits(ws, project_id);
    std::vector<Json> changes;
    std::vector<Json> files;
    for (const auto& c : commits) {
        auto analysis = analyze_commit(c);
        for (const auto& ch : analysis.changes) changes.push_back(to_json(ch));
        for (const auto& f : analysis.files) {
            files.push_back(Json{{"commit", c.commit_id},
                                 {"file", f.path},
                                 {"testFile", f.test_file},
                                 {"distilled", f.distilled},
                                 {"error", f.error}});
        }
    }
    auto dir = ws.project_dir(project_id);
    write_jsonl(dir / "changes.jsonl", changes);
    write_jsonl(dir / "files.jsonl", files);
}

std::vector<CommitAnalysis> load_analyses(const Workspace& ws, const std::string& project_id,
                                          const std::vector<vcs::CommitRecord>& commits) {
    auto dir = ws.project_dir(project_id);
    require(dir / "changes.jsonl", "detect", "distill");
    require(dir / "files.jsonl", "detect", "distill");
    std::map<std::string, std::size_t> index;
    std::vector<CommitAnalysis> out(commits.size());
    for (std::size_t i = 0; i < commits.size(); ++i) {
        out[i].commit_id = commits[i].commit_id;
        index.emplace(commits[i].commit_id, i);
    }
    auto slot = [&](const std::string& id) -> CommitAnalysis& {
        auto it = index.find(id);
        if (it == index.end()) throw StageError("detect", "checkpoint references unknown commit " + id);
        return out[it->second];
    };
    for (const auto& j : read_jsonl(dir / "changes.jsonl")) {
        auto c = change_from_json(j);
        slot(c.commit_id).changes.push_back(std::move(c));
    }
    for (const auto& j : read_jsonl(dir / "files.jsonl")) {
        FileOutcome f;
        f.path = j.at("file").get<std::string>();
        f.test_file = j.at("testFile").get<bool>();
        f.distilled = j.at("distilled").get<bool>();
        f.error = j.at("error").get<std::string>();
        slot(j.at("commit").get<std::string>()).files.push_back(std::move(f));
    }
    return out;
}

void run_detect(const Workspace& ws, const std::string& project_id) {
    auto commits = load_commits(ws, project_id);
    auto analyses = load_analyses(ws, project_id, commits);
    std::vector<ProfileRow> rows;
    for (const auto& a : analyses) rows.push_back(ProfileRow{a.commit_id, testdetect::derive_profile(a.changes)});
    write_csv(ws.project_dir(project_id) / "profiles.csv", profiles_table(rows));
}

classify::ClassifierModel run_classify(const Workspace& ws, const std::vector<std::string>& project_ids,
                                       const std::vector<classify::GroundTruthEntry>& ground_truth,
                                       const classify::ForestOptions& options) {
    struct Loaded {
        std::vector<vcs::CommitRecord> commits;
        std::vector<CommitAnalysis> analyses;
    };
    std::vector<Loaded> loaded;
    std::map<std::string, std::pair<std::size_t, std::size_t>> where;
    std::size_t total = 0;
    for (std::size_t p = 0; p < project_ids.size(); ++p) {
        Loaded l;
        l.commits = load_commits(ws, project_ids[p]);
        l.analyses = load_analyses(ws, project_ids[p], l.commits);
        for (std::size_t i = 0; i < l.commits.size(); ++i) where.emplace(l.commits[i].commit_id, std::make_pair(p, i));
        total += l.commits.size();
        loaded.push_back(std::move(l));
    }

    classify::ClassifierModel model;
    fs::create_directories(ws.model_path().parent_path());
    if (total == 0) {
        for (const auto& id : project_ids) {
            write_csv(ws.project_dir(id) / "activities.csv",
                      CsvTable{{"commit_id", "activity", "votes_corrective", "votes_perfective", "votes_adaptive"}, {}});
        }
        write_text(ws.model_path(), "{}\n");
        return model;
    }

    std::vector<classify::LabeledMessage> messages;
    std::vector<std::pair<std::string, classify::MaintenanceActivity>> labeled;
    for (const auto& entry : ground_truth) {
        auto it = where.find(entry.commit_id);
        if (it == where.end()) {
            throw StageError("classify", "ground-truth commit " + entry.commit_id + " is not in the mined history");
        }
        const auto& commit = loaded[it->second.first].commits[it->second.second];
        messages.push_back(classify::LabeledMessage{entry.label, commit.message});
        labeled.emplace_back(entry.commit_id, entry.label);
    }
    classify::Vocabulary vocab;
    try {
        vocab = classify::build_vocabulary(messages);
    } catch (const InvalidInput& e) {
        throw StageError("classify", e.what());
    }

    auto features_of = [&](std::size_t p, std::size_t i) {
        auto prod = production_changes(loaded[p].analyses[i]);
        return classify::extract_features(loaded[p].commits[i].message, prod, vocab);
    };
    std::vector<classify::LabeledCommit> examples;
    for (const auto& [id, label] : labeled) {
        auto [p, i] = where.at(id);
        examples.push_back(classify::LabeledCommit{id, label, features_of(p, i)});
    }
    try {
        model = classify::train_classifier(vocab, examples, options);
    } catch (const InvalidInput& e) {
        throw StageError("classify", e.what());
    }
    write_text(ws.model_path(), classify::model_to_json(model).dump(1) + "\n");

    for (std::size_t p = 0; p < project_ids.size(); ++p) {
        CsvTable t{{"commit_id", "activity", "votes_corrective", "votes_perfective", "votes_adaptive"}, {}};
        for (std::size_t i = 0; i < loaded[p].commits.size(); ++i) {
            auto vote = classify::classify(model, features_of(p, i));
            t.rows.push_back({loaded[p].commits[i].commit_id, std::string(classify::to_string(vote.label)),
                              std::to_string(vote.counts[0]), std::to_string(vote.counts[1]),
                              std::to_string(vote.counts[2])});
        }
        write_csv(ws.project_dir(project_ids[p]) / "activities.csv", t);
    }
    return model;
}

std::vector<std::pair<std::string, classify::MaintenanceActivity>> load_activities(const Workspace& ws,
                                                                                   const std::string& project_id) {
    auto path = ws.project_dir(project_id) / "activities.csv";
    require(path, "dataset", "classify");
    auto t = read_csv(path);
    std::vector<std::pair<std::string, classify::MaintenanceActivity>> out;
    for (const auto& row : t.rows) {
        out.emplace_back(row[t.column("commit_id")], classify::activity_from_string(row[t.column("activity")]));
    }
    return out;
}

CommitDataset run_dataset(const Workspace& ws, const std::vector<std::string>& project_ids,
                          const DatasetOptions& options) {
    std::vector<CommitInput> inputs;
    std::vector<ProjectInput> projects;
    for (const auto& id : project_ids) {
        auto summary = load_project_summary(ws, id);
        auto commits = load_commits(ws, id);
        auto analyses = load_analyses(ws, id, commits);
        auto activities = load_activities(ws, id);
        if (activities.size() != commits.size()) {
            throw StageError("dataset", "project " + id + ": activities.csv does not cover commits.jsonl");
        }
        ProjectInput pi{id, summary.stats, summary.head, {}};
        for (std::size_t i = 0; i < commits.size(); ++i) {
            if (activities[i].first != commits[i].commit_id) {
                throw StageError("dataset", "project " + id + ": activities.csv is out of step with commits.jsonl");
            }
            pi.activities.push_back(activities[i].second);
            inputs.push_back(CommitInput{id, commits[i].commit_id, commits[i].author_id, activities[i].second,
                                         std::move(analyses[i])});
        }
        projects.push_back(std::move(pi));
    }
    auto dataset = build_commit_dataset(inputs, options);
    auto observations = build_project_dataset(projects);

    fs::create_directories(ws.dataset_dir());
    write_csv(ws.commits_csv(), commits_table(dataset.observations));
    write_csv(ws.projects_csv(), projects_table(observations));

    CsvTable exclusions{{"input_commits", "test_only_excluded", "outlier_excluded", "retained", "exclusion_rate"}, {}};
    double rate = dataset.input_commits == 0
                      ? 0.0
                      : static_cast<double>(dataset.test_only_excluded + dataset.outlier_excluded) /
                            static_cast<double>(dataset.input_commits);
    exclusions.rows.push_back({std::to_string(dataset.input_commits), std::to_string(dataset.test_only_excluded),
                               std::to_string(dataset.outlier_excluded), std::to_string(dataset.observations.size()),
                               format_number(rate)});
    write_csv(ws.dataset_dir() / "exclusions.csv", exclusions);

    CsvTable fences{{"scope", "positive_values", "medcouple", "q1", "q3", "upper_fence", "dropped"}, {}};
    for (const auto& f : dataset.fences) {
        fences.rows.push_back({f.scope, std::to_string(f.positive), format_number(f.medcouple), format_number(f.q1),
                               format_number(f.q3), format_number(f.upper_fence), std::to_string(f.dropped)});
    }
    write_csv(ws.dataset_dir() / "fences.csv", fences);
    return dataset;
}

}  // namespace coevo::pipeline
