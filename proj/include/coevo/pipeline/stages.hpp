#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coevo/classify/forest.hpp"
#include "coevo/classify/ground_truth.hpp"
#include "coevo/error.hpp"
#include "coevo/pipeline/analysis.hpp"
#include "coevo/pipeline/dataset.hpp"
#include "coevo/vcs/commit.hpp"

namespace coevo::pipeline {

// A stage could not run; the message names the stage and the missing input.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what) : Error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct Project {
    std::string id;
    std::filesystem::path repo;
};

// Ids are repository directory names, suffixed -2, -3, ... on collision.
std::vector<Project> name_projects(const std::vector<std::filesystem::path>& repos);

// One repository path per line; blank lines and '#' comments skipped.
// Relative paths resolve against the list file's directory.
std::vector<std::filesystem::path> read_repo_list(const std::filesystem::path& list_file);

// Checkpoint layout under the output directory.
struct Workspace {
    std::filesystem::path root;

    std::filesystem::path project_dir(const std::string& id) const { return root / "projects" / id; }
    std::filesystem::path model_path() const { return root / "model" / "classifier.json"; }
    std::filesystem::path dataset_dir() const { return root / "dataset"; }
    std::filesystem::path commits_csv() const { return dataset_dir() / "commits.csv"; }
    std::filesystem::path projects_csv() const { return dataset_dir() / "projects.csv"; }
};

struct ProjectSummary {
    std::string project_id;
    vcs::ProjectStats stats;
    testdetect::HeadTestCounts head;
    std::vector<std::string> diagnostics;
};

// mine: commits.jsonl and project.json (stats and head test counts).
void run_mine(const Workspace& ws, const Project& project);
// distill: changes.jsonl and files.jsonl.
void run_distill(const Workspace& ws, const std::string& project_id);
// detect: profiles.csv.
void run_detect(const Workspace& ws, const std::string& project_id);
// classify: trains on the ground truth across all projects, writes the model
// and each project's activities.csv.
classify::ClassifierModel run_classify(const Workspace& ws, const std::vector<std::string>& project_ids,
                                       const std::vector<classify::GroundTruthEntry>& ground_truth,
                                       const classify::ForestOptions& options);
// dataset: commits.csv, projects.csv, exclusions.csv and fences.csv.
CommitDataset run_dataset(const Workspace& ws, const std::vector<std::string>& project_ids,
                          const DatasetOptions& options);

// Checkpoint readers; each throws StageError naming the stage that produces the missing file.
std::vector<vcs::CommitRecord> load_commits(const Workspace& ws, const std::string& project_id);
ProjectSummary load_project_summary(const Workspace& ws, const std::string& project_id);
std::vector<CommitAnalysis> load_analyses(const Workspace& ws, const std::string& project_id,
                                          const std::vector<vcs::CommitRecord>& commits);
std::vector<std::pair<std::string, classify::MaintenanceActivity>> load_activities(const Workspace& ws,
                                                                                   const std::string& project_id);

}  // namespace coevo::pipeline
