#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "coevo/classify/activity.hpp"
#include "coevo/distill/change.hpp"
#include "coevo/pipeline/analysis.hpp"
#include "coevo/pipeline/csv.hpp"
#include "coevo/testdetect/detector.hpp"
#include "coevo/vcs/commit.hpp"

namespace coevo::pipeline {

using ChangeCounts = std::array<int, distill::kModeledChangeTypeCount>;

struct CommitInput {
    std::string project;
    std::string commit_id;
    std::string author_id;
    classify::MaintenanceActivity activity = classify::MaintenanceActivity::Corrective;
    CommitAnalysis analysis;
};

struct CommitObservation {
    std::string project;
    std::string commit_id;
    std::string author_id;
    classify::MaintenanceActivity activity = classify::MaintenanceActivity::Corrective;
    testdetect::TestMaintenanceProfile profile;
    ChangeCounts change_type_counts{};  // production files only
    bool is_test_only = false;

    bool operator==(const CommitObservation&) const = default;
};

// Every changed file is a test file (and at least one file changed).
bool is_test_only(const CommitAnalysis& analysis);

ChangeCounts count_change_types(std::span<const distill::SourceChange> changes);

CommitObservation observe(const CommitInput& input);

struct FenceSummary {
    std::string scope;  // "pooled" or a project id
    std::size_t positive = 0;
    double medcouple = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double upper_fence = 0.0;
    std::size_t dropped = 0;
};

struct DatasetOptions {
    bool per_project_fence = false;
};

struct CommitDataset {
    std::vector<CommitObservation> observations;
    std::size_t input_commits = 0;
    std::size_t test_only_excluded = 0;
    std::size_t outlier_excluded = 0;
    std::vector<FenceSummary> fences;
};

// Drops test-only commits, then commits whose positive profile total lies
// above the adjusted-boxplot fence. Input order is preserved.
CommitDataset build_commit_dataset(std::span<const CommitInput> commits, const DatasetOptions& options = {});

struct ProjectInput {
    std::string project_id;
    vcs::ProjectStats stats;
    testdetect::HeadTestCounts head;
    std::vector<classify::MaintenanceActivity> activities;  // one per Java commit
};

struct ProjectObservation {
    std::string project_id;
    vcs::ProjectStats stats;
    int corrective = 0;
    int perfective = 0;
    int adaptive = 0;
    int test_methods = 0;
    int test_classes = 0;

    bool operator==(const ProjectObservation&) const = default;
};

// Throws InvalidInput when a project's activity list disagrees with its Java commit count.
std::vector<ProjectObservation> build_project_dataset(std::span<const ProjectInput> projects);

enum class GroupBy { Project, Developer };

struct ProportionRow {
    std::string group;
    classify::MaintenanceActivity activity = classify::MaintenanceActivity::Corrective;
    int commits = 0;
    int with_test_maintenance = 0;
    double fraction = 0.0;

    bool operator==(const ProportionRow&) const = default;
};

// Per group and activity, the share of commits with test maintenance. Groups
// without commits of an activity have no row for it. Sorted by group, then activity.
std::vector<ProportionRow> proportions_by_activity(std::span<const CommitObservation> observations, GroupBy group_by);

CsvTable commits_table(std::span<const CommitObservation> observations);
std::vector<CommitObservation> commits_from_table(const CsvTable& table);

CsvTable projects_table(std::span<const ProjectObservation> projects);
std::vector<ProjectObservation> projects_from_table(const CsvTable& table);

struct ProfileRow {
    std::string commit_id;
    testdetect::TestMaintenanceProfile profile;
};

// commit_id, six counters, total, hasTestMaintenance
CsvTable profiles_table(std::span<const ProfileRow> rows);
std::vector<ProfileRow> profiles_from_table(const CsvTable& table);

}  // namespace coevo::pipeline
