#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coevo/distill/change.hpp"
#include "coevo/vcs/commit.hpp"

namespace coevo::pipeline {

struct FileOutcome {
    std::string path;
    bool test_file = false;
    bool distilled = true;
    std::string error;  // parse failure, when not distilled

    bool operator==(const FileOutcome&) const = default;
};

struct CommitAnalysis {
    std::string commit_id;
    std::vector<distill::SourceChange> changes;
    std::vector<FileOutcome> files;
};

// Test-class naming rule applied to the file name without ".java"; used when
// a file cannot be parsed.
bool is_test_path(std::string_view path);

// Parses both sides of every file delta and distills them. A file whose
// either side fails to parse is recorded as not distilled and contributes no
// changes. A file is a test file when the top-level type of its newest
// parsable version is a test class.
CommitAnalysis analyze_commit(const vcs::CommitRecord& commit);

// Changes outside test files.
std::vector<distill::SourceChange> production_changes(const CommitAnalysis& analysis);

}  // namespace coevo::pipeline
