#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coevo/vcs/commit.hpp"

namespace coevo::vcs {

struct HistoryOptions {
    std::optional<std::int64_t> since;  // drop commits older than this UTC timestamp
};

struct History {
    std::vector<CommitRecord> commits;
    std::vector<std::string> diagnostics;  // skipped commits and why
};

bool is_java_path(std::string_view path);

// Walks the first-parent chain of HEAD oldest-first and returns every commit
// that changes at least one Java file. Each commit is diffed against its first
// parent (the empty tree for the root), with renames reported as remove + add.
// Throws coevo::Error when `repo` is not a readable git repository; an
// unborn HEAD yields an empty history.
History enumerate_commits(const std::filesystem::path& repo, const HistoryOptions& options = {});

// Java sources at HEAD, keyed by path. Empty for an unborn HEAD.
std::map<std::string, std::string> head_sources(const std::filesystem::path& repo);

ProjectStats compute_project_stats(std::span<const CommitRecord> commits, std::span<const std::string> head_texts);

// Applies the deltas of `commits` in order to an empty tree.
std::map<std::string, std::string> replay(std::span<const CommitRecord> commits);

// Lowercased "name <email>".
std::string normalize_author(std::string_view name, std::string_view email);

}  // namespace coevo::vcs
