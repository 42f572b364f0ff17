#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace coevo::vcs {

struct FileDelta {
    std::string path;
    std::optional<std::string> before_source;  // absent: file added
    std::optional<std::string> after_source;   // absent: file removed

    bool operator==(const FileDelta&) const = default;
};

struct CommitRecord {
    std::string commit_id;
    std::string author_id;  // lowercase "name <email>"
    std::int64_t timestamp = 0;
    std::string message;
    std::vector<FileDelta> file_deltas;

    bool operator==(const CommitRecord&) const = default;
};

struct ProjectStats {
    std::int64_t loc = 0;
    std::int64_t developers = 0;
    std::int64_t age_days = 0;
    std::int64_t java_commit_count = 0;

    bool operator==(const ProjectStats&) const = default;
};

}  // namespace coevo::vcs
