#pragma once

#include <filesystem>
#include <vector>

#include "coevo/distill/change.hpp"
#include "coevo/vcs/commit.hpp"
#include "json.hpp"

namespace coevo::pipeline {

using Json = nlohmann::json;

Json to_json(const vcs::CommitRecord& commit);
vcs::CommitRecord commit_from_json(const Json& j);

// {commit, file, changeType, entityKind, entityName, parent} plus the
// enclosing-context fields the test detector reads.
Json to_json(const distill::SourceChange& change);
distill::SourceChange change_from_json(const Json& j);

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records);
// Throws InvalidInput naming the file and line on malformed input.
std::vector<Json> read_jsonl(const std::filesystem::path& path);

}  // namespace coevo::pipeline
