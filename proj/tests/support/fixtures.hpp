#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace coevo::testing {

std::filesystem::path fixture_dir(const std::string& name);

// Fixture directories (sorted) under tests/fixtures/<group>.
std::vector<std::filesystem::path> list_fixtures(const std::string& group);

// Non-empty lines of a file, sorted.
std::vector<std::string> read_sorted_lines(const std::filesystem::path& path);

// "TYPE|KIND|entity|parent" for each change distilled from before.java /
// after.java in `dir` (either may be missing), sorted.
std::vector<std::string> distill_fixture(const std::filesystem::path& dir);

// "CLASS <qn> <bool>" / "METHOD <qn> <bool>" for every class and method in
// the source, sorted.
std::vector<std::string> detector_labels(const std::string& source);

}  // namespace coevo::testing
