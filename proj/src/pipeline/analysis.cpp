#include "coevo/pipeline/analysis.hpp"

#include <filesystem>
#include <optional>
#include <set>

#include "coevo/distill/distiller.hpp"
#include "coevo/java/parser.hpp"
#include "coevo/testdetect/detector.hpp"

namespace coevo::pipeline {

bool is_test_path(std::string_view path) {
    return testdetect::is_test_class(std::filesystem::path(std::string(path)).stem().string());
}

CommitAnalysis analyze_commit(const vcs::CommitRecord& commit) {
    CommitAnalysis out;
    out.commit_id = commit.commit_id;
    for (const auto& delta : commit.file_deltas) {
        FileOutcome file;
        file.path = delta.path;
        std::optional<java::EntityNode> before;
        std::optional<java::EntityNode> after;
        auto parse = [&](const std::optional<std::string>& source, std::optional<java::EntityNode>& tree,
                         const char* side) {
            if (!source) return;
            try {
                tree = java::parse_compilation_unit(*source);
            } catch (const java::ParseError& e) {
                file.distilled = false;
                if (file.error.empty()) {
                    file.error = std::string(side) + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                                 ": " + e.what();
                }
            }
        };
        parse(delta.before_source, before, "before");
        parse(delta.after_source, after, "after");

        if (after) {
            file.test_file = testdetect::is_test_file(*after);
        } else if (before) {
            file.test_file = testdetect::is_test_file(*before);
        } else {
            file.test_file = is_test_path(delta.path);
        }
        if (file.distilled) {
            auto changes = distill::distill(before ? &*before : nullptr, after ? &*after : nullptr, delta.path,
                                            commit.commit_id);
            out.changes.insert(out.changes.end(), std::make_move_iterator(changes.begin()),
                               std::make_move_iterator(changes.end()));
        }
        out.files.push_back(std::move(file));
    }
    return out;
}

std::vector<distill::SourceChange> production_changes(const CommitAnalysis& analysis) {
    std::set<std::string> test_files;
    for (const auto& f : analysis.files) {
        if (f.test_file) test_files.insert(f.path);
    }
    std::vector<distill::SourceChange> out;
    for (const auto& c : analysis.changes) {
        if (!test_files.count(c.file_path)) out.push_back(c);
    }
    return out;
}

}  // namespace coevo::pipeline
