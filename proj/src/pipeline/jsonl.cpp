#include "coevo/pipeline/jsonl.hpp"

#include <fstream>

#include "coevo/error.hpp"

namespace coevo::pipeline {

Json to_json(const vcs::CommitRecord& commit) {
    Json files = Json::array();
    for (const auto& d : commit.file_deltas) {
        Json f;
        f["path"] = d.path;
        f["before"] = d.before_source ? Json(*d.before_source) : Json(nullptr);
        f["after"] = d.after_source ? Json(*d.after_source) : Json(nullptr);
        files.push_back(std::move(f));
    }
    return Json{{"commit_id", commit.commit_id},
                {"author_id", commit.author_id},
                {"timestamp", commit.timestamp},
                {"message", commit.message},
                {"file_deltas", std::move(files)}};
}

vcs::CommitRecord commit_from_json(const Json& j) {
    vcs::CommitRecord c;
    c.commit_id = j.at("commit_id").get<std::string>();
    c.author_id = j.at("author_id").get<std::string>();
    c.timestamp = j.at("timestamp").get<std::int64_t>();
    c.message = j.at("message").get<std::string>();
    for (const auto& f : j.at("file_deltas")) {
        vcs::FileDelta d;
        d.path = f.at("path").get<std::string>();
        if (!f.at("before").is_null()) d.before_source = f.at("before").get<std::string>();
        if (!f.at("after").is_null()) d.after_source = f.at("after").get<std::string>();
        c.file_deltas.push_back(std::move(d));
    }
    return c;
}

Json to_json(const distill::SourceChange& change) {
    return Json{{"commit", change.commit_id},
                {"file", change.file_path},
                {"changeType", distill::to_string(change.change_type)},
                {"entityKind", java::to_string(change.entity_kind)},
                {"entityName", change.entity_name},
                {"parent", change.parent_qualified_name},
                {"enclosingClass", change.enclosing_class},
                {"enclosingMethod", change.enclosing_method},
                {"testAnnotated", change.test_annotated}};
}

distill::SourceChange change_from_json(const Json& j) {
    distill::SourceChange c;
    c.commit_id = j.at("commit").get<std::string>();
    c.file_path = j.at("file").get<std::string>();
    c.change_type = distill::change_type_from_string(j.at("changeType").get<std::string>());
    c.entity_kind = java::entity_kind_from_string(j.at("entityKind").get<std::string>());
    c.entity_name = j.at("entityName").get<std::string>();
    c.parent_qualified_name = j.at("parent").get<std::string>();
    c.enclosing_class = j.value("enclosingClass", "");
    c.enclosing_method = j.value("enclosingMethod", "");
    c.test_annotated = j.value("testAnnotated", false);
    return c;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& r : records) out << r.dump() << '\n';
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::vector<Json> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(Json::parse(line));
        } catch (const Json::exception& e) {
            throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace coevo::pipeline
