#include "fixtures.hpp"

#include <algorithm>
#include <optional>

#include "coevo/distill/distiller.hpp"
#include "coevo/java/parser.hpp"
#include "coevo/testdetect/detector.hpp"
#include "temp_dir.hpp"

namespace coevo::testing {

std::filesystem::path fixture_dir(const std::string& name) { return std::filesystem::path(COEVO_FIXTURE_DIR) / name; }

std::vector<std::filesystem::path> list_fixtures(const std::string& group) {
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(fixture_dir(group))) out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> read_sorted_lines(const std::filesystem::path& path) {
    std::vector<std::string> out;
    std::string text = read_file(path);
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty()) out.push_back(line);
        start = end + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> distill_fixture(const std::filesystem::path& dir) {
    std::optional<java::EntityNode> before;
    std::optional<java::EntityNode> after;
    if (std::filesystem::exists(dir / "before.java")) before = java::parse_compilation_unit(read_file(dir / "before.java"));
    if (std::filesystem::exists(dir / "after.java")) after = java::parse_compilation_unit(read_file(dir / "after.java"));
    auto changes = distill::distill(before ? &*before : nullptr, after ? &*after : nullptr, "F.java", "c");
    std::vector<std::string> out;
    for (const auto& c : changes) {
        out.push_back(std::string(distill::to_string(c.change_type)) + "|" + std::string(java::to_string(c.entity_kind)) +
                      "|" + c.entity_name + "|" + c.parent_qualified_name);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void label_class(const java::EntityNode& cls, std::vector<std::string>& out) {
    out.push_back("CLASS " + cls.qualified_name + (testdetect::is_test_class(cls.name) ? " true" : " false"));
    for (const auto& child : cls.children) {
        if (child.kind == java::EntityKind::Class) {
            label_class(child, out);
        } else if (child.kind == java::EntityKind::Method) {
            out.push_back("METHOD " + child.qualified_name +
                          (testdetect::is_test_method(child, cls.name) ? " true" : " false"));
        }
    }
}

}  // namespace

std::vector<std::string> detector_labels(const std::string& source) {
    auto root = java::parse_compilation_unit(source);
    std::vector<std::string> out;
    for (const auto& child : root.children) {
        if (child.kind == java::EntityKind::Class) label_class(child, out);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace coevo::testing
