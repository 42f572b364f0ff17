#include "coevo/testdetect/detector.hpp"

namespace coevo::testdetect {

using distill::ChangeType;
using java::EntityKind;
using java::EntityNode;

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

void count_class(const EntityNode& cls, HeadTestCounts& counts) {
    if (!cls.name.empty() && is_test_class(cls.name)) ++counts.test_classes;
    for (const auto& child : cls.children) {
        if (child.kind == EntityKind::Class) {
            count_class(child, counts);
        } else if (child.kind == EntityKind::Method && !cls.name.empty() && is_test_method(child, cls.name)) {
            ++counts.test_methods;
        }
    }
}

}  // namespace

bool is_test_class(std::string_view name) {
    return name.starts_with("Test") || ends_with(name, "Test") || ends_with(name, "Tests") ||
           ends_with(name, "TestCase");
}

bool is_test_method(std::string_view method_name, bool test_annotated, std::string_view enclosing_class_name) {
    return test_annotated || (method_name.starts_with("test") && is_test_class(enclosing_class_name));
}

bool is_test_method(const EntityNode& method, std::string_view enclosing_class_name) {
    return is_test_method(method.name, java::has_test_annotation(method), enclosing_class_name);
}

TestMaintenanceProfile derive_profile(std::span<const distill::SourceChange> changes) {
    TestMaintenanceProfile p;
    for (const auto& c : changes) {
        switch (c.change_type) {
            case ChangeType::AdditionalFunctionality:
            case ChangeType::RemovedFunctionality:
                if (is_test_method(c.entity_name, c.test_annotated, c.enclosing_class)) {
                    ++(c.change_type == ChangeType::AdditionalFunctionality ? p.method_added : p.method_removed);
                }
                break;
            case ChangeType::AdditionalClass:
            case ChangeType::RemovedClass:
                if (is_test_class(c.entity_name)) {
                    ++(c.change_type == ChangeType::AdditionalClass ? p.class_added : p.class_removed);
                }
                break;
            default:
                if (!c.enclosing_method.empty() &&
                    is_test_method(c.enclosing_method, c.test_annotated, c.enclosing_class)) {
                    ++p.method_updated;
                } else if (!c.enclosing_class.empty() && is_test_class(c.enclosing_class)) {
                    ++p.class_updated;
                }
                break;
        }
    }
    p.total = p.method_added + p.method_removed + p.method_updated + p.class_added + p.class_removed +
              p.class_updated;
    return p;
}

HeadTestCounts count_head_tests(std::span<const EntityNode> head_trees) {
    HeadTestCounts counts;
    for (const auto& root : head_trees) count_class(root, counts);
    return counts;
}

bool is_test_file(const EntityNode& root) {
    for (const auto& child : root.children) {
        if (child.kind == EntityKind::Class) return is_test_class(child.name);
    }
    return false;
}

}  // namespace coevo::testdetect
