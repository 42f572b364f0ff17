#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/distill/change.hpp"
#include "coevo/java/entity.hpp"

namespace coevo::testdetect {

// Per-commit test maintenance counters; `total` is their sum.
struct TestMaintenanceProfile {
    int method_added = 0;
    int method_removed = 0;
    int method_updated = 0;
    int class_added = 0;
    int class_removed = 0;
    int class_updated = 0;
    int total = 0;

    bool operator==(const TestMaintenanceProfile&) const = default;
};

// JUnit naming convention, case-sensitive: starts with "Test", or ends with
// "Test", "Tests" or "TestCase".
bool is_test_class(std::string_view class_name);

// Annotated with `Test`, or named test* inside a test class.
bool is_test_method(const java::EntityNode& method, std::string_view enclosing_class_name);
bool is_test_method(std::string_view method_name, bool test_annotated, std::string_view enclosing_class_name);

TestMaintenanceProfile derive_profile(std::span<const distill::SourceChange> changes);

inline bool has_test_maintenance(const TestMaintenanceProfile& profile) { return profile.total > 0; }

struct HeadTestCounts {
    int test_methods = 0;
    int test_classes = 0;

    bool operator==(const HeadTestCounts&) const = default;
};

HeadTestCounts count_head_tests(std::span<const java::EntityNode> head_trees);

// A file is a test file when its first top-level type is a test class.
bool is_test_file(const java::EntityNode& root);

}  // namespace coevo::testdetect
