#pragma once

#include <array>
#include <string>
#include <string_view>

#include "coevo/java/entity.hpp"

namespace coevo::distill {

// Closed set of semantic change types. UnclassifiedChange collects every edit
// outside the supported taxonomy subset; it is counted but never modeled.
enum class ChangeType {
    AdditionalFunctionality,
    RemovedFunctionality,
    AdditionalClass,
    RemovedClass,
    AdditionalObjectState,
    RemovedObjectState,
    StatementInsert,
    StatementDelete,
    StatementUpdate,
    StatementOrderingChange,
    ReturnTypeChange,
    RemovingMethodOverridability,
    AddingMethodOverridability,
    MethodRenaming,
    ParameterInsert,
    ParameterDelete,
    ConditionExpressionChange,
    ElsePartInsert,
    ElsePartDelete,
    UnclassifiedChange,
};

inline constexpr std::size_t kModeledChangeTypeCount = 19;
inline constexpr std::size_t kChangeTypeCount = 20;

// The 19 modeled types in declaration order (UnclassifiedChange excluded).
const std::array<ChangeType, kModeledChangeTypeCount>& modeled_change_types();

std::string_view to_string(ChangeType type);
ChangeType change_type_from_string(std::string_view name);

// Maps ADDITIONAL_* to its REMOVED_* counterpart and back; other types map to themselves.
ChangeType mirror(ChangeType type);

// One distilled semantic change.
//
// The `enclosing_*` fields carry the context the test detector needs without
// re-parsing: the simple name of the innermost class around the change, the
// simple name of the method that the change lives in (or modifies), and
// whether that method, or the changed method itself for method-level
// changes, carries a `Test` annotation.
struct SourceChange {
    ChangeType change_type = ChangeType::UnclassifiedChange;
    java::EntityKind entity_kind = java::EntityKind::Statement;
    std::string entity_name;
    std::string parent_qualified_name;
    std::string file_path;
    std::string commit_id;

    std::string enclosing_class;
    std::string enclosing_method;
    bool test_annotated = false;

    bool operator==(const SourceChange&) const = default;
};

}  // namespace coevo::distill
