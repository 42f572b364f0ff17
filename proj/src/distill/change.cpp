#include "coevo/distill/change.hpp"

#include <utility>

#include "coevo/error.hpp"

namespace coevo::distill {

namespace {

constexpr std::array<std::pair<ChangeType, std::string_view>, kChangeTypeCount> kNames{{
    {ChangeType::AdditionalFunctionality, "ADDITIONAL_FUNCTIONALITY"},
    {ChangeType::RemovedFunctionality, "REMOVED_FUNCTIONALITY"},
    {ChangeType::AdditionalClass, "ADDITIONAL_CLASS"},
    {ChangeType::RemovedClass, "REMOVED_CLASS"},
    {ChangeType::AdditionalObjectState, "ADDITIONAL_OBJECT_STATE"},
    {ChangeType::RemovedObjectState, "REMOVED_OBJECT_STATE"},
    {ChangeType::StatementInsert, "STATEMENT_INSERT"},
    {ChangeType::StatementDelete, "STATEMENT_DELETE"},
    {ChangeType::StatementUpdate, "STATEMENT_UPDATE"},
    {ChangeType::StatementOrderingChange, "STATEMENT_ORDERING_CHANGE"},
    {ChangeType::ReturnTypeChange, "RETURN_TYPE_CHANGE"},
    {ChangeType::RemovingMethodOverridability, "REMOVING_METHOD_OVERRIDABILITY"},
    {ChangeType::AddingMethodOverridability, "ADDING_METHOD_OVERRIDABILITY"},
    {ChangeType::MethodRenaming, "METHOD_RENAMING"},
    {ChangeType::ParameterInsert, "PARAMETER_INSERT"},
    {ChangeType::ParameterDelete, "PARAMETER_DELETE"},
    {ChangeType::ConditionExpressionChange, "CONDITION_EXPRESSION_CHANGE"},
    {ChangeType::ElsePartInsert, "ELSE_PART_INSERT"},
    {ChangeType::ElsePartDelete, "ELSE_PART_DELETE"},
    {ChangeType::UnclassifiedChange, "UNCLASSIFIED_CHANGE"},
}};

}  // namespace

const std::array<ChangeType, kModeledChangeTypeCount>& modeled_change_types() {
    static const auto types = [] {
        std::array<ChangeType, kModeledChangeTypeCount> out{};
        for (std::size_t i = 0; i < kModeledChangeTypeCount; ++i) out[i] = kNames[i].first;
        return out;
    }();
    return types;
}

std::string_view to_string(ChangeType type) {
    return kNames[static_cast<std::size_t>(type)].second;
}

ChangeType change_type_from_string(std::string_view name) {
    for (const auto& [type, n] : kNames) {
        if (n == name) return type;
    }
    throw InvalidInput("unknown change type: " + std::string(name));
}

ChangeType mirror(ChangeType type) {
    switch (type) {
        case ChangeType::AdditionalFunctionality: return ChangeType::RemovedFunctionality;
        case ChangeType::RemovedFunctionality: return ChangeType::AdditionalFunctionality;
        case ChangeType::AdditionalClass: return ChangeType::RemovedClass;
        case ChangeType::RemovedClass: return ChangeType::AdditionalClass;
        case ChangeType::AdditionalObjectState: return ChangeType::RemovedObjectState;
        case ChangeType::RemovedObjectState: return ChangeType::AdditionalObjectState;
        default: return type;
    }
}

}  // namespace coevo::distill
