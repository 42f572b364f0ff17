#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace coevo::java {

enum class EntityKind {
    Class,
    Method,
    Field,
    Statement,
    Annotation,
    Modifier,
    ReturnType,
    Parameter,
    ElsePart,
    Condition,
};

std::string_view to_string(EntityKind kind);
EntityKind entity_kind_from_string(std::string_view name);

struct TextSpan {
    int start_line = 0;
    int end_line = 0;
};

// One node of the normalized entity tree.
//
// `name` is the simple name for declarations (class, method, field, parameter,
// annotation, modifier keyword, return type text) and empty for statements.
// `text` carries the normalized token text: the statement source for
// STATEMENT/CONDITION nodes, the declaration text for FIELD/PARAMETER nodes and
// the header (everything up to the opening brace) for CLASS nodes. For compound
// statements `text` is the leading keyword ("if", "for", "try", ...).
struct EntityNode {
    EntityKind kind = EntityKind::Class;
    std::string name;
    std::string qualified_name;
    std::string text;
    std::vector<EntityNode> children;
    TextSpan span;

    bool operator==(const EntityNode&) const = default;

    // Children of a given kind, in source order.
    std::vector<const EntityNode*> children_of(EntityKind k) const;
    bool has_child(EntityKind k, std::string_view child_name) const;
};

// Number of PARAMETER children of a METHOD node.
std::size_t arity(const EntityNode& method);

// "int,String" style list of parameter types, used to tell overloads apart.
std::string parameter_signature(const EntityNode& method);

// True when the method carries a `Test` annotation (simple or qualified name).
bool has_test_annotation(const EntityNode& method);

// Concatenated text of a statement subtree, used for similarity and identity.
std::string subtree_text(const EntityNode& node);

}  // namespace coevo::java
