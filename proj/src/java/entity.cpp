#include "coevo/java/entity.hpp"

#include <array>
#include <utility>

#include "coevo/error.hpp"

namespace coevo::java {

namespace {

constexpr std::array<std::pair<EntityKind, std::string_view>, 10> kKindNames{{
    {EntityKind::Class, "CLASS"},
    {EntityKind::Method, "METHOD"},
    {EntityKind::Field, "FIELD"},
    {EntityKind::Statement, "STATEMENT"},
    {EntityKind::Annotation, "ANNOTATION"},
    {EntityKind::Modifier, "MODIFIER"},
    {EntityKind::ReturnType, "RETURN_TYPE"},
    {EntityKind::Parameter, "PARAMETER"},
    {EntityKind::ElsePart, "ELSE_PART"},
    {EntityKind::Condition, "CONDITION"},
}};

void append_text(const EntityNode& node, std::string& out) {
    if (!node.text.empty()) {
        if (!out.empty()) out += ' ';
        out += node.text;
    }
    for (const auto& child : node.children) append_text(child, out);
}

}  // namespace

std::string_view to_string(EntityKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "UNKNOWN";
}

EntityKind entity_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) return k;
    }
    throw InvalidInput("unknown entity kind: " + std::string(name));
}

std::vector<const EntityNode*> EntityNode::children_of(EntityKind k) const {
    std::vector<const EntityNode*> out;
    for (const auto& child : children) {
        if (child.kind == k) out.push_back(&child);
    }
    return out;
}

bool EntityNode::has_child(EntityKind k, std::string_view child_name) const {
    for (const auto& child : children) {
        if (child.kind == k && child.name == child_name) return true;
    }
    return false;
}

std::size_t arity(const EntityNode& method) {
    std::size_t n = 0;
    for (const auto& child : method.children) {
        if (child.kind == EntityKind::Parameter) ++n;
    }
    return n;
}

std::string parameter_signature(const EntityNode& method) {
    std::string sig;
    for (const auto& child : method.children) {
        if (child.kind != EntityKind::Parameter) continue;
        if (!sig.empty()) sig += ',';
        sig += child.text;
    }
    return sig;
}

bool has_test_annotation(const EntityNode& method) {
    for (const auto& child : method.children) {
        if (child.kind != EntityKind::Annotation) continue;
        std::string_view name = child.name;
        if (auto dot = name.rfind('.'); dot != std::string_view::npos) name = name.substr(dot + 1);
        if (name == "Test") return true;
    }
    return false;
}

std::string subtree_text(const EntityNode& node) {
    std::string out;
    append_text(node, out);
    return out;
}

}  // namespace coevo::java
