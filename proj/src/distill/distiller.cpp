#include "coevo/distill/distiller.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "coevo/error.hpp"

namespace coevo::distill {

using java::EntityKind;
using java::EntityNode;

namespace {

using NodeList = std::vector<const EntityNode*>;

const std::set<std::string, std::less<>> kCompoundKeywords{
    "if", "while", "for", "do", "switch", "try", "synchronized", "block", "catch", "finally",
};

const std::set<std::string, std::less<>> kConditionKeywords{"if", "while", "do", "for", "switch"};

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string tok; in >> tok;) out.push_back(std::move(tok));
    return out;
}

bool is_compound(const EntityNode& stmt) { return kCompoundKeywords.count(stmt.text) > 0; }

std::string match_key(const EntityNode& stmt) { return is_compound(stmt) ? stmt.text : std::string("simple"); }

NodeList statements_of(const EntityNode& node) { return node.children_of(EntityKind::Statement); }

const EntityNode* single_child(const EntityNode& node, EntityKind kind) {
    for (const auto& child : node.children) {
        if (child.kind == kind) return &child;
    }
    return nullptr;
}

std::set<std::string> names_of(const EntityNode& node, EntityKind kind) {
    std::set<std::string> out;
    for (const auto* child : node.children_of(kind)) out.insert(child->name);
    return out;
}

std::vector<std::string> body_texts(const EntityNode& method) {
    std::vector<std::string> out;
    for (const auto* stmt : statements_of(method)) out.push_back(java::subtree_text(*stmt));
    return out;
}

// Indices (into `seq`) of one longest strictly increasing subsequence.
std::vector<std::size_t> longest_increasing(const std::vector<std::size_t>& seq) {
    std::vector<std::size_t> tails;         // index into seq of smallest tail for each length
    std::vector<std::ptrdiff_t> prev(seq.size(), -1);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        auto it = std::lower_bound(tails.begin(), tails.end(), seq[i],
                                   [&](std::size_t idx, std::size_t value) { return seq[idx] < value; });
        if (it != tails.begin()) prev[i] = static_cast<std::ptrdiff_t>(*(it - 1));
        if (it == tails.end()) {
            tails.push_back(i);
        } else {
            *it = i;
        }
    }
    std::vector<std::size_t> out;
    if (tails.empty()) return out;
    for (auto i = static_cast<std::ptrdiff_t>(tails.back()); i >= 0; i = prev[static_cast<std::size_t>(i)]) {
        out.push_back(static_cast<std::size_t>(i));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

class Distiller {
public:
    Distiller(std::string file, std::string commit) : file_(std::move(file)), commit_(std::move(commit)) {}

    std::vector<SourceChange> run(const EntityNode* before, const EntityNode* after) {
        if (before == nullptr && after == nullptr) {
            throw InvalidInput("distill: both versions absent for " + file_);
        }
        static const EntityNode kEmpty{};
        compare_members(before ? *before : kEmpty, after ? *after : kEmpty, "", "");
        std::stable_sort(out_.begin(), out_.end(), [](const SourceChange& x, const SourceChange& y) {
            if (x.file_path != y.file_path) return x.file_path < y.file_path;
            if (x.parent_qualified_name != y.parent_qualified_name) {
                return x.parent_qualified_name < y.parent_qualified_name;
            }
            return x.change_type < y.change_type;
        });
        return std::move(out_);
    }

private:
    struct Context {
        std::string parent;
        std::string enclosing_class;
        std::string enclosing_method;
        bool test_annotated = false;
    };

    void emit(ChangeType type, EntityKind kind, const std::string& name, const Context& ctx) {
        out_.push_back(SourceChange{type, kind, name, ctx.parent, file_, commit_, ctx.enclosing_class,
                                    ctx.enclosing_method, ctx.test_annotated});
    }

    void class_added_or_removed(const EntityNode& cls, const std::string& parent_qn, const std::string& outer,
                                bool added) {
        emit(added ? ChangeType::AdditionalClass : ChangeType::RemovedClass, EntityKind::Class, cls.name,
             Context{parent_qn, outer, "", false});
        for (const auto& child : cls.children) {
            if (child.kind == EntityKind::Method) {
                emit(added ? ChangeType::AdditionalFunctionality : ChangeType::RemovedFunctionality,
                     EntityKind::Method, child.name,
                     Context{cls.qualified_name, cls.name, child.name, java::has_test_annotation(child)});
            } else if (child.kind == EntityKind::Class) {
                class_added_or_removed(child, cls.qualified_name, cls.name, added);
            }
        }
    }

    // Compares the members of two matched classes (or two compilation-unit roots).
    void compare_members(const EntityNode& b, const EntityNode& a, const std::string& qn, const std::string& name) {
        Context class_ctx{qn, name, "", false};

        // Nested (or top-level) classes by simple name.
        auto b_classes = b.children_of(EntityKind::Class);
        auto a_classes = a.children_of(EntityKind::Class);
        std::vector<bool> a_used(a_classes.size(), false);
        for (const auto* bc : b_classes) {
            std::size_t match = a_classes.size();
            for (std::size_t j = 0; j < a_classes.size(); ++j) {
                if (!a_used[j] && a_classes[j]->name == bc->name) {
                    match = j;
                    break;
                }
            }
            if (match == a_classes.size()) {
                class_added_or_removed(*bc, qn, name, false);
                continue;
            }
            a_used[match] = true;
            compare_class(*bc, *a_classes[match]);
        }
        for (std::size_t i = 0; i < a_classes.size(); ++i) {
            if (!a_used[i]) class_added_or_removed(*a_classes[i], qn, name, true);
        }

        // Fields by name.
        auto b_fields = b.children_of(EntityKind::Field);
        auto a_fields = a.children_of(EntityKind::Field);
        for (const auto* bf : b_fields) {
            auto it = std::find_if(a_fields.begin(), a_fields.end(),
                                   [&](const EntityNode* af) { return af->name == bf->name; });
            if (it == a_fields.end()) {
                emit(ChangeType::RemovedObjectState, EntityKind::Field, bf->name, class_ctx);
            } else if ((*it)->text != bf->text) {
                emit(ChangeType::UnclassifiedChange, EntityKind::Field, bf->name, class_ctx);
            }
        }
        for (const auto* af : a_fields) {
            bool found = std::any_of(b_fields.begin(), b_fields.end(),
                                     [&](const EntityNode* bf) { return bf->name == af->name; });
            if (!found) emit(ChangeType::AdditionalObjectState, EntityKind::Field, af->name, class_ctx);
        }

        compare_methods(b.children_of(EntityKind::Method), a.children_of(EntityKind::Method), class_ctx);
    }

    void compare_class(const EntityNode& b, const EntityNode& a) {
        if (b.text != a.text) {
            emit(ChangeType::UnclassifiedChange, EntityKind::Class, a.name,
                 Context{a.qualified_name, a.name, "", false});
        }
        compare_members(b, a, a.qualified_name, a.name);
    }

    void compare_methods(const NodeList& bm, const NodeList& am, const Context& class_ctx) {
        std::vector<std::ptrdiff_t> b_to_a(bm.size(), -1);
        std::vector<bool> a_used(am.size(), false);

        auto pair_pass = [&](auto&& same) {
            for (std::size_t i = 0; i < bm.size(); ++i) {
                if (b_to_a[i] >= 0) continue;
                for (std::size_t j = 0; j < am.size(); ++j) {
                    if (!a_used[j] && same(*bm[i], *am[j])) {
                        b_to_a[i] = static_cast<std::ptrdiff_t>(j);
                        a_used[j] = true;
                        break;
                    }
                }
            }
        };
        pair_pass([](const EntityNode& x, const EntityNode& y) {
            return x.name == y.name && java::parameter_signature(x) == java::parameter_signature(y);
        });
        pair_pass([](const EntityNode& x, const EntityNode& y) {
            return x.name == y.name && java::arity(x) == java::arity(y);
        });
        // A name left with exactly one candidate on each side is the same method
        // with a changed parameter list.
        for (std::size_t i = 0; i < bm.size(); ++i) {
            if (b_to_a[i] >= 0) continue;
            std::size_t count_b = 0;
            for (std::size_t k = 0; k < bm.size(); ++k) {
                if (b_to_a[k] < 0 && bm[k]->name == bm[i]->name) ++count_b;
            }
            std::vector<std::size_t> candidates;
            for (std::size_t j = 0; j < am.size(); ++j) {
                if (!a_used[j] && am[j]->name == bm[i]->name) candidates.push_back(j);
            }
            if (count_b == 1 && candidates.size() == 1) {
                b_to_a[i] = static_cast<std::ptrdiff_t>(candidates[0]);
                a_used[candidates[0]] = true;
            }
        }

        std::vector<std::size_t> removed;
        std::vector<std::size_t> added;
        for (std::size_t i = 0; i < bm.size(); ++i) {
            if (b_to_a[i] < 0) removed.push_back(i);
        }
        for (std::size_t j = 0; j < am.size(); ++j) {
            if (!a_used[j]) added.push_back(j);
        }
        if (removed.size() == 1 && added.size() == 1 && body_texts(*bm[removed[0]]) == body_texts(*am[added[0]])) {
            const EntityNode& renamed = *am[added[0]];
            emit(ChangeType::MethodRenaming, EntityKind::Method, renamed.name, class_ctx);
            b_to_a[removed[0]] = static_cast<std::ptrdiff_t>(added[0]);
            removed.clear();
            added.clear();
        }

        for (std::size_t i : removed) {
            emit(ChangeType::RemovedFunctionality, EntityKind::Method, bm[i]->name,
                 Context{class_ctx.parent, class_ctx.enclosing_class, bm[i]->name,
                         java::has_test_annotation(*bm[i])});
        }
        for (std::size_t j : added) {
            emit(ChangeType::AdditionalFunctionality, EntityKind::Method, am[j]->name,
                 Context{class_ctx.parent, class_ctx.enclosing_class, am[j]->name,
                         java::has_test_annotation(*am[j])});
        }
        for (std::size_t i = 0; i < bm.size(); ++i) {
            if (b_to_a[i] >= 0) compare_method(*bm[i], *am[static_cast<std::size_t>(b_to_a[i])], class_ctx);
        }
    }

    void compare_method(const EntityNode& b, const EntityNode& a, const Context& class_ctx) {
        Context ctx{a.qualified_name, class_ctx.enclosing_class, a.name,
                    java::has_test_annotation(a) || java::has_test_annotation(b)};

        const EntityNode* b_ret = single_child(b, EntityKind::ReturnType);
        const EntityNode* a_ret = single_child(a, EntityKind::ReturnType);
        if (b_ret != nullptr && a_ret != nullptr && b_ret->text != a_ret->text) {
            emit(ChangeType::ReturnTypeChange, EntityKind::ReturnType, a_ret->name, ctx);
        }

        auto b_mods = names_of(b, EntityKind::Modifier);
        auto a_mods = names_of(a, EntityKind::Modifier);
        for (const auto& m : a_mods) {
            if (b_mods.count(m)) continue;
            emit(m == "final" ? ChangeType::RemovingMethodOverridability : ChangeType::UnclassifiedChange,
                 EntityKind::Modifier, m, ctx);
        }
        for (const auto& m : b_mods) {
            if (a_mods.count(m)) continue;
            emit(m == "final" ? ChangeType::AddingMethodOverridability : ChangeType::UnclassifiedChange,
                 EntityKind::Modifier, m, ctx);
        }

        std::set<std::pair<std::string, std::string>> b_anns;
        std::set<std::pair<std::string, std::string>> a_anns;
        for (const auto* n : b.children_of(EntityKind::Annotation)) b_anns.emplace(n->name, n->text);
        for (const auto* n : a.children_of(EntityKind::Annotation)) a_anns.emplace(n->name, n->text);
        for (const auto& ann : a_anns) {
            if (!b_anns.count(ann)) emit(ChangeType::UnclassifiedChange, EntityKind::Annotation, ann.first, ctx);
        }
        for (const auto& ann : b_anns) {
            if (!a_anns.count(ann)) emit(ChangeType::UnclassifiedChange, EntityKind::Annotation, ann.first, ctx);
        }

        compare_parameters(b.children_of(EntityKind::Parameter), a.children_of(EntityKind::Parameter), ctx);

        if (b.text != a.text) emit(ChangeType::UnclassifiedChange, EntityKind::Method, a.name, ctx);

        MethodDiff diff{*this, ctx, {}, {}};
        diff.children(statements_of(b), statements_of(a));
        diff.finish();
    }

    void compare_parameters(const NodeList& bp, const NodeList& ap, const Context& ctx) {
        if (bp.size() == ap.size()) {
            for (std::size_t i = 0; i < bp.size(); ++i) {
                if (bp[i]->name != ap[i]->name || bp[i]->text != ap[i]->text) {
                    emit(ChangeType::UnclassifiedChange, EntityKind::Parameter, ap[i]->name, ctx);
                }
            }
            return;
        }
        auto find = [](const NodeList& list, const std::string& name) {
            return std::find_if(list.begin(), list.end(), [&](const EntityNode* p) { return p->name == name; });
        };
        for (const auto* p : bp) {
            auto it = find(ap, p->name);
            if (it == ap.end()) {
                emit(ChangeType::ParameterDelete, EntityKind::Parameter, p->name, ctx);
            } else if ((*it)->text != p->text) {
                emit(ChangeType::UnclassifiedChange, EntityKind::Parameter, p->name, ctx);
            }
        }
        for (const auto* p : ap) {
            if (find(bp, p->name) == bp.end()) emit(ChangeType::ParameterInsert, EntityKind::Parameter, p->name, ctx);
        }
    }

    // Statement-level differencing inside one matched method pair.
    struct MethodDiff {
        Distiller& self;
        const Context& ctx;
        NodeList deleted_roots;
        NodeList inserted_roots;

        void children(const NodeList& bs, const NodeList& as) {
            std::vector<std::ptrdiff_t> b_to_a(bs.size(), -1);
            std::vector<bool> a_used(as.size(), false);
            std::vector<std::string> b_text(bs.size());
            std::vector<std::string> a_text(as.size());
            for (std::size_t i = 0; i < bs.size(); ++i) b_text[i] = java::subtree_text(*bs[i]);
            for (std::size_t j = 0; j < as.size(); ++j) a_text[j] = java::subtree_text(*as[j]);

            for (std::size_t i = 0; i < bs.size(); ++i) {
                for (std::size_t j = 0; j < as.size(); ++j) {
                    if (!a_used[j] && b_text[i] == a_text[j]) {
                        b_to_a[i] = static_cast<std::ptrdiff_t>(j);
                        a_used[j] = true;
                        break;
                    }
                }
            }

            struct Candidate {
                double similarity;
                std::size_t b;
                std::size_t a;
            };
            std::vector<Candidate> candidates;
            for (std::size_t i = 0; i < bs.size(); ++i) {
                if (b_to_a[i] >= 0) continue;
                for (std::size_t j = 0; j < as.size(); ++j) {
                    if (a_used[j] || match_key(*bs[i]) != match_key(*as[j])) continue;
                    double s = token_similarity(b_text[i], a_text[j]);
                    if (s >= kStatementMatchThreshold) candidates.push_back({s, i, j});
                }
            }
            std::stable_sort(candidates.begin(), candidates.end(),
                             [](const Candidate& x, const Candidate& y) { return x.similarity > y.similarity; });
            for (const auto& c : candidates) {
                if (b_to_a[c.b] >= 0 || a_used[c.a]) continue;
                b_to_a[c.b] = static_cast<std::ptrdiff_t>(c.a);
                a_used[c.a] = true;
            }

            // Matched statements off the longest in-order chain moved among their siblings.
            std::vector<std::size_t> matched_b;
            std::vector<std::size_t> matched_a;
            for (std::size_t i = 0; i < bs.size(); ++i) {
                if (b_to_a[i] < 0) continue;
                matched_b.push_back(i);
                matched_a.push_back(static_cast<std::size_t>(b_to_a[i]));
            }
            std::vector<bool> in_order(matched_b.size(), false);
            for (std::size_t k : longest_increasing(matched_a)) in_order[k] = true;

            for (std::size_t k = 0; k < matched_b.size(); ++k) {
                const EntityNode& bn = *bs[matched_b[k]];
                const EntityNode& an = *as[matched_a[k]];
                if (!in_order[k]) self.emit(ChangeType::StatementOrderingChange, EntityKind::Statement, an.text, ctx);
                statement(bn, an);
            }
            for (std::size_t i = 0; i < bs.size(); ++i) {
                if (b_to_a[i] < 0) deleted_roots.push_back(bs[i]);
            }
            for (std::size_t j = 0; j < as.size(); ++j) {
                if (!a_used[j]) inserted_roots.push_back(as[j]);
            }
        }

        void statement(const EntityNode& b, const EntityNode& a) {
            if (b.text != a.text) self.emit(ChangeType::StatementUpdate, EntityKind::Statement, a.text, ctx);

            const EntityNode* b_cond = single_child(b, EntityKind::Condition);
            const EntityNode* a_cond = single_child(a, EntityKind::Condition);
            if (b_cond != nullptr && a_cond != nullptr) {
                if (b_cond->text != a_cond->text) {
                    if (kConditionKeywords.count(a.text)) {
                        self.emit(ChangeType::ConditionExpressionChange, EntityKind::Condition, a_cond->text, ctx);
                    } else {
                        self.emit(ChangeType::StatementUpdate, EntityKind::Statement, a.text, ctx);
                    }
                }
            } else if ((b_cond == nullptr) != (a_cond == nullptr)) {
                self.emit(ChangeType::StatementUpdate, EntityKind::Statement, a.text, ctx);
            }

            children(statements_of(b), statements_of(a));

            const EntityNode* b_else = single_child(b, EntityKind::ElsePart);
            const EntityNode* a_else = single_child(a, EntityKind::ElsePart);
            if (b_else != nullptr && a_else != nullptr) {
                children(statements_of(*b_else), statements_of(*a_else));
            } else if (a_else != nullptr) {
                self.emit(ChangeType::ElsePartInsert, EntityKind::ElsePart, "else", ctx);
                for (const auto* s : statements_of(*a_else)) inserted_roots.push_back(s);
            } else if (b_else != nullptr) {
                self.emit(ChangeType::ElsePartDelete, EntityKind::ElsePart, "else", ctx);
                for (const auto* s : statements_of(*b_else)) deleted_roots.push_back(s);
            }
        }

        void emit_subtree(const EntityNode& node, ChangeType type) {
            if (node.kind == EntityKind::Statement) self.emit(type, EntityKind::Statement, node.text, ctx);
            for (const auto& child : node.children) emit_subtree(child, type);
        }

        void finish() {
            std::vector<bool> ins_used(inserted_roots.size(), false);
            for (const auto* del : deleted_roots) {
                std::string text = java::subtree_text(*del);
                bool moved = false;
                for (std::size_t j = 0; j < inserted_roots.size(); ++j) {
                    if (!ins_used[j] && java::subtree_text(*inserted_roots[j]) == text) {
                        ins_used[j] = true;
                        moved = true;
                        self.emit(ChangeType::UnclassifiedChange, EntityKind::Statement, inserted_roots[j]->text, ctx);
                        break;
                    }
                }
                if (!moved) emit_subtree(*del, ChangeType::StatementDelete);
            }
            for (std::size_t j = 0; j < inserted_roots.size(); ++j) {
                if (!ins_used[j]) emit_subtree(*inserted_roots[j], ChangeType::StatementInsert);
            }
        }
    };

    std::string file_;
    std::string commit_;
    std::vector<SourceChange> out_;
};

}  // namespace

double token_similarity(const std::string& a, const std::string& b) {
    auto ta = split_tokens(a);
    auto tb = split_tokens(b);
    if (ta.empty() && tb.empty()) return 1.0;
    std::map<std::string, int> counts;
    for (const auto& t : ta) ++counts[t];
    std::size_t common = 0;
    for (const auto& t : tb) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    return 2.0 * static_cast<double>(common) / static_cast<double>(ta.size() + tb.size());
}

std::vector<SourceChange> distill(const EntityNode* before, const EntityNode* after, const std::string& file_path,
                                  const std::string& commit_id) {
    return Distiller(file_path, commit_id).run(before, after);
}

}  // namespace coevo::distill
