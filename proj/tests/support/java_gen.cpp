#include "java_gen.hpp"

#include <algorithm>

namespace coevo::testing {

namespace {

const std::vector<std::string> kTypes{"int", "long", "String", "boolean", "double"};
const std::vector<std::string> kVars{"a", "b", "count", "total", "x"};

void render_block(const std::vector<GenStatement>& body, int indent, std::string& out);

void render_statement(const GenStatement& s, int indent, std::string& out) {
    std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
    switch (s.kind) {
        case GenStatement::Kind::Simple:
            out += pad + s.text + "\n";
            break;
        case GenStatement::Kind::If:
            out += pad + "if (" + s.text + ") {\n";
            render_block(s.body, indent + 1, out);
            if (s.else_body) {
                out += pad + "} else {\n";
                render_block(*s.else_body, indent + 1, out);
            }
            out += pad + "}\n";
            break;
        case GenStatement::Kind::For:
            out += pad + "for (" + s.text + ") {\n";
            render_block(s.body, indent + 1, out);
            out += pad + "}\n";
            break;
    }
}

void render_block(const std::vector<GenStatement>& body, int indent, std::string& out) {
    for (const auto& s : body) render_statement(s, indent, out);
}

void render_class(const GenClass& c, int indent, std::string& out) {
    std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
    out += pad + (indent == 0 ? "public " : "static ") + "class " + c.name + " {\n";
    for (const auto& f : c.fields) {
        out += pad + "    private " + f.type + " " + f.name;
        if (!f.init.empty()) out += " = " + f.init;
        out += ";\n";
    }
    for (const auto& m : c.methods) {
        out += "\n";
        if (m.test_annotation) out += pad + "    @Test\n";
        out += pad + "    ";
        for (const auto& mod : m.modifiers) out += mod + " ";
        out += m.return_type + " " + m.name + "(";
        for (std::size_t i = 0; i < m.parameters.size(); ++i) {
            if (i) out += ", ";
            out += m.parameters[i].type + " " + m.parameters[i].name;
        }
        out += ") {\n";
        render_block(m.body, indent + 2, out);
        out += pad + "    }\n";
    }
    for (const auto& inner : c.inner) {
        out += "\n";
        render_class(inner, indent + 1, out);
    }
    out += pad + "}\n";
}

// Every statement list in a method, outermost first.
void collect_blocks(std::vector<GenStatement>& body, std::vector<std::vector<GenStatement>*>& out) {
    out.push_back(&body);
    for (auto& s : body) {
        if (s.kind != GenStatement::Kind::Simple) collect_blocks(s.body, out);
        if (s.else_body) collect_blocks(*s.else_body, out);
    }
}

void collect_classes(std::vector<GenClass>& classes, std::vector<GenClass*>& out) {
    for (auto& c : classes) {
        out.push_back(&c);
        collect_classes(c.inner, out);
    }
}

}  // namespace

std::string render(const GenUnit& unit) {
    std::string out = "package gen;\n\n";
    for (const auto& c : unit.classes) {
        render_class(c, 0, out);
        out += "\n";
    }
    return out;
}

std::string JavaGenerator::fresh(const std::string& prefix) { return prefix + std::to_string(++counter_); }

std::string JavaGenerator::expression() {
    const std::string& v = kVars[static_cast<std::size_t>(pick(0, static_cast<int>(kVars.size()) - 1))];
    switch (pick(0, 3)) {
        case 0: return v + " > " + std::to_string(pick(0, 20));
        case 1: return v + " == " + std::to_string(pick(0, 20));
        case 2: return "check(" + v + ")";
        default: return v + " < limit" + std::to_string(pick(0, 5));
    }
}

GenStatement JavaGenerator::statement(int depth) {
    GenStatement s;
    int roll = pick(0, 9);
    if (depth < 2 && roll >= 8) {
        s.kind = GenStatement::Kind::If;
        s.text = expression();
        s.body = block(depth + 1);
        if (coin(0.4)) s.else_body = block(depth + 1);
    } else if (depth < 2 && roll == 7) {
        s.kind = GenStatement::Kind::For;
        std::string i = fresh("i");
        s.text = "int " + i + " = 0; " + i + " < " + std::to_string(pick(1, 9)) + "; " + i + "++";
        s.body = block(depth + 1);
    } else {
        const std::string& v = kVars[static_cast<std::size_t>(pick(0, static_cast<int>(kVars.size()) - 1))];
        switch (pick(0, 3)) {
            case 0: s.text = v + " = " + v + " + " + std::to_string(pick(1, 50)) + ";"; break;
            case 1: s.text = "log(\"" + fresh("msg") + "\");"; break;
            case 2: s.text = "int " + fresh("v") + " = " + std::to_string(pick(0, 99)) + ";"; break;
            default: s.text = "call" + std::to_string(pick(0, 30)) + "(" + v + ");"; break;
        }
    }
    return s;
}

std::vector<GenStatement> JavaGenerator::block(int depth) {
    std::vector<GenStatement> body;
    int n = pick(depth == 0 ? 1 : 1, depth == 0 ? 5 : 3);
    for (int i = 0; i < n; ++i) body.push_back(statement(depth));
    return body;
}

GenMethod JavaGenerator::method() {
    GenMethod m;
    m.name = fresh("op");
    if (coin(0.3)) m.modifiers.push_back("public");
    if (coin(0.2)) m.modifiers.push_back("final");
    m.test_annotation = coin(0.1);
    m.return_type = coin(0.5) ? "void" : kTypes[static_cast<std::size_t>(pick(0, 4))];
    int params = pick(0, 2);
    for (int i = 0; i < params; ++i) {
        m.parameters.push_back({kTypes[static_cast<std::size_t>(pick(0, 4))], fresh("p")});
    }
    m.body = block(0);
    return m;
}

GenClass JavaGenerator::klass(int depth) {
    GenClass c;
    c.name = fresh(coin(0.2) ? "Test" : "Gen");
    int fields = pick(0, 3);
    for (int i = 0; i < fields; ++i) {
        c.fields.push_back({kTypes[static_cast<std::size_t>(pick(0, 4))], fresh("f"), coin() ? std::to_string(pick(0, 9)) : ""});
    }
    int methods = pick(0, 4);
    for (int i = 0; i < methods; ++i) c.methods.push_back(method());
    if (depth == 0 && coin(0.3)) c.inner.push_back(klass(depth + 1));
    return c;
}

GenUnit JavaGenerator::unit() {
    GenUnit u;
    int n = pick(1, 2);
    for (int i = 0; i < n; ++i) u.classes.push_back(klass(0));
    return u;
}

void JavaGenerator::edit(GenUnit& unit) {
    std::vector<GenClass*> classes;
    collect_classes(unit.classes, classes);
    if (classes.empty()) {
        unit.classes.push_back(klass(0));
        return;
    }
    GenClass& c = *classes[static_cast<std::size_t>(pick(0, static_cast<int>(classes.size()) - 1))];
    auto any_method = [&]() -> GenMethod* {
        if (c.methods.empty()) return nullptr;
        return &c.methods[static_cast<std::size_t>(pick(0, static_cast<int>(c.methods.size()) - 1))];
    };
    switch (pick(0, 15)) {
        case 0:
            c.methods.insert(c.methods.begin() + pick(0, static_cast<int>(c.methods.size())), method());
            break;
        case 1:
            if (!c.methods.empty()) c.methods.erase(c.methods.begin() + pick(0, static_cast<int>(c.methods.size()) - 1));
            break;
        case 2:
            c.fields.push_back({kTypes[static_cast<std::size_t>(pick(0, 4))], fresh("f"), ""});
            break;
        case 3:
            if (!c.fields.empty()) c.fields.erase(c.fields.begin() + pick(0, static_cast<int>(c.fields.size()) - 1));
            break;
        case 4:
            if (c.inner.empty() && coin()) {
                c.inner.push_back(klass(1));
            } else if (!c.inner.empty()) {
                c.inner.erase(c.inner.begin());
            }
            break;
        case 5:
            if (coin()) {
                unit.classes.push_back(klass(0));
            } else if (unit.classes.size() > 1) {
                unit.classes.pop_back();
            }
            break;
        case 6:
            if (auto* m = any_method()) m->name = fresh("renamed");
            break;
        case 7:
            if (auto* m = any_method()) m->return_type = m->return_type == "void" ? "int" : "void";
            break;
        case 8:
            if (auto* m = any_method()) {
                if (m->parameters.empty() || coin()) {
                    m->parameters.push_back({"int", fresh("p")});
                } else {
                    m->parameters.pop_back();
                }
            }
            break;
        case 9:
            if (auto* m = any_method()) {
                auto it = std::find(m->modifiers.begin(), m->modifiers.end(), "final");
                if (it == m->modifiers.end()) {
                    m->modifiers.push_back("final");
                } else {
                    m->modifiers.erase(it);
                }
            }
            break;
        default:
            if (auto* m = any_method()) {
                std::vector<std::vector<GenStatement>*> blocks;
                collect_blocks(m->body, blocks);
                auto& b = *blocks[static_cast<std::size_t>(pick(0, static_cast<int>(blocks.size()) - 1))];
                int what = pick(0, 5);
                if (what == 0 || b.empty()) {
                    b.insert(b.begin() + pick(0, static_cast<int>(b.size())), statement(1));
                } else if (what == 1 && b.size() > 1) {
                    b.erase(b.begin() + pick(0, static_cast<int>(b.size()) - 1));
                } else if (what == 2 && b.size() > 1) {
                    std::swap(b.front(), b.back());
                } else {
                    auto& s = b[static_cast<std::size_t>(pick(0, static_cast<int>(b.size()) - 1))];
                    if (s.kind == GenStatement::Kind::If) {
                        if (what == 3) {
                            s.text = expression();
                        } else if (s.else_body) {
                            s.else_body.reset();
                        } else {
                            s.else_body = block(2);
                        }
                    } else if (s.kind == GenStatement::Kind::Simple) {
                        s.text = "update(" + std::to_string(pick(0, 99)) + ", " + s.text.substr(0, s.text.size() - 1) + ");";
                        if (s.text.find('=') != std::string::npos) s.text = "log(\"" + fresh("u") + "\");";
                    }
                }
            }
            break;
    }
}

GenUnit JavaGenerator::mutate(GenUnit unit, int max_edits) {
    int n = pick(1, max_edits);
    for (int i = 0; i < n; ++i) edit(unit);
    return unit;
}

}  // namespace coevo::testing
