#include "coevo/java/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>

namespace coevo::java {

ParseError::ParseError(const std::string& what, int line, int column)
    : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
      line_(line),
      column_(column) {}

namespace {

const std::set<std::string, std::less<>> kKeywords{
    "abstract", "assert",     "boolean",   "break",     "byte",     "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",  "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",  "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",     "interface",
    "long",     "native",     "new",       "package",   "private",  "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",    "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",      "void",      "volatile",
    "while",    "true",       "false",     "null",
};

const std::set<std::string, std::less<>> kModifiers{
    "public", "protected", "private",  "static",       "abstract", "final",
    "native", "transient", "volatile", "synchronized", "strictfp", "default",
};

const std::set<std::string, std::less<>> kPrimitives{
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
};

// Longest operators first; '>' is never merged so nested generics close cleanly.
constexpr std::array<std::string_view, 30> kOperators{
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=",
    "*=",  "/=",  "&=", "|=", "^=", "%=", "<<", "(",  ")",  "{",  "}",  "[",  "]",  ";",
    ",",   ".",
};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool is_ident_part(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_trivia();
            if (pos_ >= src_.size()) break;
            out.push_back(next());
        }
        out.push_back(Token{TokenKind::End, "", line_, col_});
        return out;
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                int line = line_, col = col_;
                advance();
                advance();
                while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
                if (pos_ >= src_.size()) throw ParseError("unterminated comment", line, col);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    Token next() {
        Token tok;
        tok.line = line_;
        tok.column = col_;
        std::size_t start = pos_;
        auto c = static_cast<unsigned char>(peek());

        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_part(static_cast<unsigned char>(peek()))) advance();
            tok.text = std::string(src_.substr(start, pos_ - start));
            tok.kind = kKeywords.count(tok.text) ? TokenKind::Keyword : TokenKind::Identifier;
            return tok;
        }
        if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            while (pos_ < src_.size()) {
                char d = peek();
                char prev = pos_ > start ? src_[pos_ - 1] : '\0';
                bool exponent_sign = (d == '+' || d == '-') &&
                                     (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P') &&
                                     !(src_.substr(start, 2) == "0x" || src_.substr(start, 2) == "0X");
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.' || exponent_sign) {
                    advance();
                } else {
                    break;
                }
            }
            tok.kind = TokenKind::Literal;
            tok.text = std::string(src_.substr(start, pos_ - start));
            return tok;
        }
        if (c == '"' && peek(1) == '"' && peek(2) == '"') {
            advance();
            advance();
            advance();
            while (pos_ < src_.size() && !(peek() == '"' && peek(1) == '"' && peek(2) == '"')) {
                if (peek() == '\\') advance();
                if (pos_ < src_.size()) advance();
            }
            if (pos_ >= src_.size()) throw ParseError("unterminated text block", tok.line, tok.column);
            advance();
            advance();
            advance();
            tok.kind = TokenKind::Literal;
            tok.text = std::string(src_.substr(start, pos_ - start));
            return tok;
        }
        if (c == '"' || c == '\'') {
            char quote = static_cast<char>(c);
            advance();
            while (pos_ < src_.size() && peek() != quote) {
                if (peek() == '\n') break;
                if (peek() == '\\') advance();
                if (pos_ < src_.size()) advance();
            }
            if (pos_ >= src_.size() || peek() != quote) {
                throw ParseError("unterminated literal", tok.line, tok.column);
            }
            advance();
            tok.kind = TokenKind::Literal;
            tok.text = std::string(src_.substr(start, pos_ - start));
            return tok;
        }
        for (auto op : kOperators) {
            if (src_.substr(pos_, op.size()) == op) {
                for (std::size_t i = 0; i < op.size(); ++i) advance();
                tok.kind = TokenKind::Operator;
                tok.text = std::string(op);
                return tok;
            }
        }
        if (std::string_view("+-*/%=<>!~?:&|^@").find(static_cast<char>(c)) != std::string_view::npos) {
            advance();
            tok.kind = TokenKind::Operator;
            tok.text = std::string(1, static_cast<char>(c));
            return tok;
        }
        throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", tok.line,
                         tok.column);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct Modifiers {
    std::vector<std::pair<std::string, std::string>> annotations;  // name, full text
    std::vector<std::string> keywords;
    std::string text;
    int start_line = 0;
    bool empty() const { return annotations.empty() && keywords.empty(); }
};

bool is_type_keyword(const Token& t) {
    return t.kind == TokenKind::Keyword && (t.text == "class" || t.text == "interface" || t.text == "enum");
}

std::string join_tokens(const std::vector<Token>& toks, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (!out.empty()) out += ' ';
        out += toks[i].text;
    }
    return out;
}

std::string qualify(const std::string& parent, const std::string& name) {
    return parent.empty() ? name : parent + "." + name;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    EntityNode compilation_unit() {
        EntityNode root;
        root.kind = EntityKind::Class;
        root.span.start_line = 1;
        if (is("package")) {
            ++pos_;
            std::size_t begin = pos_;
            while (!is(";")) expect_not_end();
            root.text = join_tokens(toks_, begin, pos_);
            ++pos_;
        }
        while (!at_end()) {
            if (is(";")) {
                ++pos_;
                continue;
            }
            if (is("import")) {
                while (!is(";")) expect_not_end();
                ++pos_;
                continue;
            }
            Modifiers mods = modifiers();
            if (!starts_type_declaration()) fail("expected type declaration");
            root.children.push_back(type_declaration(mods, root.qualified_name));
        }
        root.span.end_line = toks_.back().line;
        return root;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& ahead(std::size_t n) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }
    bool at_end() const { return cur().kind == TokenKind::End; }
    bool is(std::string_view text) const { return cur().kind != TokenKind::End && cur().text == text; }
    bool is_ident() const { return cur().kind == TokenKind::Identifier; }

    [[noreturn]] void fail(const std::string& what) const {
        std::string msg = what;
        if (!at_end()) msg += " near '" + cur().text + "'";
        throw ParseError(msg, cur().line, cur().column);
    }

    void expect_not_end() {
        if (at_end()) fail("unexpected end of input");
        ++pos_;
    }

    void expect(std::string_view text) {
        if (!is(text)) fail("expected '" + std::string(text) + "'");
        ++pos_;
    }

    std::string identifier() {
        if (!is_ident()) fail("expected identifier");
        return toks_[pos_++].text;
    }

    int prev_line() const { return pos_ > 0 ? toks_[pos_ - 1].line : 1; }

    // Skips a balanced (), [] or {} group starting at the current opener.
    void skip_balanced() {
        std::vector<char> stack;
        do {
            if (at_end()) fail("unbalanced brackets");
            const std::string& t = cur().text;
            if (cur().kind == TokenKind::Operator && (t == "(" || t == "[" || t == "{")) {
                stack.push_back(t[0]);
            } else if (cur().kind == TokenKind::Operator && (t == ")" || t == "]" || t == "}")) {
                char open = t == ")" ? '(' : t == "]" ? '[' : '{';
                if (stack.empty() || stack.back() != open) fail("mismatched '" + t + "'");
                stack.pop_back();
            }
            ++pos_;
        } while (!stack.empty());
    }

    // If a generic argument/parameter list starts at `from`, returns the index
    // one past its closing '>'.
    std::optional<std::size_t> type_args_end(std::size_t from) const {
        if (toks_[from].text != "<") return std::nullopt;
        int depth = 0;
        for (std::size_t i = from; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.text == "<") {
                ++depth;
            } else if (t.text == ">") {
                if (--depth == 0) return i + 1;
            } else if (t.kind == TokenKind::Identifier || kPrimitives.count(t.text) || t.text == "." ||
                       t.text == "," || t.text == "?" || t.text == "extends" || t.text == "super" ||
                       t.text == "&" || t.text == "[" || t.text == "]" || t.text == "@") {
                continue;
            } else {
                return std::nullopt;
            }
        }
        return std::nullopt;
    }

    void skip_type_args() {
        auto end = type_args_end(pos_);
        if (!end) fail("malformed type arguments");
        pos_ = *end;
    }

    Modifiers modifiers() {
        Modifiers mods;
        mods.start_line = cur().line;
        std::size_t begin = pos_;
        while (true) {
            if (is("@") && ahead(1).text != "interface") {
                std::size_t ann_begin = pos_;
                ++pos_;
                std::string name = identifier();
                while (is(".") && ahead(1).kind == TokenKind::Identifier) {
                    ++pos_;
                    name += "." + identifier();
                }
                if (is("(")) skip_balanced();
                mods.annotations.emplace_back(name, join_tokens(toks_, ann_begin, pos_));
            } else if (cur().kind == TokenKind::Keyword && kModifiers.count(cur().text) &&
                       !(cur().text == "default" && (ahead(1).text == ":" || ahead(1).text == "->"))) {
                mods.keywords.push_back(toks_[pos_++].text);
            } else if (is_ident() && cur().text == "sealed" &&
                       (ahead(1).kind == TokenKind::Keyword || ahead(1).text == "record")) {
                mods.keywords.push_back(toks_[pos_++].text);
            } else if (is_ident() && cur().text == "non" && ahead(1).text == "-" && ahead(2).text == "sealed") {
                pos_ += 3;
                mods.keywords.emplace_back("non-sealed");
            } else {
                break;
            }
        }
        mods.text = join_tokens(toks_, begin, pos_);
        return mods;
    }

    bool starts_type_declaration() const {
        if (is_type_keyword(cur())) return true;
        if (cur().text == "@" && ahead(1).text == "interface") return true;
        return cur().kind == TokenKind::Identifier && cur().text == "record" &&
               ahead(1).kind == TokenKind::Identifier && (ahead(2).text == "(" || ahead(2).text == "<");
    }

    EntityNode type_declaration(const Modifiers& mods, const std::string& parent_qn) {
        EntityNode node;
        node.kind = EntityKind::Class;
        node.span.start_line = mods.empty() ? cur().line : mods.start_line;
        std::size_t header_begin = pos_;
        bool is_enum = is("enum");
        if (is("@")) ++pos_;
        ++pos_;  // class / interface / enum / record
        node.name = identifier();
        node.qualified_name = qualify(parent_qn, node.name);
        while (!is("{")) {
            if (is("(") || is("[")) {
                skip_balanced();
            } else {
                expect_not_end();
            }
        }
        node.text = mods.text.empty() ? join_tokens(toks_, header_begin, pos_)
                                      : mods.text + " " + join_tokens(toks_, header_begin, pos_);
        class_body(node, is_enum);
        node.span.end_line = prev_line();
        return node;
    }

    void class_body(EntityNode& cls, bool is_enum) {
        expect("{");
        if (is_enum) enum_constants(cls);
        while (!is("}")) {
            if (at_end()) fail("unterminated class body");
            if (is(";")) {
                ++pos_;
                continue;
            }
            if (is("{") || (is("static") && ahead(1).text == "{")) {
                initializer(cls);
                continue;
            }
            Modifiers mods = modifiers();
            if (starts_type_declaration()) {
                cls.children.push_back(type_declaration(mods, cls.qualified_name));
                continue;
            }
            member(cls, mods);
        }
        ++pos_;
    }

    void enum_constants(EntityNode& cls) {
        while (!is(";") && !is("}")) {
            if (at_end()) fail("unterminated enum");
            int line = cur().line;
            std::size_t begin = pos_;
            Modifiers mods = modifiers();
            EntityNode constant;
            constant.kind = EntityKind::Field;
            constant.name = identifier();
            constant.qualified_name = qualify(cls.qualified_name, constant.name);
            if (is("(")) skip_balanced();
            if (is("{")) skip_balanced();
            constant.text = join_tokens(toks_, begin, pos_);
            constant.span = {mods.empty() ? line : mods.start_line, prev_line()};
            cls.children.push_back(std::move(constant));
            if (is(",")) ++pos_;
        }
        if (is(";")) ++pos_;
    }

    void initializer(EntityNode& cls) {
        EntityNode method;
        method.kind = EntityKind::Method;
        method.span.start_line = cur().line;
        if (is("static")) {
            ++pos_;
            method.name = "<clinit>";
        } else {
            method.name = "<init>";
        }
        method.qualified_name = qualify(cls.qualified_name, method.name);
        block_into(method, method.qualified_name);
        method.span.end_line = prev_line();
        cls.children.push_back(std::move(method));
    }

    std::string type_text() {
        while (is("@")) {
            ++pos_;
            identifier();
            while (is(".") && ahead(1).kind == TokenKind::Identifier) pos_ += 2;
            if (is("(")) skip_balanced();
        }
        std::size_t type_begin = pos_;
        if (cur().kind == TokenKind::Keyword && kPrimitives.count(cur().text)) {
            ++pos_;
        } else {
            identifier();
            if (is("<")) skip_type_args();
            while (is(".") && ahead(1).kind == TokenKind::Identifier) {
                pos_ += 2;
                if (is("<")) skip_type_args();
            }
        }
        while (is("[") && ahead(1).text == "]") pos_ += 2;
        if (is("...")) ++pos_;
        return join_tokens(toks_, type_begin, pos_);
    }

    void member(EntityNode& cls, const Modifiers& mods) {
        int start_line = mods.empty() ? cur().line : mods.start_line;
        if (is("<")) skip_type_args();

        EntityNode method;
        method.kind = EntityKind::Method;
        std::string return_type;
        bool compact_constructor = is_ident() && ahead(1).text == "{";
        bool constructor = compact_constructor || (is_ident() && ahead(1).text == "(");
        if (constructor) {
            method.name = identifier();
        } else {
            return_type = type_text();
            std::string name = identifier();
            if (!is("(")) {
                fields(cls, mods, return_type, name, start_line);
                return;
            }
            method.name = std::move(name);
        }

        method.qualified_name = qualify(cls.qualified_name, method.name);
        method.span.start_line = start_line;
        for (const auto& [ann_name, ann_text] : mods.annotations) {
            method.children.push_back(EntityNode{EntityKind::Annotation, ann_name,
                                                 qualify(method.qualified_name, ann_name), ann_text, {},
                                                 {start_line, start_line}});
        }
        for (const auto& kw : mods.keywords) {
            method.children.push_back(EntityNode{EntityKind::Modifier, kw, qualify(method.qualified_name, kw),
                                                 kw, {}, {start_line, start_line}});
        }
        std::size_t return_slot = method.children.size();
        if (!compact_constructor) parameters(method);
        while (is("[") && ahead(1).text == "]") {
            pos_ += 2;
            return_type += " [ ]";
        }
        if (!constructor) {
            method.children.insert(
                method.children.begin() + static_cast<std::ptrdiff_t>(return_slot),
                EntityNode{EntityKind::ReturnType, return_type, qualify(method.qualified_name, return_type),
                           return_type, {}, {start_line, start_line}});
        }
        if (is("throws")) {
            std::size_t begin = pos_;
            while (!is("{") && !is(";")) expect_not_end();
            method.text = join_tokens(toks_, begin, pos_);
        }
        if (is("default")) {
            while (!is(";")) {
                if (is("(") || is("{") || is("[")) {
                    skip_balanced();
                } else {
                    expect_not_end();
                }
            }
        }
        if (is(";")) {
            ++pos_;
        } else {
            block_into(method, method.qualified_name);
        }
        method.span.end_line = prev_line();
        cls.children.push_back(std::move(method));
    }

    void parameters(EntityNode& method) {
        expect("(");
        while (!is(")")) {
            if (at_end()) fail("unterminated parameter list");
            int line = cur().line;
            Modifiers mods = modifiers();
            std::string type = type_text();
            std::string name;
            if (is("this")) {
                ++pos_;
                name = "this";
            } else {
                while (is_ident() && ahead(1).text == ".") pos_ += 2;  // receiver Outer.this
                if (is("this")) {
                    ++pos_;
                    name = "this";
                } else {
                    name = identifier();
                }
            }
            while (is("[") && ahead(1).text == "]") {
                pos_ += 2;
                type += " [ ]";
            }
            method.children.push_back(EntityNode{EntityKind::Parameter, name, qualify(method.qualified_name, name),
                                                 type, {}, {mods.empty() ? line : mods.start_line, prev_line()}});
            if (is(",")) {
                ++pos_;
            } else if (!is(")")) {
                fail("expected ',' or ')' in parameter list");
            }
        }
        ++pos_;
    }

    void fields(EntityNode& cls, const Modifiers& mods, const std::string& type, std::string name,
                int start_line) {
        while (true) {
            std::size_t dims_begin = pos_;
            while (is("[") && ahead(1).text == "]") pos_ += 2;
            std::string dims = join_tokens(toks_, dims_begin, pos_);
            std::string init;
            if (is("=")) {
                ++pos_;
                std::size_t init_begin = pos_;
                skip_expression({",", ";"});
                init = join_tokens(toks_, init_begin, pos_);
            }
            EntityNode field;
            field.kind = EntityKind::Field;
            field.name = name;
            field.qualified_name = qualify(cls.qualified_name, name);
            field.text = mods.text;
            if (!field.text.empty()) field.text += ' ';
            field.text += type + " " + name;
            if (!dims.empty()) field.text += " " + dims;
            if (!init.empty()) field.text += " = " + init;
            field.span = {start_line, cur().line};
            cls.children.push_back(std::move(field));
            if (is(",")) {
                ++pos_;
                name = identifier();
                continue;
            }
            expect(";");
            break;
        }
    }

    // Advances to the first depth-0 token in `stops` (not consumed).
    void skip_expression(std::initializer_list<std::string_view> stops) {
        while (true) {
            if (at_end()) fail("unexpected end of input in expression");
            for (auto s : stops) {
                if (is(s)) return;
            }
            if (is(")") || is("]") || is("}")) fail("unexpected '" + cur().text + "'");
            if (is("(") || is("[") || is("{")) {
                skip_balanced();
            } else if (is("<")) {
                auto end = type_args_end(pos_);
                pos_ = end ? *end : pos_ + 1;
            } else {
                ++pos_;
            }
        }
    }

    void block_into(EntityNode& parent, const std::string& method_qn) {
        expect("{");
        while (!is("}")) {
            if (at_end()) fail("unterminated block");
            if (auto stmt = statement(method_qn)) parent.children.push_back(std::move(*stmt));
        }
        ++pos_;
    }

    // Statement body: a block contributes its statements, anything else itself.
    void body_into(EntityNode& parent, const std::string& method_qn) {
        if (is("{")) {
            block_into(parent, method_qn);
        } else if (auto stmt = statement(method_qn)) {
            parent.children.push_back(std::move(*stmt));
        }
    }

    EntityNode make_statement(std::string text, const std::string& method_qn, int line) {
        EntityNode node;
        node.kind = EntityKind::Statement;
        node.qualified_name = method_qn;
        node.text = std::move(text);
        node.span = {line, line};
        return node;
    }

    void condition_into(EntityNode& node, const std::string& method_qn) {
        if (!is("(")) fail("expected '('");
        int line = cur().line;
        std::size_t begin = pos_ + 1;
        skip_balanced();
        EntityNode cond;
        cond.kind = EntityKind::Condition;
        cond.qualified_name = method_qn;
        cond.text = join_tokens(toks_, begin, pos_ - 1);
        cond.span = {line, prev_line()};
        node.children.push_back(std::move(cond));
    }

    std::optional<EntityNode> statement(const std::string& method_qn) {
        int line = cur().line;
        if (is(";")) {
            ++pos_;
            return std::nullopt;
        }
        if (is("{")) {
            EntityNode node = make_statement("block", method_qn, line);
            block_into(node, method_qn);
            node.span.end_line = prev_line();
            return node;
        }
        const std::string& kw = cur().text;
        if (cur().kind == TokenKind::Keyword) {
            if (kw == "if") {
                ++pos_;
                EntityNode node = make_statement("if", method_qn, line);
                condition_into(node, method_qn);
                body_into(node, method_qn);
                if (is("else")) {
                    EntityNode else_part;
                    else_part.kind = EntityKind::ElsePart;
                    else_part.qualified_name = method_qn;
                    else_part.text = "else";
                    else_part.span.start_line = cur().line;
                    ++pos_;
                    body_into(else_part, method_qn);
                    else_part.span.end_line = prev_line();
                    node.children.push_back(std::move(else_part));
                }
                node.span.end_line = prev_line();
                return node;
            }
            if (kw == "while" || kw == "for" || kw == "synchronized") {
                std::string text = kw;
                ++pos_;
                EntityNode node = make_statement(text, method_qn, line);
                condition_into(node, method_qn);
                body_into(node, method_qn);
                node.span.end_line = prev_line();
                return node;
            }
            if (kw == "do") {
                ++pos_;
                EntityNode node = make_statement("do", method_qn, line);
                body_into(node, method_qn);
                expect("while");
                condition_into(node, method_qn);
                expect(";");
                node.span.end_line = prev_line();
                return node;
            }
            if (kw == "switch" && ahead(1).text == "(") {
                ++pos_;
                EntityNode node = make_statement("switch", method_qn, line);
                condition_into(node, method_qn);
                switch_body(node, method_qn);
                node.span.end_line = prev_line();
                return node;
            }
            if (kw == "try") {
                ++pos_;
                EntityNode node = make_statement("try", method_qn, line);
                if (is("(")) condition_into(node, method_qn);
                block_into(node, method_qn);
                while (is("catch")) {
                    EntityNode clause = make_statement("catch", method_qn, cur().line);
                    ++pos_;
                    condition_into(clause, method_qn);
                    block_into(clause, method_qn);
                    clause.span.end_line = prev_line();
                    node.children.push_back(std::move(clause));
                }
                if (is("finally")) {
                    EntityNode clause = make_statement("finally", method_qn, cur().line);
                    ++pos_;
                    block_into(clause, method_qn);
                    clause.span.end_line = prev_line();
                    node.children.push_back(std::move(clause));
                }
                node.span.end_line = prev_line();
                return node;
            }
            if (kw == "else" || kw == "catch" || kw == "finally") fail("unexpected '" + kw + "'");
            if (kw == "case" || (kw == "default" && (ahead(1).text == ":" || ahead(1).text == "->"))) {
                return switch_label(method_qn);
            }
        }
        // Local type declarations are kept as one opaque statement.
        {
            std::size_t save = pos_;
            Modifiers mods = modifiers();
            if (starts_type_declaration()) {
                std::size_t begin = save;
                while (!is("{")) {
                    if (is("(")) {
                        skip_balanced();
                    } else {
                        expect_not_end();
                    }
                }
                skip_balanced();
                EntityNode node = make_statement(join_tokens(toks_, begin, pos_), method_qn, line);
                node.span.end_line = prev_line();
                return node;
            }
            pos_ = save;
        }
        if (is_ident() && ahead(1).text == ":") {
            std::string text = cur().text + " :";
            pos_ += 2;
            return make_statement(std::move(text), method_qn, line);
        }
        std::size_t begin = pos_;
        skip_expression({";"});
        ++pos_;
        EntityNode node = make_statement(join_tokens(toks_, begin, pos_), method_qn, line);
        node.span.end_line = prev_line();
        return node;
    }

    EntityNode switch_label(const std::string& method_qn) {
        int line = cur().line;
        std::size_t begin = pos_;
        ++pos_;
        skip_expression({":", "->"});
        bool arrow = is("->");
        ++pos_;
        EntityNode label = make_statement(join_tokens(toks_, begin, pos_), method_qn, line);
        if (arrow) {
            // `case X -> expr;` keeps its target as a child so the label stays a leaf text.
            body_into(label, method_qn);
        }
        label.span.end_line = prev_line();
        return label;
    }

    void switch_body(EntityNode& node, const std::string& method_qn) {
        expect("{");
        while (!is("}")) {
            if (at_end()) fail("unterminated switch");
            if (auto stmt = statement(method_qn)) node.children.push_back(std::move(*stmt));
        }
        ++pos_;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

EntityNode parse_compilation_unit(std::string_view source) {
    Parser parser(tokenize(source));
    return parser.compilation_unit();
}

}  // namespace coevo::java
