#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coevo/error.hpp"
#include "coevo/java/entity.hpp"

namespace coevo::java {

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

enum class TokenKind { Identifier, Keyword, Literal, Operator, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    int line = 0;
    int column = 0;
};

// Splits Java source into tokens, dropping whitespace and comments.
// Throws ParseError on unterminated literals or comments.
std::vector<Token> tokenize(std::string_view source);

// Parses one compilation unit. The returned root is a CLASS node with an empty
// name acting as the container of the top-level type declarations; its
// qualified_name is empty and its text holds the package name, if any.
//
// Lambdas, generic arguments and anonymous class bodies are kept as opaque
// statement text.
EntityNode parse_compilation_unit(std::string_view source);

}  // namespace coevo::java
