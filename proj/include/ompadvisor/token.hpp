#pragma once

#include <cstddef>
#include <string>

namespace ompadvisor {

enum class TokenKind {
    Identifier,
    Keyword,
    IntLiteral,
    FloatLiteral,
    CharLiteral,
    StringLiteral,
    Operator,
    Punctuation,
    // A whole `#pragma ...` line, with backslash continuations already
    // joined and internal whitespace collapsed to single spaces.
    PragmaLine,
};

struct Token {
    std::string lexeme;
    TokenKind kind = TokenKind::Identifier;
    int line = 1;
    int column = 1;
    // Byte offsets into the original source, [begin, end).
    std::size_t begin = 0;
    std::size_t end = 0;
};

const char* token_kind_name(TokenKind kind);

}  // namespace ompadvisor
