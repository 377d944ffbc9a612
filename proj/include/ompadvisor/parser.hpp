#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ompadvisor/ast.hpp"
#include "ompadvisor/token.hpp"

namespace ompadvisor {

// A pragma line bound to the statement that immediately follows it. Several
// stacked pragmas may target the same statement.
struct PragmaAttachment {
    std::string pragma;          // normalized "#pragma ..." text
    const AstNode* target = nullptr;
    int pragma_line = 1;
};

struct SkippedConstruct {
    int line = 1;
    std::string reason;
};

struct ParseResult {
    std::unique_ptr<AstNode> root;  // TranslationUnit
    std::vector<PragmaAttachment> attachments;
    // Top-level constructs the recovery path threw away.
    std::vector<SkippedConstruct> skipped;
};

// Recursive-descent parser over the lexer's token stream. Accepts full
// translation units as well as bare statement sequences (a loop snippet on
// its own parses fine). Unsupported constructs abort only the enclosing
// top-level definition/statement, which is recorded in `skipped`; the rest
// of the unit still parses.
ParseResult parse_unit(const std::vector<Token>& tokens);

// Convenience: lex + parse.
ParseResult parse_source(std::string_view source);

}  // namespace ompadvisor
