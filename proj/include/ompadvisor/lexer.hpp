#pragma once

#include <string_view>
#include <vector>

#include "ompadvisor/token.hpp"

namespace ompadvisor {

// Tokenizes a C translation unit (or a bare statement list).
//
//  - comments (both styles) are discarded,
//  - `#pragma` lines become single PragmaLine tokens; a trailing backslash
//    joins the next physical line,
//  - every other preprocessor line (#include, #define, #if, ...) is dropped,
//  - maximal-munch operators, so `++`, `<<=`, `->` come out as one token.
//
// Throws LexError on unterminated comments/literals and on bytes that cannot
// start any token.
std::vector<Token> lex(std::string_view source);

}  // namespace ompadvisor
