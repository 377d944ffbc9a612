#include "ompadvisor/lexer.hpp"

#include <array>
#include <cctype>
#include <string>

#include "ompadvisor/error.hpp"

namespace ompadvisor {

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Keyword: return "keyword";
        case TokenKind::IntLiteral: return "int-literal";
        case TokenKind::FloatLiteral: return "float-literal";
        case TokenKind::CharLiteral: return "char-literal";
        case TokenKind::StringLiteral: return "string-literal";
        case TokenKind::Operator: return "operator";
        case TokenKind::Punctuation: return "punctuation";
        case TokenKind::PragmaLine: return "pragma-line";
    }
    return "unknown";
}

namespace {

const std::array<const char*, 37> kKeywords = {
    "auto",     "break",    "case",     "char",   "const",    "continue",
    "default",  "do",       "double",   "else",   "enum",     "extern",
    "float",    "for",      "goto",     "if",     "inline",   "int",
    "long",     "register", "restrict", "return", "short",    "signed",
    "sizeof",   "static",   "struct",   "switch", "typedef",  "union",
    "unsigned", "void",     "volatile", "while",  "_Bool",    "_Complex",
    "_Imaginary",
};

bool is_keyword(std::string_view s) {
    for (const char* k : kKeywords) {
        if (s == k) return true;
    }
    return false;
}

// Longest first so maximal munch falls out of a linear scan.
const std::array<const char*, 46> kOperators = {
    ">>=", "<<=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==",
    "!=",  "&&",  "||",  "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=",
    "+",   "-",   "*",   "/",  "%",  "<",  ">",  "=",  "&",  "|",  "^",
    "~",   "!",   "?",   ":",  ".",  ",",  ";",  "(",  ")",  "[",  "]",
    "{",   "}",
};

bool is_punct_char(char c) {
    return c == '(' || c == ')' || c == '[' || c == ']' || c == '{' ||
           c == '}' || c == ';' || c == ',';
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_hex_digit(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

class Scanner {
public:
    explicit Scanner(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (!at_end()) {
            skip_space_and_comments();
            if (at_end()) break;
            const char c = peek();
            if (c == '#' && at_line_start_) {
                scan_preprocessor(out);
            } else if (is_ident_start(c)) {
                out.push_back(scan_identifier());
            } else if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
                out.push_back(scan_number());
            } else if (c == '"') {
                out.push_back(scan_string());
            } else if (c == '\'') {
                out.push_back(scan_char());
            } else {
                out.push_back(scan_operator());
            }
        }
        return out;
    }

private:
    bool at_end() const { return pos_ >= src_.size(); }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
            at_line_start_ = true;
        } else {
            ++column_;
            if (!std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                at_line_start_ = false;
            }
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (!at_end()) {
            const char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '\\' && (peek(1) == '\n' ||
                                     (peek(1) == '\r' && peek(2) == '\n'))) {
                // Spliced line outside a pragma: treat as whitespace.
                advance();
                if (peek() == '\r') advance();
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                const int start_line = line_;
                const int start_col = column_;
                advance();
                advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (at_end()) {
                        throw LexError("unterminated comment", start_line,
                                       start_col);
                    }
                    advance();
                }
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    Token make(TokenKind kind, std::size_t begin, int line, int col) const {
        Token t;
        t.kind = kind;
        t.lexeme = std::string(src_.substr(begin, pos_ - begin));
        t.line = line;
        t.column = col;
        t.begin = begin;
        t.end = pos_;
        return t;
    }

    Token scan_identifier() {
        const std::size_t begin = pos_;
        const int line = line_, col = column_;
        while (!at_end() && is_ident_char(peek())) advance();
        Token t = make(TokenKind::Identifier, begin, line, col);
        if (is_keyword(t.lexeme)) t.kind = TokenKind::Keyword;
        return t;
    }

    Token scan_number() {
        const std::size_t begin = pos_;
        const int line = line_, col = column_;
        bool is_float = false;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            advance();
            advance();
            while (is_hex_digit(peek())) advance();
            if (peek() == '.') {
                is_float = true;
                advance();
                while (is_hex_digit(peek())) advance();
            }
            if (peek() == 'p' || peek() == 'P') {
                is_float = true;
                advance();
                if (peek() == '+' || peek() == '-') advance();
                while (is_digit(peek())) advance();
            }
        } else {
            while (is_digit(peek())) advance();
            if (peek() == '.') {
                is_float = true;
                advance();
                while (is_digit(peek())) advance();
            }
            if (peek() == 'e' || peek() == 'E') {
                is_float = true;
                advance();
                if (peek() == '+' || peek() == '-') advance();
                while (is_digit(peek())) advance();
            }
        }
        while (is_ident_char(peek())) {
            if (peek() == 'f' || peek() == 'F') is_float = true;
            advance();
        }
        return make(is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral,
                    begin, line, col);
    }

    Token scan_string() {
        const std::size_t begin = pos_;
        const int line = line_, col = column_;
        advance();
        while (true) {
            if (at_end() || peek() == '\n') {
                throw LexError("unterminated string literal", line, col);
            }
            if (peek() == '\\') {
                advance();
                advance();
                continue;
            }
            if (peek() == '"') {
                advance();
                break;
            }
            advance();
        }
        return make(TokenKind::StringLiteral, begin, line, col);
    }

    Token scan_char() {
        const std::size_t begin = pos_;
        const int line = line_, col = column_;
        advance();
        while (true) {
            if (at_end() || peek() == '\n') {
                throw LexError("unterminated character literal", line, col);
            }
            if (peek() == '\\') {
                advance();
                advance();
                continue;
            }
            if (peek() == '\'') {
                advance();
                break;
            }
            advance();
        }
        return make(TokenKind::CharLiteral, begin, line, col);
    }

    Token scan_operator() {
        const int line = line_, col = column_;
        const std::size_t begin = pos_;
        for (const char* op : kOperators) {
            const std::string_view sv(op);
            if (src_.substr(pos_, sv.size()) == sv) {
                for (std::size_t i = 0; i < sv.size(); ++i) advance();
                Token t = make(TokenKind::Operator, begin, line, col);
                if (sv.size() == 1 && is_punct_char(sv[0])) {
                    t.kind = TokenKind::Punctuation;
                }
                return t;
            }
        }
        throw LexError(std::string("unexpected character '") + peek() + "'",
                       line, col);
    }

    // Consumes one logical preprocessor line (continuations joined). Pragma
    // lines are kept as a single normalized token; everything else is
    // dropped.
    void scan_preprocessor(std::vector<Token>& out) {
        const std::size_t begin = pos_;
        const int line = line_, col = column_;
        std::string raw;
        while (!at_end()) {
            if (peek() == '\\' &&
                (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
                raw += ' ';
                advance();
                if (peek() == '\r') advance();
                advance();
                continue;
            }
            if (peek() == '\n') break;
            if (peek() == '/' && peek(1) == '*') {
                const int cl = line_, cc = column_;
                advance();
                advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (at_end()) {
                        throw LexError("unterminated comment", cl, cc);
                    }
                    advance();
                }
                advance();
                advance();
                raw += ' ';
                continue;
            }
            if (peek() == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
                break;
            }
            raw += peek();
            advance();
        }
        std::string norm;
        for (char c : raw) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!norm.empty() && norm.back() != ' ') norm += ' ';
            } else {
                norm += c;
            }
        }
        while (!norm.empty() && norm.back() == ' ') norm.pop_back();
        // "#  pragma" and "# pragma" mean the same thing as "#pragma".
        if (norm.rfind("# pragma", 0) == 0) {
            norm = "#" + norm.substr(2);
        }
        if (norm.rfind("#pragma", 0) == 0) {
            Token t;
            t.kind = TokenKind::PragmaLine;
            t.lexeme = norm;
            t.line = line;
            t.column = col;
            t.begin = begin;
            t.end = pos_;
            out.push_back(t);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    bool at_line_start_ = true;
};

}  // namespace

std::vector<Token> lex(std::string_view source) {
    return Scanner(source).run();
}

}  // namespace ompadvisor
