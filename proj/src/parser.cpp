#include "ompadvisor/parser.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "ompadvisor/error.hpp"
#include "ompadvisor/lexer.hpp"

namespace ompadvisor {

namespace {

const std::set<std::string, std::less<>> kTypeKeywords = {
    "void",   "char",     "short", "int",      "long",  "float",
    "double", "signed",   "unsigned", "_Bool", "_Complex",
    "struct", "union",    "enum",
};

const std::set<std::string, std::less<>> kDeclPrefixKeywords = {
    "const",  "volatile", "static", "extern", "register",
    "inline", "restrict", "auto",   "typedef",
};

// Typedef names that are overwhelmingly likely to mean a type even without
// seeing the defining header.
const std::set<std::string, std::less<>> kWellKnownTypedefs = {
    "size_t",    "ssize_t",  "ptrdiff_t", "intptr_t",  "uintptr_t",
    "int8_t",    "int16_t",  "int32_t",   "int64_t",   "uint8_t",
    "uint16_t",  "uint32_t", "uint64_t",  "FILE",      "bool",
    "va_list",   "off_t",    "time_t",    "clock_t",   "pid_t",
    "wchar_t",   "uint",     "ulong",     "ushort",    "uchar",
};

// Binary operator precedence, higher binds tighter. Assignment, ternary and
// comma are handled separately.
int binary_precedence(std::string_view op) {
    if (op == "*" || op == "/" || op == "%") return 10;
    if (op == "+" || op == "-") return 9;
    if (op == "<<" || op == ">>") return 8;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 7;
    if (op == "==" || op == "!=") return 6;
    if (op == "&") return 5;
    if (op == "^") return 4;
    if (op == "|") return 3;
    if (op == "&&") return 2;
    if (op == "||") return 1;
    return 0;
}

bool is_assignment_op(std::string_view op) {
    return op == "=" || op == "+=" || op == "-=" || op == "*=" ||
           op == "/=" || op == "%=" || op == "<<=" || op == ">>=" ||
           op == "&=" || op == "^=" || op == "|=";
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {
        typedefs_.insert(kWellKnownTypedefs.begin(), kWellKnownTypedefs.end());
    }

    ParseResult run() {
        ParseResult result;
        result.root = std::make_unique<AstNode>(NodeKind::TranslationUnit);
        if (!tokens_.empty()) {
            result.root->begin = tokens_.front().begin;
            result.root->end = tokens_.back().end;
            result.root->line = tokens_.front().line;
        }
        while (!at_end()) {
            const std::size_t attachment_mark = attachments_.size();
            const std::size_t token_mark = pos_;
            try {
                parse_top_level(*result.root);
            } catch (const ParseError& e) {
                attachments_.resize(attachment_mark);
                pending_pragmas_.clear();
                result.skipped.push_back({e.line, e.what()});
                if (pos_ == token_mark) ++pos_;
                synchronize();
            }
        }
        result.attachments = std::move(attachments_);
        return result;
    }

private:
    // ---- token cursor -----------------------------------------------------

    bool at_end() const { return pos_ >= tokens_.size(); }

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = pos_ + ahead;
        if (i >= tokens_.size()) {
            static const Token eof{};
            return eof;
        }
        return tokens_[i];
    }

    const Token& advance() {
        if (at_end()) fail("unexpected end of input");
        return tokens_[pos_++];
    }

    bool check(TokenKind kind, std::string_view lexeme) const {
        return !at_end() && peek().kind == kind && peek().lexeme == lexeme;
    }

    bool check_any_op(std::string_view lexeme) const {
        return !at_end() &&
               (peek().kind == TokenKind::Operator ||
                peek().kind == TokenKind::Punctuation) &&
               peek().lexeme == lexeme;
    }

    bool match(std::string_view lexeme) {
        if (check_any_op(lexeme)) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool match_keyword(std::string_view kw) {
        if (check(TokenKind::Keyword, kw)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(std::string_view lexeme) {
        if (!match(lexeme)) {
            fail("expected '" + std::string(lexeme) + "'");
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        if (tokens_.empty()) throw ParseError(msg, 1, 1);
        const Token& t = at_end() ? tokens_.back() : peek();
        const std::string where =
            at_end() ? "end of input" : "'" + t.lexeme + "'";
        throw ParseError(msg + " before " + where, t.line, t.column);
    }

    // Skips ahead to a top-level boundary after an error: either a ';' at
    // the current brace depth or the '}' closing a brace opened before the
    // error point.
    void synchronize() {
        int depth = 0;
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind == TokenKind::Punctuation) {
                if (t.lexeme == "{") ++depth;
                if (t.lexeme == "}") {
                    --depth;
                    // Either the block we scanned into just closed, or this
                    // is the enclosing block's brace; both end the construct.
                    if (depth <= 0) {
                        ++pos_;
                        return;
                    }
                }
                if (t.lexeme == ";" && depth == 0) {
                    ++pos_;
                    return;
                }
            }
            ++pos_;
        }
    }

    // ---- span bookkeeping --------------------------------------------------

    std::size_t mark() const { return pos_; }

    AstNode* finish(AstNode* node, std::size_t from) const {
        if (from < tokens_.size() && pos_ > from) {
            node->begin = tokens_[from].begin;
            node->end = tokens_[pos_ - 1].end;
            node->line = tokens_[from].line;
        }
        return node;
    }

    std::unique_ptr<AstNode> make_node(NodeKind kind, std::string attr,
                                       std::size_t from) {
        auto node = std::make_unique<AstNode>(kind, std::move(attr));
        finish(node.get(), from);
        return node;
    }

    // ---- pragmas ------------------------------------------------------------

    void collect_pragmas() {
        while (!at_end() && peek().kind == TokenKind::PragmaLine) {
            pending_pragmas_.push_back({peek().lexeme, nullptr, peek().line});
            ++pos_;
        }
    }

    void attach_pending(const AstNode* target) {
        for (auto& p : pending_pragmas_) {
            p.target = target;
            attachments_.push_back(p);
        }
        pending_pragmas_.clear();
    }

    // Statements recurse (a loop body parses more statements), so each
    // statement takes ownership of the pragmas collected just before it and
    // attaches them itself; otherwise an inner statement would steal them.
    std::vector<PragmaAttachment> take_pending() {
        std::vector<PragmaAttachment> taken = std::move(pending_pragmas_);
        pending_pragmas_.clear();
        return taken;
    }

    void attach_list(std::vector<PragmaAttachment>& list,
                     const AstNode* target) {
        for (auto& p : list) {
            p.target = target;
            attachments_.push_back(p);
        }
        list.clear();
    }

    // ---- types --------------------------------------------------------------

    bool looks_like_type_start() const {
        if (at_end()) return false;
        const Token& t = peek();
        if (t.kind == TokenKind::Keyword) {
            return kTypeKeywords.count(t.lexeme) > 0 ||
                   kDeclPrefixKeywords.count(t.lexeme) > 0;
        }
        if (t.kind == TokenKind::Identifier) {
            return typedefs_.count(t.lexeme) > 0;
        }
        return false;
    }

    // Consumes a specifier-qualifier sequence ("static const unsigned long",
    // "struct point", a typedef name, ...) and returns its spelling. A
    // struct/union/enum body, if present, is skipped wholesale. `is_typedef`
    // reports whether the sequence carried the typedef storage class.
    std::string parse_type_specifiers(bool* is_typedef) {
        std::string text;
        bool saw_any = false;
        auto append = [&](const std::string& word) {
            if (!text.empty()) text += ' ';
            text += word;
        };
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind == TokenKind::Keyword &&
                kDeclPrefixKeywords.count(t.lexeme) > 0) {
                if (t.lexeme == "typedef" && is_typedef) *is_typedef = true;
                // Qualifiers and storage classes don't show up in the type
                // spelling used for casts.
                ++pos_;
                saw_any = true;
                continue;
            }
            if (t.kind == TokenKind::Keyword &&
                kTypeKeywords.count(t.lexeme) > 0) {
                append(t.lexeme);
                ++pos_;
                saw_any = true;
                if (t.lexeme == "struct" || t.lexeme == "union" ||
                    t.lexeme == "enum") {
                    if (!at_end() && peek().kind == TokenKind::Identifier) {
                        append(peek().lexeme);
                        ++pos_;
                    }
                    if (check_any_op("{")) skip_braced_block();
                }
                continue;
            }
            if (t.kind == TokenKind::Identifier &&
                typedefs_.count(t.lexeme) > 0 && (!saw_any || text.empty())) {
                append(t.lexeme);
                ++pos_;
                saw_any = true;
                continue;
            }
            break;
        }
        if (!saw_any) fail("expected type");
        if (text.empty()) text = "int";  // bare storage class, e.g. "static x;"
        return text;
    }

    void skip_braced_block() {
        expect("{");
        int depth = 1;
        while (depth > 0) {
            if (at_end()) fail("unterminated '{'");
            const Token& t = advance();
            if (t.kind == TokenKind::Punctuation) {
                if (t.lexeme == "{") ++depth;
                if (t.lexeme == "}") --depth;
            }
        }
    }

    // ---- top level ----------------------------------------------------------

    void parse_top_level(AstNode& unit) {
        collect_pragmas();
        if (at_end()) {
            pending_pragmas_.clear();
            return;
        }
        if (check_any_op(";")) {
            ++pos_;
            pending_pragmas_.clear();
            return;
        }
        if (looks_like_type_start()) {
            parse_declaration_like(unit, /*allow_funcdef=*/true);
            return;
        }
        // Bare statement snippets (a for-loop on its own, say) are accepted
        // so detached loop bodies can be re-parsed later.
        AstNode* stmt = unit.add(parse_statement());
        attach_pending(stmt);
    }

    // A declaration, typedef, prototype, or function definition.
    void parse_declaration_like(AstNode& parent, bool allow_funcdef) {
        const std::size_t from = mark();
        bool is_typedef = false;
        parse_type_specifiers(&is_typedef);

        // "struct foo { ... };" and friends: nothing left to declare.
        if (check_any_op(";")) {
            ++pos_;
            pending_pragmas_.clear();
            return;
        }

        bool first = true;
        while (true) {
            while (match("*")) {
            }
            if (at_end() || peek().kind != TokenKind::Identifier) {
                fail("expected declarator name");
            }
            const std::string name = advance().lexeme;

            if (first && allow_funcdef && check_any_op("(") &&
                function_definition_ahead()) {
                parse_function_definition(parent, name, from);
                return;
            }

            // Array and function-pointer-free function declarator suffixes.
            while (check_any_op("[")) {
                expect("[");
                if (!check_any_op("]")) parse_expression();
                expect("]");
            }
            if (check_any_op("(")) {
                // Prototype: skip the parameter list.
                skip_parenthesized();
            }

            auto decl = make_node(NodeKind::Decl, name, from);
            if (match("=")) {
                decl->add(parse_initializer());
            }
            finish(decl.get(), from);
            if (is_typedef) {
                typedefs_.insert(name);
            } else {
                AstNode* placed = parent.add(std::move(decl));
                if (first) attach_pending(placed);
            }
            first = false;
            if (match(",")) continue;
            expect(";");
            if (is_typedef) pending_pragmas_.clear();
            return;
        }
    }

    // After "type name (", decides between a definition (body follows the
    // parameter list) and a plain prototype.
    bool function_definition_ahead() const {
        std::size_t i = pos_;  // at '('
        int depth = 0;
        while (i < tokens_.size()) {
            const Token& t = tokens_[i];
            if (t.kind == TokenKind::Punctuation) {
                if (t.lexeme == "(") ++depth;
                if (t.lexeme == ")") {
                    --depth;
                    if (depth == 0) {
                        return i + 1 < tokens_.size() &&
                               tokens_[i + 1].kind == TokenKind::Punctuation &&
                               tokens_[i + 1].lexeme == "{";
                    }
                }
            }
            ++i;
        }
        return false;
    }

    void skip_parenthesized() {
        expect("(");
        int depth = 1;
        while (depth > 0) {
            if (at_end()) fail("unterminated '('");
            const Token& t = advance();
            if (t.kind == TokenKind::Punctuation) {
                if (t.lexeme == "(") ++depth;
                if (t.lexeme == ")") --depth;
            }
        }
    }

    void parse_function_definition(AstNode& parent, const std::string& name,
                                   std::size_t from) {
        std::vector<PragmaAttachment> mine = take_pending();
        auto func = std::make_unique<AstNode>(NodeKind::FuncDef, name);
        expect("(");
        if (!check_any_op(")")) {
            while (true) {
                const std::size_t param_from = mark();
                if (match_keyword("void") && check_any_op(")")) break;
                if (check_any_op("...")) {
                    ++pos_;
                    break;
                }
                // Parameter: specifiers, stars, optional name, arrays.
                if (looks_like_type_start()) {
                    parse_type_specifiers(nullptr);
                }
                while (match("*")) {
                }
                std::string pname;
                if (!at_end() && peek().kind == TokenKind::Identifier) {
                    pname = advance().lexeme;
                }
                while (check_any_op("[")) {
                    expect("[");
                    if (!check_any_op("]")) parse_expression();
                    expect("]");
                }
                if (!pname.empty()) {
                    func->add(make_node(NodeKind::Decl, pname, param_from));
                }
                if (!match(",")) break;
            }
        }
        expect(")");
        func->add(parse_compound());
        finish(func.get(), from);
        AstNode* placed = parent.add(std::move(func));
        attach_list(mine, placed);
    }

    // ---- statements ----------------------------------------------------------

    std::unique_ptr<AstNode> parse_statement() {
        collect_pragmas();
        std::vector<PragmaAttachment> mine = take_pending();
        if (at_end()) fail("expected statement");
        const Token& t = peek();

        std::unique_ptr<AstNode> stmt;
        if (t.kind == TokenKind::Punctuation && t.lexeme == "{") {
            stmt = parse_compound();
        } else if (t.kind == TokenKind::Keyword) {
            if (t.lexeme == "for") {
                stmt = parse_for();
            } else if (t.lexeme == "while") {
                stmt = parse_while();
            } else if (t.lexeme == "do") {
                stmt = parse_do_while();
            } else if (t.lexeme == "if") {
                stmt = parse_if();
            } else if (t.lexeme == "return") {
                const std::size_t from = mark();
                ++pos_;
                auto node = std::make_unique<AstNode>(NodeKind::Return);
                if (!check_any_op(";")) node->add(parse_expression());
                expect(";");
                finish(node.get(), from);
                stmt = std::move(node);
            } else if (t.lexeme == "break") {
                const std::size_t from = mark();
                ++pos_;
                expect(";");
                stmt = make_node(NodeKind::Break, "", from);
            } else if (t.lexeme == "continue") {
                const std::size_t from = mark();
                ++pos_;
                expect(";");
                stmt = make_node(NodeKind::Continue, "", from);
            } else if (t.lexeme == "switch" || t.lexeme == "goto" ||
                       t.lexeme == "case" || t.lexeme == "default") {
                fail("unsupported statement '" + t.lexeme + "'");
            } else if (looks_like_type_start()) {
                stmt = parse_declaration_statement();
            } else {
                fail("unexpected keyword '" + t.lexeme + "'");
            }
        } else if (t.kind == TokenKind::Punctuation && t.lexeme == ";") {
            const std::size_t from = mark();
            ++pos_;
            stmt = make_node(NodeKind::EmptyStatement, "", from);
        } else if (t.kind == TokenKind::Identifier &&
                   peek(1).kind == TokenKind::Operator &&
                   peek(1).lexeme == ":") {
            fail("unsupported statement label '" + t.lexeme + "'");
        } else if (looks_like_type_start()) {
            stmt = parse_declaration_statement();
        } else {
            const std::size_t from = mark();
            stmt = parse_expression();
            expect(";");
            finish(stmt.get(), from);
        }
        attach_list(mine, stmt.get());
        return stmt;
    }

    std::unique_ptr<AstNode> parse_compound() {
        const std::size_t from = mark();
        expect("{");
        auto block = std::make_unique<AstNode>(NodeKind::Compound);
        while (!check_any_op("}")) {
            if (at_end()) fail("unterminated '{'");
            collect_pragmas();
            if (check_any_op("}")) break;
            block->add(parse_statement());
        }
        pending_pragmas_.clear();  // pragma just before '}' targets nothing
        expect("}");
        finish(block.get(), from);
        return block;
    }

    // One or more declarators as a statement. A single declarator yields the
    // Decl itself; "int a = 1, b;" yields an ExprList holding the Decls.
    std::unique_ptr<AstNode> parse_declaration_statement() {
        const std::size_t from = mark();
        auto holder = std::make_unique<AstNode>(NodeKind::ExprList);
        bool is_typedef = false;
        parse_type_specifiers(&is_typedef);
        if (check_any_op(";")) {
            ++pos_;
            return make_node(NodeKind::EmptyStatement, "", from);
        }
        while (true) {
            const std::size_t decl_from = mark();
            while (match("*")) {
            }
            if (at_end() || peek().kind != TokenKind::Identifier) {
                fail("expected declarator name");
            }
            const std::string name = advance().lexeme;
            while (check_any_op("[")) {
                expect("[");
                if (!check_any_op("]")) parse_expression();
                expect("]");
            }
            auto decl = make_node(NodeKind::Decl, name, decl_from);
            if (match("=")) decl->add(parse_initializer());
            finish(decl.get(), decl_from);
            if (is_typedef) {
                typedefs_.insert(name);
            } else {
                holder->add(std::move(decl));
            }
            if (match(",")) continue;
            expect(";");
            break;
        }
        if (is_typedef || holder->children.empty()) {
            return make_node(NodeKind::EmptyStatement, "", from);
        }
        if (holder->children.size() == 1) {
            auto only = std::move(holder->children.front());
            return only;
        }
        finish(holder.get(), from);
        return holder;
    }

    std::unique_ptr<AstNode> parse_initializer() {
        if (check_any_op("{")) {
            const std::size_t from = mark();
            expect("{");
            auto list = std::make_unique<AstNode>(NodeKind::ExprList);
            while (!check_any_op("}")) {
                if (check_any_op(".") || check_any_op("[")) {
                    fail("unsupported designated initializer");
                }
                list->add(parse_initializer());
                if (!match(",")) break;
            }
            expect("}");
            finish(list.get(), from);
            return list;
        }
        return parse_assignment();
    }

    std::unique_ptr<AstNode> parse_for() {
        const std::size_t from = mark();
        ++pos_;  // for
        expect("(");
        auto node = std::make_unique<AstNode>(NodeKind::For);

        // All four slots are always present; absent clauses become
        // EmptyStatement placeholders so child indices stay fixed.
        if (check_any_op(";")) {
            node->add(make_node(NodeKind::EmptyStatement, "", mark()));
            ++pos_;
        } else if (looks_like_type_start()) {
            node->add(parse_declaration_statement());
        } else {
            node->add(parse_expression());
            expect(";");
        }
        if (check_any_op(";")) {
            node->add(make_node(NodeKind::EmptyStatement, "", mark()));
        } else {
            node->add(parse_expression());
        }
        expect(";");
        if (check_any_op(")")) {
            node->add(make_node(NodeKind::EmptyStatement, "", mark()));
        } else {
            node->add(parse_expression());
        }
        expect(")");
        node->add(parse_statement());
        finish(node.get(), from);
        return node;
    }

    std::unique_ptr<AstNode> parse_while() {
        const std::size_t from = mark();
        ++pos_;  // while
        expect("(");
        auto node = std::make_unique<AstNode>(NodeKind::While);
        node->add(parse_expression());
        expect(")");
        node->add(parse_statement());
        finish(node.get(), from);
        return node;
    }

    // do { ... } while (cond); keeps the While shape: [cond, body].
    std::unique_ptr<AstNode> parse_do_while() {
        const std::size_t from = mark();
        ++pos_;  // do
        auto body = parse_statement();
        if (!match_keyword("while")) fail("expected 'while'");
        expect("(");
        auto cond = parse_expression();
        expect(")");
        expect(";");
        auto node = std::make_unique<AstNode>(NodeKind::While);
        node->add(std::move(cond));
        node->add(std::move(body));
        finish(node.get(), from);
        return node;
    }

    std::unique_ptr<AstNode> parse_if() {
        const std::size_t from = mark();
        ++pos_;  // if
        expect("(");
        auto node = std::make_unique<AstNode>(NodeKind::If);
        node->add(parse_expression());
        expect(")");
        node->add(parse_statement());
        if (match_keyword("else")) {
            node->add(parse_statement());
        }
        finish(node.get(), from);
        return node;
    }

    // ---- expressions -----------------------------------------------------------

    std::unique_ptr<AstNode> parse_expression() {
        const std::size_t from = mark();
        auto first = parse_assignment();
        if (!check_any_op(",")) return first;
        auto list = std::make_unique<AstNode>(NodeKind::ExprList);
        list->add(std::move(first));
        while (match(",")) {
            list->add(parse_assignment());
        }
        finish(list.get(), from);
        return list;
    }

    std::unique_ptr<AstNode> parse_assignment() {
        const std::size_t from = mark();
        auto lhs = parse_ternary();
        if (!at_end() && peek().kind == TokenKind::Operator &&
            is_assignment_op(peek().lexeme)) {
            const std::string op = advance().lexeme;
            auto node = std::make_unique<AstNode>(NodeKind::Assignment, op);
            node->add(std::move(lhs));
            node->add(parse_assignment());
            finish(node.get(), from);
            return node;
        }
        return lhs;
    }

    std::unique_ptr<AstNode> parse_ternary() {
        const std::size_t from = mark();
        auto cond = parse_binary(1);
        if (!match("?")) return cond;
        auto node = std::make_unique<AstNode>(NodeKind::TernaryOp);
        node->add(std::move(cond));
        node->add(parse_expression());
        expect(":");
        node->add(parse_assignment());
        finish(node.get(), from);
        return node;
    }

    std::unique_ptr<AstNode> parse_binary(int min_prec) {
        const std::size_t from = mark();
        auto lhs = parse_unary();
        while (!at_end() && peek().kind == TokenKind::Operator) {
            const int prec = binary_precedence(peek().lexeme);
            if (prec < min_prec || prec == 0) break;
            const std::string op = advance().lexeme;
            auto rhs = parse_binary(prec + 1);
            auto node = std::make_unique<AstNode>(NodeKind::BinaryOp, op);
            node->add(std::move(lhs));
            node->add(std::move(rhs));
            finish(node.get(), from);
            lhs = std::move(node);
        }
        return lhs;
    }

    std::unique_ptr<AstNode> parse_unary() {
        const std::size_t from = mark();
        if (at_end()) fail("expected expression");
        const Token& t = peek();
        if (t.kind == TokenKind::Operator) {
            if (t.lexeme == "++" || t.lexeme == "--" || t.lexeme == "+" ||
                t.lexeme == "-" || t.lexeme == "!" || t.lexeme == "~" ||
                t.lexeme == "*" || t.lexeme == "&") {
                const std::string op = advance().lexeme;
                auto node = std::make_unique<AstNode>(NodeKind::UnaryOp, op);
                node->add(parse_unary());
                finish(node.get(), from);
                return node;
            }
        }
        if (check(TokenKind::Keyword, "sizeof")) {
            ++pos_;
            auto node = std::make_unique<AstNode>(NodeKind::UnaryOp, "sizeof");
            if (check_any_op("(") && type_name_ahead(1)) {
                // sizeof(type): the operand is a type, which has no node of
                // its own, so the UnaryOp stays childless.
                skip_parenthesized();
            } else {
                node->add(parse_unary());
            }
            finish(node.get(), from);
            return node;
        }
        if (check_any_op("(") && type_name_ahead(1) && cast_ahead()) {
            expect("(");
            std::string type_text = parse_type_specifiers(nullptr);
            while (match("*")) type_text += " *";
            while (check_any_op("[")) {
                expect("[");
                if (!check_any_op("]")) parse_expression();
                expect("]");
                type_text += " []";
            }
            expect(")");
            auto node = std::make_unique<AstNode>(NodeKind::Cast, type_text);
            node->add(parse_unary());
            finish(node.get(), from);
            return node;
        }
        return parse_postfix();
    }

    bool type_name_ahead(std::size_t ahead) const {
        const Token& t = peek(ahead);
        if (t.kind == TokenKind::Keyword) {
            return kTypeKeywords.count(t.lexeme) > 0 ||
                   t.lexeme == "const" || t.lexeme == "volatile";
        }
        return t.kind == TokenKind::Identifier && typedefs_.count(t.lexeme) > 0;
    }

    // A '(' whose matching ')' is followed by something that can begin an
    // operand is a cast, not a parenthesized expression.
    bool cast_ahead() const {
        std::size_t i = pos_;
        int depth = 0;
        while (i < tokens_.size()) {
            const Token& t = tokens_[i];
            if (t.kind == TokenKind::Punctuation) {
                if (t.lexeme == "(") ++depth;
                if (t.lexeme == ")") {
                    --depth;
                    if (depth == 0) break;
                }
            }
            ++i;
        }
        if (i + 1 >= tokens_.size()) return false;
        const Token& after = tokens_[i + 1];
        switch (after.kind) {
            case TokenKind::Identifier:
            case TokenKind::IntLiteral:
            case TokenKind::FloatLiteral:
            case TokenKind::CharLiteral:
            case TokenKind::StringLiteral:
                return true;
            case TokenKind::Keyword:
                return after.lexeme == "sizeof";
            case TokenKind::Operator:
                return after.lexeme == "-" || after.lexeme == "+" ||
                       after.lexeme == "*" || after.lexeme == "&" ||
                       after.lexeme == "!" || after.lexeme == "~" ||
                       after.lexeme == "++" || after.lexeme == "--";
            case TokenKind::Punctuation:
                return after.lexeme == "(";
            default:
                return false;
        }
    }

    std::unique_ptr<AstNode> parse_postfix() {
        const std::size_t from = mark();
        auto node = parse_primary();
        while (!at_end()) {
            if (check_any_op("[")) {
                ++pos_;
                auto ref = std::make_unique<AstNode>(NodeKind::ArrayRef);
                ref->add(std::move(node));
                ref->add(parse_expression());
                expect("]");
                finish(ref.get(), from);
                node = std::move(ref);
            } else if (check_any_op("(")) {
                ++pos_;
                auto call = std::make_unique<AstNode>(NodeKind::FuncCall);
                call->add(std::move(node));
                if (!check_any_op(")")) {
                    auto args = std::make_unique<AstNode>(NodeKind::ExprList);
                    const std::size_t args_from = mark();
                    args->add(parse_assignment());
                    while (match(",")) {
                        args->add(parse_assignment());
                    }
                    finish(args.get(), args_from);
                    call->add(std::move(args));
                }
                expect(")");
                finish(call.get(), from);
                node = std::move(call);
            } else if (check_any_op(".") || check_any_op("->")) {
                const std::string op = advance().lexeme;
                if (at_end() || peek().kind != TokenKind::Identifier) {
                    fail("expected field name after '" + op + "'");
                }
                const std::size_t field_from = mark();
                const std::string field = advance().lexeme;
                auto ref = std::make_unique<AstNode>(NodeKind::StructRef, op);
                ref->add(std::move(node));
                ref->add(make_node(NodeKind::ID, field, field_from));
                finish(ref.get(), from);
                node = std::move(ref);
            } else if (check_any_op("++") || check_any_op("--")) {
                const std::string op = advance().lexeme;
                auto post =
                    std::make_unique<AstNode>(NodeKind::UnaryOp, "p" + op);
                post->add(std::move(node));
                finish(post.get(), from);
                node = std::move(post);
            } else {
                break;
            }
        }
        return node;
    }

    std::unique_ptr<AstNode> parse_primary() {
        const std::size_t from = mark();
        if (at_end()) fail("expected expression");
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Identifier: {
                ++pos_;
                return make_node(NodeKind::ID, t.lexeme, from);
            }
            case TokenKind::IntLiteral: {
                ++pos_;
                return make_node(NodeKind::Constant, "int, " + t.lexeme, from);
            }
            case TokenKind::FloatLiteral: {
                ++pos_;
                const bool f = t.lexeme.find('f') != std::string::npos ||
                               t.lexeme.find('F') != std::string::npos;
                return make_node(NodeKind::Constant,
                                 std::string(f ? "float, " : "double, ") +
                                     t.lexeme,
                                 from);
            }
            case TokenKind::CharLiteral: {
                ++pos_;
                return make_node(NodeKind::Constant, "char, " + t.lexeme,
                                 from);
            }
            case TokenKind::StringLiteral: {
                ++pos_;
                return make_node(NodeKind::Constant, "string, " + t.lexeme,
                                 from);
            }
            case TokenKind::Punctuation: {
                if (t.lexeme == "(") {
                    ++pos_;
                    auto inner = parse_expression();
                    expect(")");
                    return inner;
                }
                break;
            }
            default:
                break;
        }
        fail("expected expression");
    }

    const std::vector<Token>& tokens_;
    std::size_t pos_ = 0;
    std::set<std::string, std::less<>> typedefs_;
    std::vector<PragmaAttachment> attachments_;
    std::vector<PragmaAttachment> pending_pragmas_;
};

}  // namespace

ParseResult parse_unit(const std::vector<Token>& tokens) {
    return Parser(tokens).run();
}

ParseResult parse_source(std::string_view source) {
    return parse_unit(lex(source));
}

}  // namespace ompadvisor
