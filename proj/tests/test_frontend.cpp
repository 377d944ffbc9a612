#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "ompadvisor/ast.hpp"
#include "ompadvisor/directive.hpp"
#include "ompadvisor/error.hpp"
#include "ompadvisor/lexer.hpp"
#include "ompadvisor/loops.hpp"
#include "ompadvisor/parser.hpp"

using namespace ompadvisor;

namespace {

std::vector<std::string> lexemes(std::string_view src) {
    std::vector<std::string> out;
    for (const Token& t : lex(src)) out.push_back(t.lexeme);
    return out;
}

const AstNode& only_child(const AstNode& node) {
    REQUIRE(node.children.size() == 1);
    return *node.children[0];
}

}  // namespace

TEST_CASE("lexer splits operators with maximal munch") {
    CHECK(lexemes("a+++b") == std::vector<std::string>{"a", "++", "+", "b"});
    CHECK(lexemes("x<<=2;") == std::vector<std::string>{"x", "<<=", "2", ";"});
    CHECK(lexemes("p->q") == std::vector<std::string>{"p", "->", "q"});
    CHECK(lexemes("a||b&&c") ==
          std::vector<std::string>{"a", "||", "b", "&&", "c"});
}

TEST_CASE("lexer classifies literals and identifiers") {
    auto toks = lex("int x = 10; double y = 2.5e-3; char c = 'a'; "
                    "const char* s = \"hi\\n\";");
    REQUIRE(toks.size() >= 4);
    CHECK(toks[0].kind == TokenKind::Keyword);
    CHECK(toks[1].kind == TokenKind::Identifier);
    CHECK(toks[3].kind == TokenKind::IntLiteral);
    bool saw_float = false, saw_char = false, saw_string = false;
    for (const Token& t : toks) {
        if (t.kind == TokenKind::FloatLiteral) saw_float = true;
        if (t.kind == TokenKind::CharLiteral) saw_char = true;
        if (t.kind == TokenKind::StringLiteral) saw_string = true;
    }
    CHECK(saw_float);
    CHECK(saw_char);
    CHECK(saw_string);
}

TEST_CASE("lexer drops comments but keeps surrounding tokens") {
    CHECK(lexemes("a /* mid */ b // tail\nc") ==
          std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("lexer records lines, columns, and byte spans") {
    auto toks = lex("ab\n  cd");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0].line == 1);
    CHECK(toks[0].column == 1);
    CHECK(toks[0].begin == 0);
    CHECK(toks[0].end == 2);
    CHECK(toks[1].line == 2);
    CHECK(toks[1].column == 3);
    CHECK(toks[1].begin == 5);
    CHECK(toks[1].end == 7);
}

TEST_CASE("pragma lines become one token, other preprocessor lines vanish") {
    auto toks = lex("#include <stdio.h>\n"
                    "#define N 10\n"
                    "#pragma omp parallel for\n"
                    "for (;;) ;\n");
    REQUIRE(!toks.empty());
    CHECK(toks[0].kind == TokenKind::PragmaLine);
    CHECK(toks[0].lexeme == "#pragma omp parallel for");
    CHECK(toks[1].lexeme == "for");
}

TEST_CASE("backslash continuation joins pragma lines") {
    auto toks = lex("#pragma omp parallel for \\\nprivate(j)\nfor (;;) ;");
    REQUIRE(!toks.empty());
    CHECK(toks[0].kind == TokenKind::PragmaLine);
    CHECK(toks[0].lexeme == "#pragma omp parallel for private(j)");
}

TEST_CASE("pragma internal whitespace collapses to single spaces") {
    auto toks = lex("#pragma   omp\tparallel   for\nint x;");
    REQUIRE(!toks.empty());
    CHECK(toks[0].lexeme == "#pragma omp parallel for");
}

TEST_CASE("lexer rejects unterminated literals and comments") {
    CHECK_THROWS_AS(lex("\"oops"), LexError);
    CHECK_THROWS_AS(lex("'a"), LexError);
    CHECK_THROWS_AS(lex("/* never closed"), LexError);
    CHECK_THROWS_AS(lex("int x = `;"), LexError);
}

TEST_CASE("for loop parses into exactly four slots") {
    auto result = parse_source("for (i = 0; i < n; i++) x = i;");
    const AstNode& f = only_child(*result.root);
    CHECK(f.kind == NodeKind::For);
    REQUIRE(f.children.size() == 4);
    CHECK(f.children[0]->kind == NodeKind::Assignment);
    CHECK(f.children[1]->kind == NodeKind::BinaryOp);
    CHECK(f.children[2]->kind == NodeKind::UnaryOp);
    CHECK(f.children[2]->attr == "p++");
    CHECK(f.children[3]->kind == NodeKind::Assignment);
}

TEST_CASE("missing for clauses become EmptyStatement placeholders") {
    auto result = parse_source("for (;;) ;");
    const AstNode& f = only_child(*result.root);
    REQUIRE(f.children.size() == 4);
    for (const auto& child : f.children) {
        CHECK(child->kind == NodeKind::EmptyStatement);
    }
}

TEST_CASE("declaration in the for header parses as Decl") {
    auto result = parse_source("for (int i = 0; i < 4; ++i) { s += i; }");
    const AstNode& f = only_child(*result.root);
    REQUIRE(f.children.size() == 4);
    CHECK(f.children[0]->kind == NodeKind::Decl);
    CHECK(f.children[0]->attr == "i");
    CHECK(f.children[2]->attr == "++");
    CHECK(f.children[3]->kind == NodeKind::Compound);
}

TEST_CASE("expression forms cover calls, arrays, members, casts, ternary") {
    auto result = parse_source(
        "y = f(a, b[2], p->next.w) + (double)k + (c ? 1 : 0);");
    const AstNode& stmt = only_child(*result.root);
    CHECK(stmt.kind == NodeKind::Assignment);
    std::vector<NodeKind> seen;
    std::vector<const AstNode*> stack{&stmt};
    while (!stack.empty()) {
        const AstNode* n = stack.back();
        stack.pop_back();
        seen.push_back(n->kind);
        for (const auto& c : n->children) stack.push_back(c.get());
    }
    auto has = [&](NodeKind k) {
        return std::find(seen.begin(), seen.end(), k) != seen.end();
    };
    CHECK(has(NodeKind::FuncCall));
    CHECK(has(NodeKind::ExprList));
    CHECK(has(NodeKind::ArrayRef));
    CHECK(has(NodeKind::StructRef));
    CHECK(has(NodeKind::Cast));
    CHECK(has(NodeKind::TernaryOp));
}

TEST_CASE("function definitions parse with bodies and parameters") {
    auto result = parse_source(
        "int add(int a, int b) { return a + b; }\n"
        "void noop(void) { }\n");
    REQUIRE(result.root->children.size() == 2);
    CHECK(result.root->children[0]->kind == NodeKind::FuncDef);
    CHECK(result.root->children[0]->attr == "add");
    CHECK(result.root->children[1]->attr == "noop");
}

TEST_CASE("pragma attaches to the following for, not its body") {
    // Regression: an outer statement must claim its pragmas before parsing
    // the loop body, otherwise the first body statement steals them.
    auto result = parse_source(
        "#pragma omp parallel for\n"
        "for (i = 0; i < n; i++)\n"
        "  a[i] = i;\n");
    REQUIRE(result.attachments.size() == 1);
    CHECK(result.attachments[0].pragma == "#pragma omp parallel for");
    REQUIRE(result.attachments[0].target != nullptr);
    CHECK(result.attachments[0].target->kind == NodeKind::For);
}

TEST_CASE("pragma attaches through a function definition boundary") {
    auto result = parse_source(
        "void work(int n) {\n"
        "  #pragma omp parallel for\n"
        "  for (int i = 0; i < n; i++) out[i] = i;\n"
        "}\n");
    REQUIRE(result.attachments.size() == 1);
    CHECK(result.attachments[0].target->kind == NodeKind::For);
}

TEST_CASE("stacked pragmas bind to the same statement") {
    auto result = parse_source(
        "#pragma omp parallel for\n"
        "#pragma omp simd\n"
        "for (;;) ;\n");
    REQUIRE(result.attachments.size() == 2);
    CHECK(result.attachments[0].target == result.attachments[1].target);
}

TEST_CASE("pragma inside a nested loop binds to the inner for") {
    auto result = parse_source(
        "for (i = 0; i < n; i++) {\n"
        "  #pragma omp parallel for\n"
        "  for (j = 0; j < n; j++) b[j] = j;\n"
        "}\n");
    REQUIRE(result.attachments.size() == 1);
    const AstNode* target = result.attachments[0].target;
    REQUIRE(target->kind == NodeKind::For);
    // The inner loop conditions against j, the outer against i.
    CHECK(target->children[0]->children[0]->attr == "j");
}

TEST_CASE("unsupported top-level constructs are skipped with recovery") {
    auto result = parse_source(
        "switch (x) { case 1: break; }\n"
        "int ok = 1;\n");
    CHECK(result.skipped.size() == 1);
    REQUIRE(result.root->children.size() == 1);
    CHECK(result.root->children[0]->kind == NodeKind::Decl);
    CHECK(result.root->children[0]->attr == "ok");
}

TEST_CASE("recovery inside a compound keeps the rest of the block") {
    auto result = parse_source(
        "void f(void) {\n"
        "  goto done;\n"
        "  x = 1;\n"
        "done: ;\n"
        "}\n");
    REQUIRE(result.root->children.size() == 1);
    CHECK(!result.skipped.empty());
}

TEST_CASE("typedef names parse as declaration types afterwards") {
    auto result = parse_source(
        "typedef unsigned long size_type;\n"
        "size_type total = 0;\n");
    bool found = false;
    for (const auto& child : result.root->children) {
        if (child->kind == NodeKind::Decl && child->attr == "total") {
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("while and if/else shapes") {
    auto result = parse_source(
        "while (n > 0) { n--; }\n"
        "if (a) b = 1; else b = 2;\n");
    REQUIRE(result.root->children.size() == 2);
    CHECK(result.root->children[0]->kind == NodeKind::While);
    const AstNode& ifn = *result.root->children[1];
    CHECK(ifn.kind == NodeKind::If);
    CHECK(ifn.children.size() == 3);
}

TEST_CASE("loop body emptiness detection") {
    auto empty1 = parse_source("for (;;) ;");
    CHECK(loop_body_is_empty(only_child(*empty1.root)));
    auto empty2 = parse_source("for (i = 0; i < n; i++) { }");
    CHECK(loop_body_is_empty(only_child(*empty2.root)));
    auto empty3 = parse_source("for (;;) { { ; } }");
    CHECK(loop_body_is_empty(only_child(*empty3.root)));
    auto full = parse_source("for (;;) { x = 1; }");
    CHECK(!loop_body_is_empty(only_child(*full.root)));
}

TEST_CASE("extract_loops: annotated loops stop descent, bare ones recurse") {
    auto result = parse_source(
        "#pragma omp parallel for\n"
        "for (i = 0; i < n; i++)\n"
        "  for (j = 0; j < n; j++) a[i][j] = 0;\n"
        "for (k = 0; k < n; k++)\n"
        "  for (m = 0; m < n; m++) b[k][m] = 1;\n");
    auto loops = extract_loops(*result.root, result.attachments);
    // One annotated outer loop (inner hidden), then the bare outer and bare
    // inner of the second nest.
    REQUIRE(loops.size() == 3);
    CHECK(loops[0].pragma.has_value());
    CHECK(!loops[1].pragma.has_value());
    CHECK(!loops[2].pragma.has_value());
}

TEST_CASE("extract_loops resolves helper functions called from the loop") {
    auto result = parse_source(
        "int calc(int v) { return v * 2; }\n"
        "int other(int v) { return v; }\n"
        "void run(int n) {\n"
        "  for (int i = 0; i < n; i++) out[i] = calc(i);\n"
        "}\n");
    auto loops = extract_loops(*result.root, result.attachments);
    REQUIRE(loops.size() == 1);
    REQUIRE(loops[0].helpers.size() == 1);
    CHECK(loops[0].helpers[0]->attr == "calc");
}

TEST_CASE("is_omp_pragma distinguishes omp from other pragmas") {
    CHECK(is_omp_pragma("#pragma omp parallel for"));
    CHECK(is_omp_pragma("#pragma omp atomic"));
    CHECK(!is_omp_pragma("#pragma once"));
    CHECK(!is_omp_pragma("#pragma GCC ivdep"));
}

TEST_CASE("directive golden: private(j)") {
    DirectiveInfo info = parse_directive("#pragma omp parallel for private(j)");
    CHECK(info.is_parallel_for);
    CHECK(info.private_vars == std::set<std::string>{"j"});
    CHECK(info.firstprivate_vars.empty());
    CHECK(info.reduction_clauses.empty());
    CHECK(!info.schedule.has_value());
    CHECK(info.other_clauses.empty());
}

TEST_CASE("directive golden: schedule(dynamic,4)") {
    DirectiveInfo info =
        parse_directive("#pragma omp parallel for schedule(dynamic,4)");
    CHECK(info.is_parallel_for);
    REQUIRE(info.schedule.has_value());
    CHECK(info.schedule->kind == "dynamic");
    REQUIRE(info.schedule->chunk.has_value());
    CHECK(*info.schedule->chunk == 4);
}

TEST_CASE("directive: bare parallel for") {
    DirectiveInfo info = parse_directive("#pragma omp parallel for");
    CHECK(info.is_parallel_for);
    CHECK(info.private_vars.empty());
    CHECK(info.firstprivate_vars.empty());
    CHECK(info.reduction_clauses.empty());
    CHECK(!info.schedule.has_value());
    CHECK(info.other_clauses.empty());
}

TEST_CASE("directive: reduction plus unknown clause is preserved") {
    DirectiveInfo info = parse_directive(
        "#pragma omp parallel for reduction(+:sum) collapse(2)");
    REQUIRE(info.reduction_clauses.size() == 1);
    CHECK(info.reduction_clauses[0].op == "+");
    CHECK(info.reduction_clauses[0].vars == std::set<std::string>{"sum"});
    REQUIRE(info.other_clauses.size() == 1);
    CHECK(info.other_clauses[0] == "collapse(2)");
}

TEST_CASE("directive grammar fixtures parse without error") {
    // Every reduction operator, clause spellings, and unknown clauses.
    const char* fixtures[] = {
        "#pragma omp parallel for reduction(+:a)",
        "#pragma omp parallel for reduction(-:a)",
        "#pragma omp parallel for reduction(*:a)",
        "#pragma omp parallel for reduction(&:a)",
        "#pragma omp parallel for reduction(|:a)",
        "#pragma omp parallel for reduction(^:a)",
        "#pragma omp parallel for reduction(&&:a)",
        "#pragma omp parallel for reduction(||:a)",
        "#pragma omp parallel for reduction(min:a)",
        "#pragma omp parallel for reduction(max:lo, hi)",
        "#pragma omp parallel for firstprivate(x)",
        "#pragma omp parallel for firstprivate(x, y) private(z)",
        "#pragma omp parallel for private(i, j, k)",
        "#pragma omp parallel for schedule(static)",
        "#pragma omp parallel for schedule(guided, 8)",
        "#pragma omp parallel for schedule(runtime)",
        "#pragma omp parallel for schedule(auto)",
        "#pragma omp parallel for num_threads(4)",
        "#pragma omp parallel for default(shared) shared(a, b)",
        "#pragma omp parallel for if(n > 100) nowait",
    };
    for (const char* text : fixtures) {
        CAPTURE(text);
        CHECK_NOTHROW(parse_directive(text));
    }
}

TEST_CASE("directive details across the grammar fixtures") {
    DirectiveInfo multi = parse_directive(
        "#pragma omp parallel for private(i, j, k)");
    CHECK(multi.private_vars == std::set<std::string>{"i", "j", "k"});

    DirectiveInfo two_vars =
        parse_directive("#pragma omp parallel for reduction(max:lo, hi)");
    REQUIRE(two_vars.reduction_clauses.size() == 1);
    CHECK(two_vars.reduction_clauses[0].op == "max");
    CHECK(two_vars.reduction_clauses[0].vars ==
          std::set<std::string>{"hi", "lo"});

    DirectiveInfo sched = parse_directive(
        "#pragma omp parallel for schedule(static)");
    REQUIRE(sched.schedule.has_value());
    CHECK(sched.schedule->kind == "static");
    CHECK(!sched.schedule->chunk.has_value());

    DirectiveInfo unknown = parse_directive(
        "#pragma omp parallel for if(n > 100) nowait");
    REQUIRE(unknown.other_clauses.size() == 2);
    CHECK(unknown.other_clauses[0] == "if(n > 100)");
    CHECK(unknown.other_clauses[1] == "nowait");
}

TEST_CASE("directive: non-parallel-for omp pragmas are not parallel for") {
    CHECK(!parse_directive("#pragma omp critical").is_parallel_for);
    CHECK(!parse_directive("#pragma omp atomic").is_parallel_for);
    CHECK(parse_directive("#pragma omp for").is_parallel_for == false);
    // Split spelling still counts.
    CHECK(parse_directive("#pragma omp parallel for schedule(static)")
              .is_parallel_for);
}

TEST_CASE("directive errors") {
    CHECK_THROWS_AS(parse_directive("#pragma once"), DirectiveError);
    CHECK_THROWS_AS(parse_directive("#pragma omp parallel for private("),
                    DirectiveError);
    CHECK_THROWS_AS(parse_directive("#pragma omp parallel for private()"),
                    DirectiveError);
    CHECK_THROWS_AS(parse_directive("#pragma omp parallel for reduction(+:)"),
                    DirectiveError);
    // An operator outside the closed set is recoverable: kept verbatim.
    DirectiveInfo odd =
        parse_directive("#pragma omp parallel for reduction(%:a)");
    CHECK(odd.reduction_clauses.empty());
    REQUIRE(odd.other_clauses.size() == 1);
    CHECK(odd.other_clauses[0] == "reduction(%:a)");
}

TEST_CASE("node_line_span counts physical lines") {
    std::string src = "for (i = 0; i < n; i++) {\n  a[i] = 0;\n  b[i] = 1;\n}";
    auto result = parse_source(src);
    CHECK(node_line_span(only_child(*result.root), src) == 4);
}
