#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ompadvisor/ast.hpp"
#include "ompadvisor/token.hpp"

namespace ompadvisor {

// The four input encodings a model can be trained on: raw token text,
// identifier-canonicalized text, flattened AST, and identifier-canonicalized
// flattened AST.
enum class ReprKind { Text, RText, Ast, RAst };

const char* repr_kind_name(ReprKind kind);
std::optional<ReprKind> repr_kind_from_name(std::string_view name);

// Identifier canonicalization: every identifier is assigned var<k>, arr<k>,
// or func<k>. The category comes from the identifier's first syntactic use
// (FuncCall callee -> func, ArrayRef base -> arr, anything else -> var) and
// k counts first occurrences per category from 0.
struct RenameMap {
    std::unordered_map<std::string, std::string> names;
    int var_count = 0;
    int arr_count = 0;
    int func_count = 0;

    // Canonical name, or the identifier itself when unmapped.
    const std::string& resolve(const std::string& identifier) const {
        auto it = names.find(identifier);
        return it == names.end() ? identifier : it->second;
    }
};

// Raw text tokens: the lexeme stream of `code_text` in source order.
std::vector<std::string> to_text(std::string_view code_text);

// Pre-order flattening. Every node contributes a `Kind:` marker followed by
// its attr split on spaces, then its children: `For: Assignment: = ID: i
// Constant: int, 0 ...`.
std::vector<std::string> ast_linearize(const AstNode& node);

// Same traversal, one node per line, two-space indent per tree level.
std::string render_ast_tree(const AstNode& node);

// First-use walk over a parsed unit. Struct field names after `.`/`->` are
// left alone, as are keywords, operators, and literals.
RenameMap build_rename_map(const AstNode& root);

std::unique_ptr<AstNode> rename_ast(const AstNode& root, const RenameMap& map);

// Applies the map to Identifier tokens of a lexed stream. Identifiers right
// after `.` or `->` are struct fields and stay verbatim.
std::vector<std::string> rename_text(const std::vector<Token>& tokens,
                                     const RenameMap& map);

// Full dispatch on a record's code text. For AST kinds the unit's top-level
// constructs are flattened in order, without a TranslationUnit marker.
std::vector<std::string> represent_code(std::string_view code_text,
                                        ReprKind kind);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace ompadvisor
