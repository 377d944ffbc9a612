#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ompadvisor {

// The closed set of node kinds every construct is mapped onto. Anything the
// parser cannot express with these is skipped, never half-encoded.
enum class NodeKind {
    TranslationUnit,
    FuncDef,
    Decl,
    For,
    While,
    If,
    Compound,
    Assignment,
    BinaryOp,
    UnaryOp,
    TernaryOp,
    FuncCall,
    ExprList,
    ArrayRef,
    StructRef,
    ID,
    Constant,
    Cast,
    Return,
    Break,
    Continue,
    EmptyStatement,
};

struct AstNode {
    NodeKind kind;
    // Kind-specific payload: operator spelling for BinaryOp/UnaryOp/
    // Assignment/StructRef, name for ID/Decl/FuncDef, "<type>, <value>" for
    // Constant, type text for Cast. Empty otherwise.
    std::string attr;
    std::vector<std::unique_ptr<AstNode>> children;

    // Source span in byte offsets, plus the line the node starts on.
    std::size_t begin = 0;
    std::size_t end = 0;
    int line = 1;

    explicit AstNode(NodeKind kind, std::string attr = "")
        : kind(kind), attr(std::move(attr)) {}

    AstNode* add(std::unique_ptr<AstNode> child) {
        children.push_back(std::move(child));
        return children.back().get();
    }
};

const char* node_kind_name(NodeKind kind);

std::unique_ptr<AstNode> clone_ast(const AstNode& node);

// Number of source lines the node spans (at least 1).
int node_line_span(const AstNode& node, std::string_view source);

}  // namespace ompadvisor
