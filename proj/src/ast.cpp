#include "ompadvisor/ast.hpp"

#include <algorithm>

namespace ompadvisor {

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::TranslationUnit: return "TranslationUnit";
        case NodeKind::FuncDef: return "FuncDef";
        case NodeKind::Decl: return "Decl";
        case NodeKind::For: return "For";
        case NodeKind::While: return "While";
        case NodeKind::If: return "If";
        case NodeKind::Compound: return "Compound";
        case NodeKind::Assignment: return "Assignment";
        case NodeKind::BinaryOp: return "BinaryOp";
        case NodeKind::UnaryOp: return "UnaryOp";
        case NodeKind::TernaryOp: return "TernaryOp";
        case NodeKind::FuncCall: return "FuncCall";
        case NodeKind::ExprList: return "ExprList";
        case NodeKind::ArrayRef: return "ArrayRef";
        case NodeKind::StructRef: return "StructRef";
        case NodeKind::ID: return "ID";
        case NodeKind::Constant: return "Constant";
        case NodeKind::Cast: return "Cast";
        case NodeKind::Return: return "Return";
        case NodeKind::Break: return "Break";
        case NodeKind::Continue: return "Continue";
        case NodeKind::EmptyStatement: return "EmptyStatement";
    }
    return "Unknown";
}

std::unique_ptr<AstNode> clone_ast(const AstNode& node) {
    auto copy = std::make_unique<AstNode>(node.kind, node.attr);
    copy->begin = node.begin;
    copy->end = node.end;
    copy->line = node.line;
    copy->children.reserve(node.children.size());
    for (const auto& child : node.children) {
        copy->children.push_back(clone_ast(*child));
    }
    return copy;
}

int node_line_span(const AstNode& node, std::string_view source) {
    const std::size_t end = std::min(node.end, source.size());
    if (node.begin >= end) return 1;
    const auto text = source.substr(node.begin, end - node.begin);
    return 1 + static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace ompadvisor
