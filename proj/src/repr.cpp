#include "ompadvisor/repr.hpp"

#include <sstream>

#include "ompadvisor/lexer.hpp"
#include "ompadvisor/parser.hpp"

namespace ompadvisor {

const char* repr_kind_name(ReprKind kind) {
    switch (kind) {
        case ReprKind::Text: return "text";
        case ReprKind::RText: return "r_text";
        case ReprKind::Ast: return "ast";
        case ReprKind::RAst: return "r_ast";
    }
    return "text";
}

std::optional<ReprKind> repr_kind_from_name(std::string_view name) {
    if (name == "text") return ReprKind::Text;
    if (name == "r_text") return ReprKind::RText;
    if (name == "ast") return ReprKind::Ast;
    if (name == "r_ast") return ReprKind::RAst;
    return std::nullopt;
}

std::vector<std::string> to_text(std::string_view code_text) {
    std::vector<std::string> out;
    for (const Token& t : lex(code_text)) {
        out.push_back(t.lexeme);
    }
    return out;
}

namespace {

void linearize_into(const AstNode& node, std::vector<std::string>& out) {
    out.push_back(std::string(node_kind_name(node.kind)) + ":");
    std::istringstream attr(node.attr);
    std::string piece;
    while (attr >> piece) {
        out.push_back(piece);
    }
    for (const auto& child : node.children) {
        linearize_into(*child, out);
    }
}

void render_into(const AstNode& node, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += node_kind_name(node.kind);
    out += ':';
    if (!node.attr.empty()) {
        out += ' ';
        out += node.attr;
    }
    out += '\n';
    for (const auto& child : node.children) {
        render_into(*child, depth + 1, out);
    }
}

class RenameBuilder {
public:
    RenameMap run(const AstNode& root) {
        visit(root);
        return std::move(map_);
    }

private:
    enum class Category { Var, Arr, Func };

    void record(const std::string& name, Category cat) {
        if (name.empty() || map_.names.count(name) > 0) return;
        switch (cat) {
            case Category::Var:
                map_.names[name] = "var" + std::to_string(map_.var_count++);
                break;
            case Category::Arr:
                map_.names[name] = "arr" + std::to_string(map_.arr_count++);
                break;
            case Category::Func:
                map_.names[name] = "func" + std::to_string(map_.func_count++);
                break;
        }
    }

    void visit(const AstNode& node) {
        switch (node.kind) {
            case NodeKind::FuncCall:
                if (!node.children.empty() &&
                    node.children[0]->kind == NodeKind::ID) {
                    record(node.children[0]->attr, Category::Func);
                    for (std::size_t i = 1; i < node.children.size(); ++i) {
                        visit(*node.children[i]);
                    }
                    return;
                }
                break;
            case NodeKind::ArrayRef:
                if (!node.children.empty() &&
                    node.children[0]->kind == NodeKind::ID) {
                    record(node.children[0]->attr, Category::Arr);
                    for (std::size_t i = 1; i < node.children.size(); ++i) {
                        visit(*node.children[i]);
                    }
                    return;
                }
                break;
            case NodeKind::StructRef:
                // The field child is API surface; only the base participates.
                if (!node.children.empty()) visit(*node.children[0]);
                return;
            case NodeKind::ID:
                record(node.attr, Category::Var);
                return;
            case NodeKind::Decl:
            case NodeKind::FuncDef:
                record(node.attr, Category::Var);
                break;
            default:
                break;
        }
        for (const auto& child : node.children) {
            visit(*child);
        }
    }

    RenameMap map_;
};

void rename_in_place(AstNode& node, const RenameMap& map) {
    switch (node.kind) {
        case NodeKind::ID:
        case NodeKind::Decl:
        case NodeKind::FuncDef:
            node.attr = map.resolve(node.attr);
            break;
        case NodeKind::StructRef:
            if (!node.children.empty()) rename_in_place(*node.children[0], map);
            return;
        default:
            break;
    }
    for (auto& child : node.children) {
        rename_in_place(*child, map);
    }
}

}  // namespace

std::vector<std::string> ast_linearize(const AstNode& node) {
    std::vector<std::string> out;
    linearize_into(node, out);
    return out;
}

std::string render_ast_tree(const AstNode& node) {
    std::string out;
    render_into(node, 0, out);
    return out;
}

RenameMap build_rename_map(const AstNode& root) {
    RenameBuilder builder;
    return builder.run(root);
}

std::unique_ptr<AstNode> rename_ast(const AstNode& root, const RenameMap& map) {
    auto copy = clone_ast(root);
    rename_in_place(*copy, map);
    return copy;
}

std::vector<std::string> rename_text(const std::vector<Token>& tokens,
                                     const RenameMap& map) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.kind == TokenKind::Identifier) {
            const bool is_field =
                i > 0 && tokens[i - 1].kind == TokenKind::Operator &&
                (tokens[i - 1].lexeme == "." || tokens[i - 1].lexeme == "->");
            out.push_back(is_field ? t.lexeme : map.resolve(t.lexeme));
        } else {
            out.push_back(t.lexeme);
        }
    }
    return out;
}

std::vector<std::string> represent_code(std::string_view code_text,
                                        ReprKind kind) {
    if (kind == ReprKind::Text) {
        return to_text(code_text);
    }
    ParseResult parsed = parse_source(code_text);
    if (kind == ReprKind::RText) {
        const RenameMap map = build_rename_map(*parsed.root);
        return rename_text(lex(code_text), map);
    }
    std::vector<std::string> out;
    if (kind == ReprKind::RAst) {
        const RenameMap map = build_rename_map(*parsed.root);
        for (const auto& child : parsed.root->children) {
            auto renamed = rename_ast(*child, map);
            linearize_into(*renamed, out);
        }
        return out;
    }
    for (const auto& child : parsed.root->children) {
        linearize_into(*child, out);
    }
    return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out += ' ';
        out += tokens[i];
    }
    return out;
}

}  // namespace ompadvisor
