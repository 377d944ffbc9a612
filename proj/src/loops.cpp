#include "ompadvisor/loops.hpp"

#include <set>
#include <unordered_map>

namespace ompadvisor {

namespace {

void collect_callee_names(const AstNode& node, std::set<std::string>& names) {
    if (node.kind == NodeKind::FuncCall && !node.children.empty() &&
        node.children[0]->kind == NodeKind::ID) {
        names.insert(node.children[0]->attr);
    }
    for (const auto& child : node.children) {
        collect_callee_names(*child, names);
    }
}

bool subtree_contains(const AstNode& node, const AstNode* needle) {
    if (&node == needle) return true;
    for (const auto& child : node.children) {
        if (subtree_contains(*child, needle)) return true;
    }
    return false;
}

bool statement_is_empty(const AstNode& node) {
    if (node.kind == NodeKind::EmptyStatement) return true;
    if (node.kind != NodeKind::Compound) return false;
    for (const auto& stmt : node.children) {
        if (!statement_is_empty(*stmt)) return false;
    }
    return true;
}

void walk(const AstNode& node,
          const std::unordered_map<const AstNode*, std::string>& pragma_of,
          std::vector<LoopEntry>& out) {
    if (node.kind == NodeKind::For) {
        LoopEntry entry;
        entry.loop = &node;
        auto it = pragma_of.find(&node);
        if (it != pragma_of.end()) {
            entry.pragma = it->second;
            out.push_back(std::move(entry));
            return;  // annotated: nested loops belong to this record
        }
        out.push_back(std::move(entry));
        // fall through: unannotated nested loops become their own entries
    }
    for (const auto& child : node.children) {
        walk(*child, pragma_of, out);
    }
}

}  // namespace

std::vector<LoopEntry> extract_loops(
    const AstNode& root, const std::vector<PragmaAttachment>& attachments) {
    // When several pragmas target one statement, an OpenMP one wins; the
    // first otherwise.
    std::unordered_map<const AstNode*, std::string> pragma_of;
    for (const auto& att : attachments) {
        auto it = pragma_of.find(att.target);
        if (it == pragma_of.end()) {
            pragma_of.emplace(att.target, att.pragma);
        } else if (it->second.rfind("#pragma omp", 0) != 0 &&
                   att.pragma.rfind("#pragma omp", 0) == 0) {
            it->second = att.pragma;
        }
    }

    std::vector<LoopEntry> entries;
    walk(root, pragma_of, entries);

    for (LoopEntry& entry : entries) {
        std::set<std::string> callees;
        collect_callee_names(*entry.loop, callees);
        if (callees.empty()) continue;
        for (const auto& child : root.children) {
            if (child->kind != NodeKind::FuncDef) continue;
            if (callees.count(child->attr) == 0) continue;
            // A function that contains the loop would duplicate it.
            if (subtree_contains(*child, entry.loop)) continue;
            entry.helpers.push_back(child.get());
        }
    }
    return entries;
}

bool loop_body_is_empty(const AstNode& for_node) {
    if (for_node.kind != NodeKind::For || for_node.children.size() < 4) {
        return false;
    }
    return statement_is_empty(*for_node.children[3]);
}

}  // namespace ompadvisor
