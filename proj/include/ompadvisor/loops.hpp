#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ompadvisor/ast.hpp"
#include "ompadvisor/parser.hpp"

namespace ompadvisor {

struct LoopEntry {
    const AstNode* loop = nullptr;
    std::optional<std::string> pragma;      // attached pragma line, if any
    std::vector<const AstNode*> helpers;    // called FuncDefs, source order
};

// Collects the For nodes of a parsed unit that should become records:
//  - a For with an attached pragma is emitted and its nested loops are not,
//  - a For without one is emitted and also descended into, so unannotated
//    nested loops each get their own entry.
// Helpers are the unit's FuncDefs whose names are called anywhere inside the
// loop (one level of resolution, no transitive closure).
std::vector<LoopEntry> extract_loops(
    const AstNode& root, const std::vector<PragmaAttachment>& attachments);

// True when the loop body is `;` or `{}` (possibly nested empties).
bool loop_body_is_empty(const AstNode& for_node);

}  // namespace ompadvisor
