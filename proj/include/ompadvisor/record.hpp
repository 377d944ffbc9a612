#pragma once

#include <optional>
#include <string>

#include "ompadvisor/directive.hpp"

namespace ompadvisor {

// One corpus entry: a for-loop segment (plus the bodies of functions it
// calls, when they live in the same file) with its pragma, if any, held out
// as the label.
struct SourceRecord {
    std::string id;          // content hash of the normalized token stream
    std::string code_text;   // loop segment + helper function texts
    std::string ast_text;    // flattened AST of the same segment
    std::optional<std::string> pragma_raw;
    std::optional<DirectiveInfo> directive;
    std::string origin_path;
    int origin_line = 1;
    int loop_line_count = 1;

    bool has_directive() const { return directive.has_value(); }
};

}  // namespace ompadvisor
