#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ompadvisor {

struct ScheduleInfo {
    std::string kind;  // static | dynamic | guided | runtime | auto
    std::optional<long> chunk;

    bool operator==(const ScheduleInfo&) const = default;
};

struct ReductionClause {
    std::string op;  // one of + - * & | ^ && || min max
    std::set<std::string> vars;

    bool operator==(const ReductionClause&) const = default;
};

// Structured view of one `#pragma omp ...` line. Clauses outside the
// recognized subset are preserved verbatim instead of being rejected.
struct DirectiveInfo {
    bool is_parallel_for = false;
    std::set<std::string> private_vars;
    std::set<std::string> firstprivate_vars;
    std::vector<ReductionClause> reduction_clauses;
    std::optional<ScheduleInfo> schedule;
    std::vector<std::string> other_clauses;

    bool operator==(const DirectiveInfo&) const = default;
};

bool is_omp_pragma(std::string_view pragma_line);

// Parses a normalized pragma line. Throws DirectiveError when the line is
// not `#pragma omp ...` or a recognized clause is malformed beyond recovery
// (unbalanced parentheses, empty variable list).
DirectiveInfo parse_directive(std::string_view pragma_raw);

}  // namespace ompadvisor
