#include "ompadvisor/directive.hpp"

#include <cctype>

#include "ompadvisor/error.hpp"

namespace ompadvisor {

namespace {

std::string collapse_spaces(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += c;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_names(std::string_view list) {
    std::vector<std::string> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= list.size(); ++i) {
        if (i < list.size() && (list[i] == '(' || list[i] == '[')) ++depth;
        if (i < list.size() && (list[i] == ')' || list[i] == ']')) --depth;
        if (i == list.size() || (list[i] == ',' && depth == 0)) {
            std::string name = trim(list.substr(start, i - start));
            if (!name.empty()) out.push_back(std::move(name));
            start = i + 1;
        }
    }
    return out;
}

bool is_reduction_op(std::string_view op) {
    return op == "+" || op == "-" || op == "*" || op == "&" || op == "|" ||
           op == "^" || op == "&&" || op == "||" || op == "min" ||
           op == "max";
}

bool is_schedule_kind(std::string_view kind) {
    return kind == "static" || kind == "dynamic" || kind == "guided" ||
           kind == "runtime" || kind == "auto";
}

struct Item {
    std::string word;
    std::optional<std::string> args;  // parenthesized payload, parens removed

    std::string verbatim() const {
        return args ? word + "(" + *args + ")" : word;
    }
};

// Splits the directive tail into words and word(...) groups.
std::vector<Item> scan_items(std::string_view tail) {
    std::vector<Item> out;
    std::size_t i = 0;
    while (i < tail.size()) {
        if (std::isspace(static_cast<unsigned char>(tail[i]))) {
            ++i;
            continue;
        }
        Item item;
        while (i < tail.size() && tail[i] != '(' &&
               !std::isspace(static_cast<unsigned char>(tail[i]))) {
            item.word += tail[i++];
        }
        while (i < tail.size() &&
               std::isspace(static_cast<unsigned char>(tail[i]))) {
            ++i;
        }
        if (i < tail.size() && tail[i] == '(') {
            int depth = 0;
            const std::size_t open = i;
            for (; i < tail.size(); ++i) {
                if (tail[i] == '(') ++depth;
                if (tail[i] == ')') {
                    --depth;
                    if (depth == 0) break;
                }
            }
            if (depth != 0) {
                throw DirectiveError("unbalanced parentheses in pragma: " +
                                     std::string(tail));
            }
            item.args = std::string(tail.substr(open + 1, i - open - 1));
            ++i;
        }
        if (!item.word.empty() || item.args) out.push_back(std::move(item));
    }
    return out;
}

}  // namespace

bool is_omp_pragma(std::string_view pragma_line) {
    const std::string norm = collapse_spaces(pragma_line);
    return norm.rfind("#pragma omp", 0) == 0 &&
           (norm.size() == 11 || norm[11] == ' ');
}

DirectiveInfo parse_directive(std::string_view pragma_raw) {
    const std::string norm = collapse_spaces(pragma_raw);
    if (!is_omp_pragma(norm)) {
        throw DirectiveError("not an OpenMP pragma: " + norm);
    }
    DirectiveInfo info;
    bool saw_parallel = false;
    bool saw_for = false;
    for (const Item& item : scan_items(std::string_view(norm).substr(11))) {
        if (!item.args) {
            if (item.word == "parallel") {
                saw_parallel = true;
            } else if (item.word == "for") {
                saw_for = true;
            } else {
                info.other_clauses.push_back(item.verbatim());
            }
            continue;
        }
        if (item.word == "private" || item.word == "firstprivate") {
            auto names = split_names(*item.args);
            if (names.empty()) {
                throw DirectiveError("empty variable list in " +
                                     item.verbatim());
            }
            auto& target = item.word == "private" ? info.private_vars
                                                  : info.firstprivate_vars;
            target.insert(names.begin(), names.end());
            continue;
        }
        if (item.word == "reduction") {
            const std::size_t colon = item.args->find(':');
            if (colon != std::string::npos) {
                ReductionClause clause;
                clause.op = trim(item.args->substr(0, colon));
                auto names = split_names(
                    std::string_view(*item.args).substr(colon + 1));
                clause.vars.insert(names.begin(), names.end());
                if (is_reduction_op(clause.op)) {
                    if (clause.vars.empty()) {
                        throw DirectiveError("empty variable list in " +
                                             item.verbatim());
                    }
                    info.reduction_clauses.push_back(std::move(clause));
                    continue;
                }
            }
            // Operator outside the closed set: keep the clause verbatim.
            info.other_clauses.push_back(item.verbatim());
            continue;
        }
        if (item.word == "schedule") {
            auto parts = split_names(*item.args);
            if (!parts.empty() && is_schedule_kind(parts[0]) &&
                parts.size() <= 2) {
                ScheduleInfo sched;
                sched.kind = parts[0];
                if (parts.size() == 2) {
                    try {
                        std::size_t used = 0;
                        const long chunk = std::stol(parts[1], &used);
                        if (used == parts[1].size() && chunk > 0) {
                            sched.chunk = chunk;
                        } else {
                            info.other_clauses.push_back(item.verbatim());
                            continue;
                        }
                    } catch (const std::exception&) {
                        info.other_clauses.push_back(item.verbatim());
                        continue;
                    }
                }
                info.schedule = std::move(sched);
                continue;
            }
            info.other_clauses.push_back(item.verbatim());
            continue;
        }
        info.other_clauses.push_back(item.verbatim());
    }
    info.is_parallel_for = saw_parallel && saw_for;
    return info;
}

}  // namespace ompadvisor
