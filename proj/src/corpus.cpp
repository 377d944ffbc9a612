#include "ompadvisor/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "ompadvisor/error.hpp"
#include "ompadvisor/lexer.hpp"
#include "ompadvisor/parser.hpp"
#include "ompadvisor/repr.hpp"

namespace ompadvisor {

namespace {

using nlohmann::json;

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

std::string slice(std::string_view source, const AstNode& node) {
    if (node.begin >= node.end || node.end > source.size()) return "";
    return std::string(source.substr(node.begin, node.end - node.begin));
}

json directive_to_json(const DirectiveInfo& d) {
    json j;
    j["is_parallel_for"] = d.is_parallel_for;
    j["private_vars"] = d.private_vars;
    j["firstprivate_vars"] = d.firstprivate_vars;
    json reductions = json::array();
    for (const auto& r : d.reduction_clauses) {
        reductions.push_back({{"op", r.op}, {"vars", r.vars}});
    }
    j["reduction_clauses"] = std::move(reductions);
    if (d.schedule) {
        json s;
        s["kind"] = d.schedule->kind;
        if (d.schedule->chunk) s["chunk"] = *d.schedule->chunk;
        j["schedule"] = std::move(s);
    }
    j["other_clauses"] = d.other_clauses;
    return j;
}

DirectiveInfo directive_from_json(const json& j) {
    DirectiveInfo d;
    d.is_parallel_for = j.at("is_parallel_for").get<bool>();
    for (const auto& v : j.at("private_vars")) {
        d.private_vars.insert(v.get<std::string>());
    }
    for (const auto& v : j.at("firstprivate_vars")) {
        d.firstprivate_vars.insert(v.get<std::string>());
    }
    for (const auto& r : j.at("reduction_clauses")) {
        ReductionClause clause;
        clause.op = r.at("op").get<std::string>();
        for (const auto& v : r.at("vars")) {
            clause.vars.insert(v.get<std::string>());
        }
        d.reduction_clauses.push_back(std::move(clause));
    }
    if (j.contains("schedule")) {
        ScheduleInfo s;
        s.kind = j["schedule"].at("kind").get<std::string>();
        if (j["schedule"].contains("chunk")) {
            s.chunk = j["schedule"]["chunk"].get<long>();
        }
        d.schedule = std::move(s);
    }
    for (const auto& c : j.at("other_clauses")) {
        d.other_clauses.push_back(c.get<std::string>());
    }
    return d;
}

json record_to_json(const SourceRecord& r) {
    json j;
    j["id"] = r.id;
    j["code_text"] = r.code_text;
    j["ast_text"] = r.ast_text;
    if (r.pragma_raw) j["pragma_raw"] = *r.pragma_raw;
    if (r.directive) j["directive"] = directive_to_json(*r.directive);
    j["origin"] = {{"path", r.origin_path}, {"line", r.origin_line}};
    j["loop_line_count"] = r.loop_line_count;
    return j;
}

SourceRecord record_from_json(const json& j) {
    SourceRecord r;
    r.id = j.at("id").get<std::string>();
    r.code_text = j.at("code_text").get<std::string>();
    r.ast_text = j.at("ast_text").get<std::string>();
    if (j.contains("pragma_raw")) {
        r.pragma_raw = j["pragma_raw"].get<std::string>();
    }
    if (j.contains("directive")) {
        r.directive = directive_from_json(j["directive"]);
    }
    r.origin_path = j.at("origin").at("path").get<std::string>();
    r.origin_line = j.at("origin").at("line").get<int>();
    r.loop_line_count = j.at("loop_line_count").get<int>();
    if (r.directive.has_value() != r.pragma_raw.has_value()) {
        throw FormatError("record " + r.id +
                          ": directive and pragma_raw must come together");
    }
    return r;
}

void process_file(const std::filesystem::path& path,
                  std::vector<SourceRecord>& records, BuildReport& report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        report.skipped_files.push_back({path.string(), "unreadable"});
        return;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string source = buf.str();
    ++report.files_scanned;

    std::vector<Token> tokens;
    try {
        tokens = lex(source);
    } catch (const LexError& e) {
        report.skipped_files.push_back({path.string(), e.what()});
        return;
    }

    bool file_has_omp = false;
    for (const Token& t : tokens) {
        if (t.kind == TokenKind::PragmaLine && is_omp_pragma(t.lexeme)) {
            file_has_omp = true;
            break;
        }
    }

    ParseResult parsed = parse_unit(tokens);
    report.constructs_skipped += static_cast<long>(parsed.skipped.size());
    if (file_has_omp) ++report.files_with_omp;

    for (const LoopEntry& entry : extract_loops(*parsed.root,
                                                parsed.attachments)) {
        if (loop_body_is_empty(*entry.loop)) {
            ++report.loops_dropped_empty_body;
            continue;
        }
        const bool omp_attached =
            entry.pragma && is_omp_pragma(*entry.pragma);
        if (omp_attached) {
            DirectiveInfo info;
            try {
                info = parse_directive(*entry.pragma);
            } catch (const DirectiveError&) {
                ++report.loops_dropped_other_pragma;
                continue;
            }
            if (!info.is_parallel_for) {
                // Annotated, but not with the directive kind under study:
                // neither a positive nor a trustworthy negative.
                ++report.loops_dropped_other_pragma;
                continue;
            }
            SourceRecord rec = record_from_entry(source, entry, path.string());
            rec.pragma_raw = *entry.pragma;
            rec.directive = std::move(info);
            records.push_back(std::move(rec));
        } else if (file_has_omp) {
            // Pragma-free loop in a file whose author does use OpenMP: the
            // omission is taken as a deliberate "no directive needed".
            records.push_back(record_from_entry(source, entry, path.string()));
        }
    }
}

}  // namespace

std::string record_id_for(std::string_view code_text) {
    std::string joined;
    for (const Token& t : lex(code_text)) {
        joined += t.lexeme;
        joined += '\x1f';
    }
    return fnv1a_hex(joined);
}

SourceRecord record_from_entry(std::string_view source, const LoopEntry& entry,
                               const std::string& path) {
    SourceRecord rec;
    rec.code_text = slice(source, *entry.loop);
    for (const AstNode* helper : entry.helpers) {
        rec.code_text += "\n\n";
        rec.code_text += slice(source, *helper);
    }
    std::vector<std::string> ast_tokens = ast_linearize(*entry.loop);
    for (const AstNode* helper : entry.helpers) {
        std::vector<std::string> more = ast_linearize(*helper);
        ast_tokens.insert(ast_tokens.end(), more.begin(), more.end());
    }
    rec.ast_text = join_tokens(ast_tokens);
    rec.id = record_id_for(rec.code_text);
    rec.origin_path = path;
    rec.origin_line = entry.loop->line;
    rec.loop_line_count = node_line_span(*entry.loop, source);
    return rec;
}

std::vector<SourceRecord> build_corpus(
    const std::vector<std::filesystem::path>& root_dirs, BuildReport& report) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& root : root_dirs) {
        std::error_code ec;
        if (fs::is_regular_file(root, ec)) {
            files.push_back(root);
            continue;
        }
        fs::recursive_directory_iterator it(root, ec), end;
        if (ec) {
            report.skipped_files.push_back({root.string(), ec.message()});
            continue;
        }
        for (; it != end; it.increment(ec)) {
            if (ec) {
                report.skipped_files.push_back({root.string(), ec.message()});
                break;
            }
            if (!it->is_regular_file()) continue;
            const auto ext = it->path().extension();
            if (ext == ".c" || ext == ".h") files.push_back(it->path());
        }
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());

    std::vector<SourceRecord> records;
    for (const auto& file : files) {
        process_file(file, records, report);
    }
    return records;
}

std::vector<SourceRecord> deduplicate(const std::vector<SourceRecord>& records) {
    std::vector<const SourceRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SourceRecord* a, const SourceRecord* b) {
                         if (a->origin_path != b->origin_path) {
                             return a->origin_path < b->origin_path;
                         }
                         return a->origin_line < b->origin_line;
                     });
    std::unordered_set<std::string> seen;
    std::vector<SourceRecord> out;
    for (const SourceRecord* r : sorted) {
        if (seen.insert(r->id).second) {
            out.push_back(*r);
        }
    }
    return out;
}

CorpusStats corpus_stats(const std::vector<SourceRecord>& records) {
    CorpusStats stats;
    for (const auto& r : records) {
        ++stats.total_snippets;
        if (r.directive) {
            ++stats.with_directive;
            if (r.directive->schedule) {
                if (r.directive->schedule->kind == "static") {
                    ++stats.schedule_static;
                } else if (r.directive->schedule->kind == "dynamic") {
                    ++stats.schedule_dynamic;
                }
            }
            if (!r.directive->reduction_clauses.empty()) {
                ++stats.reduction_count;
            }
            if (!r.directive->private_vars.empty()) {
                ++stats.private_count;
            }
        }
        const int n = r.loop_line_count;
        if (n <= 10) {
            ++stats.length_histogram[0];
        } else if (n <= 50) {
            ++stats.length_histogram[1];
        } else if (n <= 100) {
            ++stats.length_histogram[2];
        } else {
            ++stats.length_histogram[3];
        }
    }
    return stats;
}

void save_corpus(const std::filesystem::path& file,
                 const std::vector<SourceRecord>& records,
                 const std::vector<std::string>& created_from) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write corpus file " + file.string());
    }
    json header;
    header["format_version"] = 1;
    header["created_from"] = created_from;
    header["negative_rule"] = "omp-file-only";
    out << header.dump() << '\n';
    for (const auto& r : records) {
        out << record_to_json(r).dump() << '\n';
    }
}

std::vector<SourceRecord> load_corpus(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw FormatError("cannot read corpus file " + file.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("corpus file " + file.string() + " is empty");
    }
    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw FormatError("corpus header: " + std::string(e.what()));
    }
    if (!header.contains("format_version") ||
        header["format_version"].get<int>() != 1) {
        throw FormatError("corpus file " + file.string() +
                          ": unsupported format version");
    }
    std::vector<SourceRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw FormatError("corpus line " + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    return records;
}

}  // namespace ompadvisor
