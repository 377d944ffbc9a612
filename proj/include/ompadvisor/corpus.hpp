#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ompadvisor/loops.hpp"
#include "ompadvisor/record.hpp"

namespace ompadvisor {

struct CorpusStats {
    long total_snippets = 0;
    long with_directive = 0;
    long schedule_static = 0;
    long schedule_dynamic = 0;
    long reduction_count = 0;
    long private_count = 0;
    // Loop line counts binned as <=10, 11-50, 51-100, >100.
    std::array<long, 4> length_histogram{};
};

struct SkipEntry {
    std::string path;
    std::string reason;
};

struct BuildReport {
    long files_scanned = 0;
    long files_with_omp = 0;
    long constructs_skipped = 0;          // tolerant-parser recoveries
    long loops_dropped_empty_body = 0;
    long loops_dropped_other_pragma = 0;  // OpenMP pragma, but not parallel-for
    std::vector<SkipEntry> skipped_files;
};

// Content id: FNV-1a over the lexed token stream of code_text, so
// whitespace and comments don't matter but identifiers and literals do.
std::string record_id_for(std::string_view code_text);

// Fills the content fields (code/ast text, id, origin, line count) from an
// extracted loop; labeling stays with the caller.
SourceRecord record_from_entry(std::string_view source, const LoopEntry& entry,
                               const std::string& path);

// Walks the given trees (lexicographic path order), parses each .c/.h file,
// and applies the selection rules: loops annotated `parallel for` become
// positives, pragma-free loops from files that use OpenMP somewhere become
// negatives, everything else is dropped. Empty-bodied loops are dropped
// unconditionally. Unreadable or unlexable files end up in the report.
std::vector<SourceRecord> build_corpus(
    const std::vector<std::filesystem::path>& root_dirs, BuildReport& report);

// Collapses records with identical normalized token streams to the first
// occurrence in (path, line) order.
std::vector<SourceRecord> deduplicate(const std::vector<SourceRecord>& records);

CorpusStats corpus_stats(const std::vector<SourceRecord>& records);

// Line-delimited persistence: one header object, then one record per line.
void save_corpus(const std::filesystem::path& file,
                 const std::vector<SourceRecord>& records,
                 const std::vector<std::string>& created_from);

std::vector<SourceRecord> load_corpus(const std::filesystem::path& file);

}  // namespace ompadvisor
