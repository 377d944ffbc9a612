#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ompadvisor/record.hpp"

namespace ompadvisor {

// The three binary questions asked of a loop: does it need a directive at
// all, does its directive need a private clause, a reduction clause.
enum class Task { Directive, Private, Reduction };

const char* task_name(Task task);
std::optional<Task> task_from_name(std::string_view name);

struct LabeledItem {
    std::string record_id;
    int label = 0;
};

struct LabeledSet {
    Task task = Task::Directive;
    std::string split;  // train | validation | test
    std::vector<LabeledItem> items;
};

struct SplitResult {
    LabeledSet train;
    LabeledSet validation;
    LabeledSet test;
};

// Directive task covers the whole corpus; label 1 = pragma present.
std::vector<LabeledItem> make_directive_dataset(
    const std::vector<SourceRecord>& records);

// Clause tasks cover only records that do have a directive; label 1 = the
// clause appears on it. Task::Directive is not valid here.
std::vector<LabeledItem> make_clause_dataset(
    const std::vector<SourceRecord>& records, Task clause);

// Balances first (majority class downsampled to the minority count with the
// seeded RNG), then splits each class by the ratios, so every split stays
// balanced to within one item. Throws FormatError when a class is empty or
// ratios don't sum to 1.
SplitResult split_and_balance(Task task, const std::vector<LabeledItem>& items,
                              std::array<double, 3> ratios, std::uint64_t seed);

void save_manifest(const std::filesystem::path& file, const SplitResult& split);

SplitResult load_manifest(const std::filesystem::path& file, Task task);

}  // namespace ompadvisor
