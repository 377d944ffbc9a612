#include "ompadvisor/dataset.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "ompadvisor/error.hpp"
#include "ompadvisor/rng.hpp"

namespace ompadvisor {

const char* task_name(Task task) {
    switch (task) {
        case Task::Directive: return "directive";
        case Task::Private: return "private";
        case Task::Reduction: return "reduction";
    }
    return "directive";
}

std::optional<Task> task_from_name(std::string_view name) {
    if (name == "directive") return Task::Directive;
    if (name == "private") return Task::Private;
    if (name == "reduction") return Task::Reduction;
    return std::nullopt;
}

std::vector<LabeledItem> make_directive_dataset(
    const std::vector<SourceRecord>& records) {
    std::vector<LabeledItem> items;
    items.reserve(records.size());
    for (const auto& r : records) {
        items.push_back({r.id, r.has_directive() ? 1 : 0});
    }
    return items;
}

std::vector<LabeledItem> make_clause_dataset(
    const std::vector<SourceRecord>& records, Task clause) {
    if (clause == Task::Directive) {
        throw FormatError("clause dataset requires private or reduction");
    }
    std::vector<LabeledItem> items;
    for (const auto& r : records) {
        if (!r.directive) continue;
        const bool present = clause == Task::Private
                                 ? !r.directive->private_vars.empty()
                                 : !r.directive->reduction_clauses.empty();
        items.push_back({r.id, present ? 1 : 0});
    }
    return items;
}

SplitResult split_and_balance(Task task, const std::vector<LabeledItem>& items,
                              std::array<double, 3> ratios,
                              std::uint64_t seed) {
    const double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9) {
        throw FormatError("split ratios must sum to 1");
    }
    std::vector<LabeledItem> pos, neg;
    for (const auto& item : items) {
        (item.label == 1 ? pos : neg).push_back(item);
    }
    if (pos.empty() || neg.empty()) {
        throw FormatError("cannot balance a dataset with an empty class");
    }

    Rng rng(seed);
    rng.shuffle(pos);
    rng.shuffle(neg);
    const std::size_t n = std::min(pos.size(), neg.size());
    pos.resize(n);
    neg.resize(n);

    const auto n_train =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratios[0]));
    const auto n_valid =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratios[1]));

    SplitResult out;
    out.train = {task, "train", {}};
    out.validation = {task, "validation", {}};
    out.test = {task, "test", {}};
    auto deal = [&](const std::vector<LabeledItem>& cls) {
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (i < n_train) {
                out.train.items.push_back(cls[i]);
            } else if (i < n_train + n_valid) {
                out.validation.items.push_back(cls[i]);
            } else {
                out.test.items.push_back(cls[i]);
            }
        }
    };
    deal(pos);
    deal(neg);
    rng.shuffle(out.train.items);
    rng.shuffle(out.validation.items);
    rng.shuffle(out.test.items);
    return out;
}

namespace {

void write_split(std::ofstream& out, const LabeledSet& set) {
    for (const auto& item : set.items) {
        out << item.record_id << '\t' << item.label << '\t' << set.split
            << '\n';
    }
}

}  // namespace

void save_manifest(const std::filesystem::path& file,
                   const SplitResult& split) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write manifest file " + file.string());
    }
    write_split(out, split.train);
    write_split(out, split.validation);
    write_split(out, split.test);
}

SplitResult load_manifest(const std::filesystem::path& file, Task task) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw FormatError("cannot read manifest file " + file.string());
    }
    SplitResult out;
    out.train = {task, "train", {}};
    out.validation = {task, "validation", {}};
    out.test = {task, "test", {}};
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 =
            t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            throw FormatError("manifest line " + std::to_string(line_no) +
                              ": expected id<TAB>label<TAB>split");
        }
        LabeledItem item;
        item.record_id = line.substr(0, t1);
        const std::string label = line.substr(t1 + 1, t2 - t1 - 1);
        if (label != "0" && label != "1") {
            throw FormatError("manifest line " + std::to_string(line_no) +
                              ": label must be 0 or 1");
        }
        item.label = label == "1" ? 1 : 0;
        const std::string split = line.substr(t2 + 1);
        if (!seen.insert(item.record_id).second) {
            throw FormatError("manifest line " + std::to_string(line_no) +
                              ": record " + item.record_id +
                              " appears twice");
        }
        if (split == "train") {
            out.train.items.push_back(std::move(item));
        } else if (split == "validation") {
            out.validation.items.push_back(std::move(item));
        } else if (split == "test") {
            out.test.items.push_back(std::move(item));
        } else {
            throw FormatError("manifest line " + std::to_string(line_no) +
                              ": unknown split '" + split + "'");
        }
    }
    return out;
}

}  // namespace ompadvisor
