#include "ompadvisor/vocab.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string_view>

#include "json.hpp"
#include "ompadvisor/error.hpp"

namespace ompadvisor {

int Vocabulary::add(const std::string& token) {
    if (token.empty() || token == "<pad>" || token == "<unk>" ||
        token == "<cls>") {
        throw FormatError("reserved or empty vocabulary token: " + token);
    }
    auto [it, inserted] = token_to_id_.emplace(token, size());
    if (inserted) id_to_token_.push_back(token);
    return it->second;
}

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& sequences,
                       int min_freq) {
    if (sequences.empty()) {
        throw FormatError("cannot build a vocabulary from an empty training set");
    }
    std::map<std::string, long> freq;
    for (const auto& seq : sequences) {
        for (const auto& tok : seq) {
            ++freq[tok];
        }
    }
    std::vector<std::pair<std::string, long>> entries(freq.begin(), freq.end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });
    Vocabulary vocab;
    vocab.min_freq = min_freq;
    for (const auto& [token, count] : entries) {
        if (count >= min_freq) vocab.add(token);
    }
    return vocab;
}

std::vector<int> encode(const std::vector<std::string>& tokens,
                        const Vocabulary& vocab, int max_len) {
    if (max_len < 2) {
        throw FormatError("max_len must be at least 2");
    }
    std::vector<int> ids;
    ids.reserve(static_cast<std::size_t>(max_len));
    ids.push_back(Vocabulary::kCls);
    for (const auto& tok : tokens) {
        if (static_cast<int>(ids.size()) >= max_len) break;
        ids.push_back(vocab.id_of(tok));
    }
    while (static_cast<int>(ids.size()) < max_len) {
        ids.push_back(Vocabulary::kPad);
    }
    return ids;
}

std::vector<std::string> decode(const std::vector<int>& ids,
                                const Vocabulary& vocab) {
    std::vector<std::string> out;
    for (int id : ids) {
        if (id == Vocabulary::kPad || id == Vocabulary::kCls) continue;
        out.push_back(vocab.token_of(id));
    }
    return out;
}

OovReport oov_report(const Vocabulary& vocab,
                     const std::vector<std::vector<std::string>>& sequences) {
    OovReport report;
    std::set<std::string> oov;
    long total_tokens = 0;
    for (const auto& seq : sequences) {
        total_tokens += static_cast<long>(seq.size());
        for (const auto& tok : seq) {
            if (!vocab.contains(tok)) oov.insert(tok);
        }
    }
    report.oov_types = static_cast<long>(oov.size());
    report.avg_length =
        sequences.empty()
            ? 0.0
            : static_cast<double>(total_tokens) /
                  static_cast<double>(sequences.size());
    return report;
}

void save_vocab(const std::filesystem::path& file, const Vocabulary& vocab,
                int max_len) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write vocabulary file " + file.string());
    }
    nlohmann::json header;
    header["version"] = 1;
    header["min_freq"] = vocab.min_freq;
    header["max_len"] = max_len;
    out << header.dump() << '\n';
    for (int id = 3; id < vocab.size(); ++id) {
        out << vocab.token_of(id) << '\t' << id << '\n';
    }
}

Vocabulary load_vocab(const std::filesystem::path& file, int* max_len) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw FormatError("cannot read vocabulary file " + file.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("vocabulary file " + file.string() + " is empty");
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("vocabulary header: " + std::string(e.what()));
    }
    Vocabulary vocab;
    vocab.min_freq = header.value("min_freq", 1);
    if (max_len) *max_len = header.value("max_len", 110);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t tab = line.rfind('\t');
        if (tab == std::string::npos) {
            throw FormatError("vocabulary line " + std::to_string(line_no) +
                              ": missing tab separator");
        }
        const std::string token = line.substr(0, tab);
        const int id = std::stoi(line.substr(tab + 1));
        const int assigned = vocab.add(token);
        if (assigned != id) {
            throw FormatError("vocabulary line " + std::to_string(line_no) +
                              ": id " + std::to_string(id) +
                              " out of sequence");
        }
    }
    return vocab;
}

std::string vocab_fingerprint(const Vocabulary& vocab) {
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&h](std::string_view bytes) {
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0x1f;
        h *= 1099511628211ULL;
    };
    for (int id = 0; id < vocab.size(); ++id) {
        mix(vocab.token_of(id));
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t v = h;
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

}  // namespace ompadvisor
