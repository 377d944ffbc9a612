#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace ompadvisor {

// Whole-token vocabulary with three reserved ids. Ids are assigned by
// descending training frequency, ties broken lexicographically, so builds
// are deterministic.
class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kCls = 2;

    Vocabulary() : id_to_token_{"<pad>", "<unk>", "<cls>"} {}

    int size() const { return static_cast<int>(id_to_token_.size()); }

    int id_of(const std::string& token) const {
        auto it = token_to_id_.find(token);
        return it == token_to_id_.end() ? kUnk : it->second;
    }

    bool contains(const std::string& token) const {
        return token_to_id_.count(token) > 0;
    }

    const std::string& token_of(int id) const { return id_to_token_.at(id); }

    // Appends a token with the next free id. Reserved names are rejected.
    int add(const std::string& token);

    int min_freq = 1;

private:
    std::unordered_map<std::string, int> token_to_id_;
    std::vector<std::string> id_to_token_;
};

struct EncodedInstance {
    std::vector<int> ids;  // length exactly max_len
    int true_length = 0;   // CLS + real tokens, before padding
    int label = 0;
};

// Builds from training sequences only. Throws FormatError when the training
// set is empty.
Vocabulary build_vocab(const std::vector<std::vector<std::string>>& sequences,
                       int min_freq = 1);

// [CLS, ids..., PAD...] of length max_len; overlong input is truncated.
std::vector<int> encode(const std::vector<std::string>& tokens,
                        const Vocabulary& vocab, int max_len);

// Inverse of encode for reporting: PAD positions dropped, CLS dropped.
std::vector<std::string> decode(const std::vector<int>& ids,
                                const Vocabulary& vocab);

struct OovReport {
    long oov_types = 0;
    double avg_length = 0.0;  // mean token count per sequence, pre-truncation
};

OovReport oov_report(const Vocabulary& vocab,
                     const std::vector<std::vector<std::string>>& sequences);

void save_vocab(const std::filesystem::path& file, const Vocabulary& vocab,
                int max_len);

Vocabulary load_vocab(const std::filesystem::path& file, int* max_len);

// Stable fingerprint of the id assignment, stored in checkpoints so a model
// is never run against the wrong vocabulary.
std::string vocab_fingerprint(const Vocabulary& vocab);

}  // namespace ompadvisor
