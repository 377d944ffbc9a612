#include "ompadvisor/synth.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ompadvisor/error.hpp"
#include "ompadvisor/rng.hpp"

namespace ompadvisor {

namespace {

struct Names {
    std::string idx;
    std::string bound;
    std::string arr0, arr1, arr2;
    std::string scalar;
};

struct LoopSpec {
    std::string text;  // complete function definition
    bool positive = false;
};

const std::array<std::string, 5> kIdxPool = {"i", "j", "ii", "jj", "idx"};
const std::array<std::string, 4> kBoundPool = {"n", "len", "count", "m"};
const std::array<std::string, 10> kArrPool = {"a",   "b",   "c",   "dst", "src",
                                              "buf", "vec", "out", "w",   "z"};
const std::array<std::string, 4> kScalarPool = {"s", "acc", "val", "g"};

// Pools for the naming-signal corpus; the class label of the cue family is
// carried entirely by which side these names come from.
const std::array<std::string, 3> kPosIdxPool = {"gid", "tid", "lane"};
const std::array<std::string, 2> kPosBoundPool = {"width", "npoints"};
const std::array<std::string, 4> kPosArrPool = {"grid", "field", "image",
                                                "rowbuf"};
const std::array<std::string, 2> kPosScalarPool = {"scale", "gain"};
const std::array<std::string, 3> kNegIdxPool = {"kk", "cur", "slot"};
const std::array<std::string, 2> kNegBoundPool = {"limit", "total"};
const std::array<std::string, 4> kNegArrPool = {"hist", "tab", "queue",
                                                "ring"};
const std::array<std::string, 2> kNegScalarPool = {"carry", "debt"};

template <std::size_t N>
std::string pick(const std::array<std::string, N>& pool, Rng& rng) {
    return pool[static_cast<std::size_t>(rng.below(N))];
}

Names draw_names(Rng& rng) {
    Names names;
    names.idx = pick(kIdxPool, rng);
    names.bound = pick(kBoundPool, rng);
    std::vector<std::size_t> order(kArrPool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    names.arr0 = kArrPool[order[0]];
    names.arr1 = kArrPool[order[1]];
    names.arr2 = kArrPool[order[2]];
    names.scalar = pick(kScalarPool, rng);
    return names;
}

Names draw_cue_names(Rng& rng, bool positive) {
    Names names;
    if (positive) {
        names.idx = pick(kPosIdxPool, rng);
        names.bound = pick(kPosBoundPool, rng);
        const auto first = rng.below(kPosArrPool.size());
        auto second = rng.below(kPosArrPool.size() - 1);
        if (second >= first) ++second;
        names.arr0 = kPosArrPool[static_cast<std::size_t>(first)];
        names.arr1 = kPosArrPool[static_cast<std::size_t>(second)];
        names.scalar = pick(kPosScalarPool, rng);
    } else {
        names.idx = pick(kNegIdxPool, rng);
        names.bound = pick(kNegBoundPool, rng);
        const auto first = rng.below(kNegArrPool.size());
        auto second = rng.below(kNegArrPool.size() - 1);
        if (second >= first) ++second;
        names.arr0 = kNegArrPool[static_cast<std::size_t>(first)];
        names.arr1 = kNegArrPool[static_cast<std::size_t>(second)];
        names.scalar = pick(kNegScalarPool, rng);
    }
    return names;
}

std::string wrap_function(int gid, const std::string& params,
                          const std::string& locals,
                          const std::string& body) {
    std::string out = "void case_" + std::to_string(gid) + "(" + params +
                      ") {\n";
    if (!locals.empty()) out += "    " + locals + "\n";
    out += body;
    out += "}\n";
    return out;
}

std::string k_str(int k) { return std::to_string(k); }

LoopSpec make_plain_positive(int gid, int k, int variant, const Names& n) {
    LoopSpec spec;
    spec.positive = true;
    std::string body;
    switch (variant % 4) {
        case 0:
            body = "    #pragma omp parallel for\n"
                   "    for (" + n.idx + " = 0; " + n.idx + " < " + n.bound +
                   "; " + n.idx + "++) {\n"
                   "        " + n.arr0 + "[" + n.idx + "] = " + n.arr1 + "[" +
                   n.idx + "] * " + n.arr2 + "[" + n.idx + "] + " + k_str(k) +
                   ";\n"
                   "    }\n";
            spec.text = wrap_function(
                gid,
                "int " + n.bound + ", double *" + n.arr0 + ", double *" +
                    n.arr1 + ", double *" + n.arr2,
                "int " + n.idx + ";", body);
            break;
        case 1:
            body = "    #pragma omp parallel for private(" + n.scalar + ")\n"
                   "    for (" + n.idx + " = 0; " + n.idx + " < " + n.bound +
                   "; " + n.idx + "++) {\n"
                   "        " + n.scalar + " = " + n.arr1 + "[" + n.idx +
                   "] * 2;\n"
                   "        " + n.arr0 + "[" + n.idx + "] = " + n.scalar +
                   " + " + k_str(k) + ";\n"
                   "    }\n";
            spec.text = wrap_function(
                gid,
                "int " + n.bound + ", double *" + n.arr0 + ", double *" +
                    n.arr1,
                "int " + n.idx + "; double " + n.scalar + ";", body);
            break;
        case 2:
            body = "    #pragma omp parallel for reduction(+:" + n.scalar +
                   ")\n"
                   "    for (" + n.idx + " = 0; " + n.idx + " < " + n.bound +
                   "; " + n.idx + "++) {\n"
                   "        " + n.scalar + " = " + n.scalar + " + " + n.arr0 +
                   "[" + n.idx + "] * " + k_str(k) + ";\n"
                   "    }\n";
            spec.text = wrap_function(
                gid, "int " + n.bound + ", double *" + n.arr0,
                "int " + n.idx + "; double " + n.scalar + " = 0;", body);
            break;
        default:
            body = "    #pragma omp parallel for schedule(static, 4)\n"
                   "    for (" + n.idx + " = 0; " + n.idx + " < " + n.bound +
                   "; " + n.idx + "++) {\n"
                   "        " + n.arr0 + "[" + n.idx + "] = " + n.arr1 + "[" +
                   n.idx + "] + " + k_str(k) + ";\n"
                   "    }\n";
            spec.text = wrap_function(
                gid,
                "int " + n.bound + ", double *" + n.arr0 + ", double *" +
                    n.arr1,
                "int " + n.idx + ";", body);
            break;
    }
    return spec;
}

LoopSpec make_io_negative(int gid, int k, int variant, const Names& n) {
    LoopSpec spec;
    spec.positive = false;
    std::string body;
    switch (variant % 3) {
        case 0:
            body = "    for (" + n.idx + " = 0; " + n.idx + " < " + n.bound +
                   "; " + n.idx + "++) {\n"
                   "        fprintf(stderr, \"%d\\n\", " + n.arr0 + "[" +
                   n.idx + "] + " + k_str(k) + ");\n"
                   "    }\n";
            break;
        case 1:
            body = "    for (" + n.idx + " = 0; " + n.idx + " < " + n.bound +
                   "; " + n.idx + "++) {\n"
                   "        printf(\"%d %d\\n\", " + n.idx + ", " + n.arr0 +
                   "[" + n.idx + "] + " + k_str(k) + ");\n"
                   "    }\n";
            break;
        default:
            body = "    for (" + n.idx + " = 0; " + n.idx + " < " + n.bound +
                   "; " + n.idx + "++) {\n"
                   "        scanf(\"%d\", &" + n.arr0 + "[" + n.idx + "]);\n"
                   "        " + n.arr0 + "[" + n.idx + "] = " + n.arr0 + "[" +
                   n.idx + "] + " + k_str(k) + ";\n"
                   "    }\n";
            break;
    }
    spec.text = wrap_function(gid, "int " + n.bound + ", int *" + n.arr0,
                              "int " + n.idx + ";", body);
    return spec;
}

// Twin pairs: the dependent (negative) and independent (positive) bodies
// use exactly the same token multiset, differing only in token order.
std::string twin_body(const Names& n, int k, int variant, bool positive) {
    const std::string start = variant % 2 == 0 ? "1" : "0";
    std::string update;
    if (variant % 2 == 0) {
        update = positive
                     ? n.arr0 + "[" + n.idx + "] = " + n.arr0 + "[" + n.idx +
                           "] - 1 + " + n.arr1 + "[" + n.idx + "] + " +
                           k_str(k) + ";"
                     : n.arr0 + "[" + n.idx + "] = " + n.arr0 + "[" + n.idx +
                           " - 1] + " + n.arr1 + "[" + n.idx + "] + " +
                           k_str(k) + ";";
    } else {
        update = positive
                     ? n.arr0 + "[" + n.idx + "] = " + n.arr0 + "[" + n.idx +
                           "] + 1 * " + n.arr1 + "[" + n.idx + "] + " +
                           k_str(k) + ";"
                     : n.arr0 + "[" + n.idx + " + 1] = " + n.arr0 + "[" +
                           n.idx + "] * " + n.arr1 + "[" + n.idx + "] + " +
                           k_str(k) + ";";
    }
    std::string body;
    if (positive) body += "    #pragma omp parallel for\n";
    body += "    for (" + n.idx + " = " + start + "; " + n.idx + " < " +
            n.bound + "; " + n.idx + "++) {\n"
            "        " + update + "\n"
            "    }\n";
    return body;
}

LoopSpec make_twin(int gid, int k, int variant, const Names& n,
                   bool positive) {
    LoopSpec spec;
    spec.positive = positive;
    spec.text = wrap_function(
        gid,
        "int " + n.bound + ", double *" + n.arr0 + ", double *" + n.arr1,
        "int " + n.idx + ";", twin_body(n, k, variant, positive));
    return spec;
}

// Cue pairs for the naming-signal corpus: one shared template, class given
// away only by the identifier pools.
LoopSpec make_cue(int gid, int k, const Names& n, bool positive) {
    LoopSpec spec;
    spec.positive = positive;
    std::string body;
    if (positive) body += "    #pragma omp parallel for\n";
    body += "    for (" + n.idx + " = 0; " + n.idx + " < " + n.bound + "; " +
            n.idx + "++) {\n"
            "        " + n.arr0 + "[" + n.idx + "] = " + n.arr1 + "[" + n.idx +
            "] * " + n.scalar + " + " + k_str(k) + ";\n"
            "    }\n";
    spec.text = wrap_function(
        gid,
        "int " + n.bound + ", double *" + n.arr0 + ", double *" + n.arr1 +
            ", double " + n.scalar,
        "int " + n.idx + ";", body);
    return spec;
}

LoopSpec make_dep_negative(int gid, int k, int variant, const Names& n) {
    return make_twin(gid, k, variant, n, /*positive=*/false);
}

}  // namespace

SynthSummary generate_synthetic_tree(const std::string& out_dir,
                                     const SynthOptions& options) {
    if (options.loops < 8) {
        throw FormatError("synthetic corpus needs at least 8 loops");
    }
    if (options.loops_per_file < 2) {
        throw FormatError("synthetic files need at least 2 loops each");
    }
    Rng rng(options.seed);
    std::vector<LoopSpec> positives;
    std::vector<LoopSpec> negatives;
    const int pos_total = options.loops / 2;
    const int neg_total = options.loops - pos_total;
    // Order-only pairs are deliberately kept a minority: a bag model scores
    // 50% on them no matter what, so their share sets its accuracy ceiling.
    const int pairs =
        options.naming_signal ? options.loops / 4 : options.loops / 8;
    int gid = 0;

    if (!options.naming_signal) {
        for (int p = 0; p < pairs; ++p) {
            const Names n = draw_names(rng);
            const int k = 5000 + p;
            positives.push_back(make_twin(gid++, k, p, n, true));
            negatives.push_back(make_twin(gid++, k, p, n, false));
        }
        for (int i = static_cast<int>(positives.size()); i < pos_total; ++i) {
            positives.push_back(
                make_plain_positive(gid, 100 + gid, i, draw_names(rng)));
            ++gid;
        }
        for (int i = static_cast<int>(negatives.size()); i < neg_total; ++i) {
            negatives.push_back(
                make_io_negative(gid, 100 + gid, i, draw_names(rng)));
            ++gid;
        }
    } else {
        for (int p = 0; p < pairs; ++p) {
            const int k = 5000 + p;
            positives.push_back(
                make_cue(gid++, k, draw_cue_names(rng, true), true));
            negatives.push_back(
                make_cue(gid++, k, draw_cue_names(rng, false), false));
        }
        for (int i = static_cast<int>(positives.size()); i < pos_total; ++i) {
            positives.push_back(
                make_plain_positive(gid, 100 + gid, i, draw_names(rng)));
            ++gid;
        }
        int toggle = 0;
        for (int i = static_cast<int>(negatives.size()); i < neg_total; ++i) {
            const Names n = draw_names(rng);
            negatives.push_back(toggle % 2 == 0
                                    ? make_io_negative(gid, 100 + gid, i, n)
                                    : make_dep_negative(gid, 100 + gid, i, n));
            ++gid;
            ++toggle;
        }
    }

    rng.shuffle(positives);
    rng.shuffle(negatives);

    std::filesystem::create_directories(out_dir);
    SynthSummary summary;
    summary.loops = options.loops;
    summary.positives = static_cast<int>(positives.size());
    summary.negatives = static_cast<int>(negatives.size());

    // Interleave the two lists so every file holds both classes.
    const int per_file = options.loops_per_file;
    const int pos_per_file = per_file / 2;
    const int neg_per_file = per_file - pos_per_file;
    std::vector<std::string> chunks;
    std::size_t pi = 0;
    std::size_t ni = 0;
    while (pi < positives.size() || ni < negatives.size()) {
        std::string content;
        for (int j = 0; j < pos_per_file && pi < positives.size(); ++j) {
            content += positives[pi++].text + "\n";
        }
        for (int j = 0; j < neg_per_file && ni < negatives.size(); ++j) {
            content += negatives[ni++].text + "\n";
        }
        chunks.push_back(std::move(content));
    }
    // A file without an annotated loop would disqualify its negatives, so
    // fold any such chunk into its predecessor.
    for (std::size_t i = chunks.size(); i-- > 1;) {
        if (chunks[i].find("#pragma omp") == std::string::npos) {
            chunks[i - 1] += chunks[i];
            chunks.erase(chunks.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }

    for (std::size_t i = 0; i < chunks.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "gen_%04zu.c", i);
        std::ofstream out(std::filesystem::path(out_dir) / name,
                          std::ios::trunc);
        if (!out) {
            throw FormatError("cannot write synthetic file in " + out_dir);
        }
        out << "/* synthetic loop corpus */\n\n" << chunks[i];
        if (!out) {
            throw FormatError("failed writing synthetic file in " + out_dir);
        }
    }
    summary.files = static_cast<int>(chunks.size());
    return summary;
}

}  // namespace ompadvisor
