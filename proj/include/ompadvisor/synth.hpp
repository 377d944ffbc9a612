#pragma once

#include <cstdint>
#include <string>

namespace ompadvisor {

// Generator for a labeled synthetic tree of C files. Positive loops carry a
// `#pragma omp parallel for` (some with private/reduction/schedule clauses)
// and have independent iterations; negative loops either perform I/O or have
// a loop-carried subscript dependence. Half of the instances come in
// pos/neg twin pairs whose token multisets are identical, so order-blind
// features cannot separate them while sequence models can.
//
// With `naming_signal`, the twin pairs are replaced by structurally
// identical loops whose class is revealed only by which identifier-name
// pool they draw from; renaming identifiers destroys exactly that signal.
struct SynthOptions {
    int loops = 2000;
    std::uint64_t seed = 0;
    bool naming_signal = false;
    int loops_per_file = 8;
};

struct SynthSummary {
    int files = 0;
    int loops = 0;
    int positives = 0;
    int negatives = 0;
};

// Writes `gen_NNNN.c` files under out_dir (created if needed). Every file
// contains at least one annotated loop so pragma-free loops in it qualify
// as negatives. Deterministic for a fixed seed.
SynthSummary generate_synthetic_tree(const std::string& out_dir,
                                     const SynthOptions& options);

}  // namespace ompadvisor
