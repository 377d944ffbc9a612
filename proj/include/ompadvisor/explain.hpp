#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ompadvisor {

// Queries the model with a perturbed token sequence and returns the
// positive-class probability. The explainer never sees model internals.
using QueryFn = std::function<double(const std::vector<std::string>&)>;

struct Explanation {
    std::vector<std::string> tokens;  // the explained positions, in order
    std::vector<double> weights;      // signed influence toward the positive class
    double predicted_p = 0.0;         // unperturbed model output
    double intercept = 0.0;
    double surrogate_r2 = 0.0;  // weighted fit quality on the drawn samples
    int n_samples = 0;
};

// Token-drop local surrogate. Draws `n_samples` masks keeping each position
// with probability 0.5, queries the model on each rebuilt sequence, then
// fits a ridge-regularized (lambda = 1) weighted linear model from masks to
// probabilities. Sample weights use a Gaussian kernel on the Hamming
// distance from the all-ones mask with width sqrt(sequence length).
// Deterministic for a fixed seed. Throws FormatError when the sequence has
// fewer than 2 tokens or n_samples < 50, NumericError when the fit degenerates.
Explanation explain_tokens(const std::vector<std::string>& tokens,
                           const QueryFn& query, int n_samples,
                           std::uint64_t seed);

struct ExplanationRow {
    std::size_t position = 0;
    std::string token;
    double weight = 0.0;
    long begin = -1;  // character span in the original snippet, -1 when
    long end = -1;    // the representation has no source position
};

// Rows ranked by |weight| descending, ties going to the earlier position;
// top_k clamps to the number of positions. `spans` aligns by position and
// may be empty.
std::vector<ExplanationRow> top_influences(
    const Explanation& explanation, int top_k,
    const std::vector<std::pair<std::size_t, std::size_t>>& spans = {});

std::string render_explanation(
    const Explanation& explanation, int top_k,
    const std::vector<std::pair<std::size_t, std::size_t>>& spans = {});

// Character spans of the lexed tokens of a snippet, aligned with the text
// and renamed-text representations.
std::vector<std::pair<std::size_t, std::size_t>> text_token_spans(
    const std::string& code);

}  // namespace ompadvisor
