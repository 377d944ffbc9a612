#include "ompadvisor/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "ompadvisor/error.hpp"
#include "ompadvisor/lexer.hpp"
#include "ompadvisor/rng.hpp"

namespace ompadvisor {

namespace {

constexpr double kRidgeLambda = 1.0;

}  // namespace

Explanation explain_tokens(const std::vector<std::string>& tokens,
                           const QueryFn& query, int n_samples,
                           std::uint64_t seed) {
    const auto length = static_cast<int>(tokens.size());
    if (length < 2) {
        throw FormatError(
            "explanations need at least 2 tokens, got " +
            std::to_string(length));
    }
    if (n_samples < 50) {
        throw FormatError("explanations need at least 50 samples, got " +
                          std::to_string(n_samples));
    }

    Explanation result;
    result.tokens = tokens;
    result.n_samples = n_samples;
    result.predicted_p = query(tokens);

    const double kernel_width = std::sqrt(static_cast<double>(length));
    Rng rng(seed);

    Eigen::MatrixXd masks(n_samples, length);
    Eigen::VectorXd probs(n_samples);
    Eigen::VectorXd sample_weight(n_samples);
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (int s = 0; s < n_samples; ++s) {
        kept.clear();
        int dropped = 0;
        for (int i = 0; i < length; ++i) {
            const bool keep = rng.bernoulli(0.5);
            masks(s, i) = keep ? 1.0 : 0.0;
            if (keep) {
                kept.push_back(tokens[static_cast<std::size_t>(i)]);
            } else {
                ++dropped;
            }
        }
        probs(s) = query(kept);
        const double d = static_cast<double>(dropped);
        sample_weight(s) =
            std::exp(-(d * d) / (2.0 * kernel_width * kernel_width));
    }

    // Weighted ridge with an unpenalized intercept column.
    Eigen::MatrixXd design(n_samples, length + 1);
    design.leftCols(length) = masks;
    design.col(length).setOnes();
    const Eigen::MatrixXd weighted = sample_weight.asDiagonal() * design;
    Eigen::MatrixXd normal = design.transpose() * weighted;
    for (int i = 0; i < length; ++i) {
        normal(i, i) += kRidgeLambda;
    }
    const Eigen::VectorXd rhs = design.transpose() *
                                (sample_weight.asDiagonal() * probs);
    const Eigen::VectorXd beta = normal.ldlt().solve(rhs);
    if (!beta.allFinite()) {
        throw NumericError("explanation surrogate fit produced non-finite "
                           "coefficients");
    }

    result.weights.assign(beta.data(), beta.data() + length);
    result.intercept = beta(length);

    const Eigen::VectorXd fitted = design * beta;
    const double w_sum = sample_weight.sum();
    const double y_mean = sample_weight.dot(probs) / w_sum;
    const double ss_res =
        (sample_weight.array() * (probs - fitted).array().square()).sum();
    const double ss_tot =
        (sample_weight.array() * (probs.array() - y_mean).square()).sum();
    result.surrogate_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return result;
}

std::vector<ExplanationRow> top_influences(
    const Explanation& explanation, int top_k,
    const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
    std::vector<std::size_t> order(explanation.weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         const double wa = std::abs(explanation.weights[a]);
                         const double wb = std::abs(explanation.weights[b]);
                         if (wa != wb) return wa > wb;
                         return a < b;
                     });
    const std::size_t take =
        std::min<std::size_t>(order.size(),
                              top_k < 0 ? 0 : static_cast<std::size_t>(top_k));
    std::vector<ExplanationRow> rows;
    rows.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t pos = order[i];
        ExplanationRow row;
        row.position = pos;
        row.token = explanation.tokens[pos];
        row.weight = explanation.weights[pos];
        if (pos < spans.size()) {
            row.begin = static_cast<long>(spans[pos].first);
            row.end = static_cast<long>(spans[pos].second);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_explanation(
    const Explanation& explanation, int top_k,
    const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "p(positive) = %.4f over %d samples\n",
                  explanation.predicted_p, explanation.n_samples);
    out << line;
    out << "rank  weight     token  [span]\n";
    int rank = 0;
    for (const ExplanationRow& row : top_influences(explanation, top_k, spans)) {
        ++rank;
        std::snprintf(line, sizeof(line), "%4d  %+9.5f  %s", rank, row.weight,
                      row.token.c_str());
        out << line;
        if (row.begin >= 0) {
            std::snprintf(line, sizeof(line), "  [%ld,%ld)", row.begin,
                          row.end);
            out << line;
        }
        out << "\n";
    }
    return out.str();
}

std::vector<std::pair<std::size_t, std::size_t>> text_token_spans(
    const std::string& code) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (const Token& token : lex(code)) {
        spans.emplace_back(token.begin, token.end);
    }
    return spans;
}

}  // namespace ompadvisor
