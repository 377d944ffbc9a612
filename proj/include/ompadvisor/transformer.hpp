#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ompadvisor/train_config.hpp"
#include "ompadvisor/vocab.hpp"

namespace ompadvisor {

// One post-norm encoder block: self-attention + residual + layer norm, then
// a position-wise feed-forward + residual + layer norm. Biases are kept as
// 1xN matrices so every parameter lives in the same tensor registry.
struct EncoderLayer {
    Eigen::MatrixXd wq, wk, wv, wo;  // D x D
    Eigen::MatrixXd bq, bk, bv, bo;  // 1 x D
    Eigen::MatrixXd ln1_gain, ln1_bias;
    Eigen::MatrixXd w1, b1;  // D x F, 1 x F
    Eigen::MatrixXd w2, b2;  // F x D, 1 x D
    Eigen::MatrixXd ln2_gain, ln2_bias;
};

struct TransformerClassifier {
    int vocab_size = 0;
    int max_len = 110;
    int dim = 128;
    int heads = 4;
    int ffn_dim = 512;
    int head_hidden = 128;
    double dropout = 0.1;

    Eigen::MatrixXd token_embed;  // vocab x D
    Eigen::MatrixXd pos_embed;    // max_len x D
    std::vector<EncoderLayer> layers;
    Eigen::MatrixXd head_w1, head_b1;  // D x D_h, 1 x D_h
    Eigen::MatrixXd head_w2, head_b2;  // D_h x 2, 1 x 2
};

// Fresh model with zero-mean uniform init scaled by 1/sqrt(fan_in);
// layer-norm gains 1, every bias 0. Draw order is fixed so a seed pins the
// parameters exactly. Throws FormatError when D is not divisible by H.
TransformerClassifier init_transformer(int vocab_size, const TrainConfig& cfg);

// Zero tensors in the same shapes; used as the gradient accumulator.
TransformerClassifier zeros_like(const TransformerClassifier& model);

// Stable name -> tensor enumeration shared by the optimizer, checkpoints,
// and the gradient checker.
std::vector<std::pair<std::string, Eigen::MatrixXd*>> tensor_registry(
    TransformerClassifier& model);

// How PAD positions are kept out of the result: either the computation is
// sliced to the true length, or it runs over all max_len positions with an
// additive -inf on PAD keys before the attention softmax. Both produce the
// same logits; the sliced path is the fast default.
enum class PadHandling { SliceToLength, MaskFullLength };

class Rng;
struct ForwardTrace;

// Logits for the two classes, read from the CLS position. `dropout_rng`
// non-null enables the three dropout sites (embeddings, attention
// probabilities, head input); inference passes null.
Eigen::Vector2d transformer_logits(const TransformerClassifier& model,
                                   const std::vector<int>& ids, int true_length,
                                   PadHandling pad = PadHandling::SliceToLength,
                                   ForwardTrace* trace = nullptr,
                                   Rng* dropout_rng = nullptr);

double softmax_positive(const Eigen::Vector2d& logits);

double transformer_probability(const TransformerClassifier& model,
                               const std::vector<int>& ids, int true_length);

// Accumulates d(loss)/d(params) into `grads` for one instance, given the
// trace of the corresponding forward call and d(loss)/d(logits).
void transformer_backward(const TransformerClassifier& model,
                          const ForwardTrace& trace,
                          const Eigen::Vector2d& dlogits,
                          TransformerClassifier& grads);

// d(bce)/d(logits); zero inside the probability clamp region.
Eigen::Vector2d bce_logit_gradient(const Eigen::Vector2d& logits, int label);

struct TransformerTrainResult {
    TransformerClassifier model;       // after the final epoch
    TransformerClassifier best_model;  // lowest validation loss
    int best_epoch = 0;
    std::vector<EpochStats> curves;
};

// Mini-batch training with decoupled-weight-decay Adam; single-threaded and
// deterministic for a fixed config.seed. Throws NumericError on non-finite
// loss.
TransformerTrainResult train_transformer(
    const std::vector<EncodedInstance>& train,
    const std::vector<EncodedInstance>& valid, const TrainConfig& config);

struct GradCheckResult {
    double max_rel_error = 0.0;
    int parameters_checked = 0;
};

// Central finite differences (step 1e-5) against the analytic gradient on
// at least `min_samples` parameters drawn across embeddings, attention
// projections, feed-forward weights, layer-norm gains, and the head.
// `corruption` skews the analytic side for the negative-control test.
GradCheckResult transformer_grad_check(const TransformerClassifier& model,
                                       const EncodedInstance& instance,
                                       int min_samples, std::uint64_t seed,
                                       double corruption = 0.0);

}  // namespace ompadvisor
