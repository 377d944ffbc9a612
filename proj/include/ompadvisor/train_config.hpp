#pragma once

#include <cstdint>

namespace ompadvisor {

// Shared knobs for both model families. Transformer-only fields are ignored
// by the logistic trainer.
struct TrainConfig {
    double learning_rate = 3e-4;
    int epochs = 10;
    int batch_size = 32;
    std::uint64_t seed = 0;
    double dropout = 0.1;

    // Decoupled-weight-decay Adam.
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    double weight_decay = 0.01;

    // Model dimensions.
    int dim = 128;         // embedding / residual width D
    int heads = 4;         // attention heads H
    int layers = 4;        // encoder layers L
    int ffn_dim = 512;     // position-wise feed-forward width F
    int head_hidden = 128; // classification head hidden width
    int max_len = 110;

    double threshold = 0.5;  // decision threshold; ties resolve to label 0

    void validate() const;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double valid_loss = 0.0;
    double valid_accuracy = 0.0;
};

struct PredictionResult {
    double probability = 0.0;
    int label = 0;
};

inline PredictionResult threshold_prediction(double p, double tau) {
    return {p, p > tau ? 1 : 0};
}

}  // namespace ompadvisor
