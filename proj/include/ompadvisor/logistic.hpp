#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ompadvisor/train_config.hpp"
#include "ompadvisor/vocab.hpp"

namespace ompadvisor {

// Bag-of-words + logistic regression baseline.
struct LogisticModel {
    Eigen::VectorXd weights;  // one per vocabulary id
    double bias = 0.0;

    double positive_probability(const Eigen::VectorXd& features) const;
};

// Token occurrence counts over the vocabulary. Out-of-vocabulary tokens all
// accumulate on the UNK index, so sequence order and structure are invisible
// to this featurization by construction.
Eigen::VectorXd bow_featurize(const std::vector<std::string>& tokens,
                              const Vocabulary& vocab);

struct BowDataset {
    std::vector<Eigen::VectorXd> features;
    std::vector<int> labels;
};

struct LogisticTrainResult {
    LogisticModel model;
    std::vector<EpochStats> curves;
};

// Mini-batch gradient descent on mean binary cross-entropy. Deterministic
// for a fixed config.seed. Throws NumericError when the loss goes
// non-finite.
LogisticTrainResult train_logistic(const BowDataset& train,
                                   const BowDataset& valid,
                                   const TrainConfig& config);

// Analytic gradient vs central finite differences (step 1e-5) on at least
// `min_samples` weight entries plus the bias; returns the max relative
// error. `corruption` skews the analytic side for negative-control tests.
double logistic_grad_check(const LogisticModel& model,
                           const Eigen::VectorXd& features, int label,
                           int min_samples, std::uint64_t seed,
                           double corruption = 0.0);

}  // namespace ompadvisor
