#include "ompadvisor/logistic.hpp"

#include <cmath>

#include "ompadvisor/error.hpp"
#include "ompadvisor/loss.hpp"
#include "ompadvisor/rng.hpp"

namespace ompadvisor {

double LogisticModel::positive_probability(
    const Eigen::VectorXd& features) const {
    return sigmoid(weights.dot(features) + bias);
}

Eigen::VectorXd bow_featurize(const std::vector<std::string>& tokens,
                              const Vocabulary& vocab) {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(vocab.size());
    for (const auto& tok : tokens) {
        counts[vocab.id_of(tok)] += 1.0;
    }
    return counts;
}

namespace {

double dataset_loss(const LogisticModel& model, const BowDataset& data,
                    double tau, double* accuracy) {
    double loss = 0.0;
    long correct = 0;
    for (std::size_t i = 0; i < data.features.size(); ++i) {
        const double p = model.positive_probability(data.features[i]);
        loss += bce_loss(p, data.labels[i]);
        const int predicted = p > tau ? 1 : 0;
        if (predicted == data.labels[i]) ++correct;
    }
    const auto n = static_cast<double>(data.features.size());
    if (accuracy) *accuracy = n > 0 ? static_cast<double>(correct) / n : 0.0;
    return n > 0 ? loss / n : 0.0;
}

}  // namespace

LogisticTrainResult train_logistic(const BowDataset& train,
                                   const BowDataset& valid,
                                   const TrainConfig& config) {
    if (train.features.empty()) {
        throw FormatError("logistic training set is empty");
    }
    if (train.features.size() != train.labels.size() ||
        valid.features.size() != valid.labels.size()) {
        throw FormatError("features/labels length mismatch");
    }
    const auto feature_dim = train.features.front().size();

    LogisticTrainResult result;
    result.model.weights = Eigen::VectorXd::Zero(feature_dim);
    result.model.bias = 0.0;

    Rng rng(config.seed);
    std::vector<std::size_t> order(train.features.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const auto batch_size =
        static_cast<std::size_t>(std::max(1, config.batch_size));
    Eigen::VectorXd grad_w(feature_dim);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += batch_size) {
            const std::size_t stop =
                std::min(order.size(), start + batch_size);
            grad_w.setZero();
            double grad_b = 0.0;
            for (std::size_t k = start; k < stop; ++k) {
                const auto& x = train.features[order[k]];
                const int y = train.labels[order[k]];
                const double p = result.model.positive_probability(x);
                epoch_loss += bce_loss(p, y);
                // d/dz of bce(sigmoid(z), y) is p - y; the clamp region has
                // zero slope.
                const double q = clamp_probability(p);
                const double dz = (p == q) ? (p - y) : 0.0;
                grad_w.noalias() += dz * x;
                grad_b += dz;
            }
            const double inv_n = 1.0 / static_cast<double>(stop - start);
            result.model.weights.noalias() -=
                config.learning_rate * inv_n * grad_w;
            result.model.bias -= config.learning_rate * inv_n * grad_b;
        }
        epoch_loss /= static_cast<double>(order.size());
        if (!std::isfinite(epoch_loss)) {
            throw NumericError("logistic training loss became non-finite at epoch " +
                               std::to_string(epoch));
        }
        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = epoch_loss;
        stats.valid_loss = dataset_loss(result.model, valid, config.threshold,
                                        &stats.valid_accuracy);
        result.curves.push_back(stats);
    }
    return result;
}

double logistic_grad_check(const LogisticModel& model,
                           const Eigen::VectorXd& features, int label,
                           int min_samples, std::uint64_t seed,
                           double corruption) {
    LogisticModel probe = model;
    const double h = 1e-5;
    Rng rng(seed);

    const double p = probe.positive_probability(features);
    const double q = clamp_probability(p);
    const double dz = (p == q) ? (p - label) : 0.0;

    double max_rel = 0.0;
    auto compare = [&](double analytic, double numeric) {
        const double denom =
            std::max({1e-6, std::abs(analytic), std::abs(numeric)});
        max_rel = std::max(max_rel, std::abs(analytic - numeric) / denom);
    };

    const auto dim = static_cast<std::uint64_t>(probe.weights.size());
    for (int s = 0; s < min_samples; ++s) {
        const auto i = static_cast<Eigen::Index>(rng.below(dim));
        double analytic = dz * features[i];
        analytic += corruption * (std::abs(analytic) + 1.0);
        const double saved = probe.weights[i];
        probe.weights[i] = saved + h;
        const double up = bce_loss(probe.positive_probability(features), label);
        probe.weights[i] = saved - h;
        const double down =
            bce_loss(probe.positive_probability(features), label);
        probe.weights[i] = saved;
        compare(analytic, (up - down) / (2.0 * h));
    }

    double analytic_b = dz + corruption * (std::abs(dz) + 1.0);
    const double saved = probe.bias;
    probe.bias = saved + h;
    const double up = bce_loss(probe.positive_probability(features), label);
    probe.bias = saved - h;
    const double down = bce_loss(probe.positive_probability(features), label);
    probe.bias = saved;
    compare(analytic_b, (up - down) / (2.0 * h));

    return max_rel;
}

}  // namespace ompadvisor
