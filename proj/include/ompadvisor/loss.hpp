#pragma once

#include <algorithm>
#include <cmath>

namespace ompadvisor {

// Clamp applied before the logs so a saturated probability never produces
// an infinite loss.
inline constexpr double kProbEps = 1e-7;

inline double clamp_probability(double p) {
    return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

inline double bce_loss(double p, int y) {
    const double q = clamp_probability(p);
    return -(y == 1 ? std::log(q) : std::log(1.0 - q));
}

inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace ompadvisor
