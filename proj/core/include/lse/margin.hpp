#pragma once

#include <cstddef>
#include <variant>

namespace lse {

struct FixedMargin {
    double eps = 1.0;
};

/// Margin derived from a user-chosen effective replicate count per candidate.
struct AdaptiveMargin {
    int L = 5;
    double delta = 0.99;
};

using MarginPolicy = std::variant<FixedMargin, AdaptiveMargin>;

void validate(const MarginPolicy& policy);

/// Posterior standard deviation after observing one point L times under a 1-D Gaussian prior
/// with variance k_xx and noise precision lambda.
double sigma_L(double k_xx, double lambda, int L);

/// eps = 2 sigma_L Phi^-1(1 - (1 - delta) / (2 n_candidates)).
double adaptive_eps(double k_xx, double lambda, int L, double delta, std::size_t n_candidates);

/// Margin for a candidate with prior variance k_xx under the current noise precision.
double margin_eps(const MarginPolicy& policy, double k_xx, double lambda, std::size_t n_candidates);

}  // namespace lse
