#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lse/probabilities.hpp"

namespace lse {

/// Disjoint index sets partitioning the candidates. Each list is sorted ascending.
struct ClassificationTriplet {
    std::vector<std::size_t> upper;
    std::vector<std::size_t> lower;
    std::vector<std::size_t> undetermined;

    std::size_t size() const noexcept { return upper.size() + lower.size() + undetermined.size(); }
};

/// Assigns each candidate to the set with the largest of p_h, p_l, p_u; ties resolve H, then L, then U.
ClassificationTriplet classify_proposed(std::span<const TriProbability> tps);

/// Confidence-interval rule: upper iff mu - beta sigma > theta, lower iff mu + beta sigma < theta.
ClassificationTriplet classify_standard(std::span<const double> mu, std::span<const double> sigma, double theta,
                                        double beta);

/// Largest finite beta returned by eps_to_beta.
double beta_cap();

/// beta = Phi^-1(Pr(x in U)) for margin eps.
double eps_to_beta(double mu, double sigma, double theta, double eps);

/// Margin eps with Pr(x in U) = Phi(beta), found by bisection. Throws RangeError when Phi(beta)
/// rounds to 1.
double beta_to_eps(double mu, double sigma, double theta, double beta);

}  // namespace lse
