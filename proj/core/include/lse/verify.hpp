#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "lse/classification.hpp"
#include "lse/gp.hpp"
#include "lse/probabilities.hpp"

namespace lse {

struct AccuracyEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Monte-Carlo probability that the triplet is eps-accurate when the truth is a posterior path.
AccuracyEstimate empirical_eps_accuracy_prob(const gp::JointPosterior& jp, const ClassificationTriplet& triplet,
                                             double theta, double eps, std::size_t n_paths, std::uint64_t seed);

/// Same probability through the indicator form: every candidate needs |z - E z| <= gamma and
/// w >= eta, with z = 1{f > theta} and w = 1{f - theta in the margin}. Compares with a relative
/// slack of 1e-12; `midpoint_tweak` selects the alternative gamma.
AccuracyEstimate empirical_indicator_prob(const gp::JointPosterior& jp, std::span<const TriProbability> tps,
                                          double theta, double eps, std::size_t n_paths, std::uint64_t seed,
                                          bool midpoint_tweak);

/// estimate - (1 - sum r_min).
double bound_gap(double estimate, std::span<const TriProbability> tps);

}  // namespace lse
