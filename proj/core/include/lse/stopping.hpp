#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "lse/classification.hpp"
#include "lse/gp.hpp"
#include "lse/probabilities.hpp"

namespace lse {

struct StoppingReport {
    double proposed_bound = 0.0;  // 1 - sum r_min
    bool proposed_stop = false;
    bool fc_stop = false;
    std::optional<double> fs_percentile;
    bool fs_stop = false;
};

struct ProposedCheck {
    bool stop = false;
    double bound = 0.0;
};

/// bound = 1 - sum_x r_min(x); stop iff bound >= delta. The bound may be negative.
ProposedCheck check_proposed(std::span<const TriProbability> tps, double delta);

/// Fully-classified rule: stop iff nothing is undetermined.
bool check_fc(const ClassificationTriplet& triplet);

struct FsOptions {
    double target_f = 0.95;
    double percentile = 95.0;  // probability (in %) of exceeding target_f
    std::size_t n_samples = 1000;
};

struct FsCheck {
    bool stop = false;
    double percentile_value = 0.0;  // the (100 - percentile)-th percentile of sampled F-scores
};

/// F-score sampling rule: each posterior path defines a truth {x : path(x) > theta}; stop iff the
/// nearest-rank (100 - percentile)-th percentile of the prediction's F-scores reaches target_f.
FsCheck check_fs(const gp::JointPosterior& jp, std::span<const std::size_t> prediction_upper, double theta,
                 const FsOptions& options, std::uint64_t seed);

/// Nearest-rank percentile (q in [0, 100]) of unsorted values.
double nearest_rank_percentile(std::span<const double> values, double q);

}  // namespace lse
