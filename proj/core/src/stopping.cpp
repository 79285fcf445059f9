#include "lse/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lse/metrics.hpp"

namespace lse {

ProposedCheck check_proposed(std::span<const TriProbability> tps, double delta) {
    double total = 0.0;
    for (const auto& tp : tps) total += tp.r_min();
    const double bound = 1.0 - total;
    return {bound >= delta, bound};
}

bool check_fc(const ClassificationTriplet& triplet) { return triplet.undetermined.empty(); }

double nearest_rank_percentile(std::span<const double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(q / 100.0 * n)));
    return sorted[std::min(rank, sorted.size()) - 1];
}

FsCheck check_fs(const gp::JointPosterior& jp, std::span<const std::size_t> prediction_upper, double theta,
                 const FsOptions& options, std::uint64_t seed) {
    if (options.n_samples < 100) throw std::invalid_argument("check_fs needs at least 100 samples");
    const std::size_t n = jp.size();
    const Eigen::MatrixXd paths = gp::sample_paths(jp, options.n_samples, seed);

    std::vector<double> scores(options.n_samples);
    std::vector<std::size_t> truth;
    truth.reserve(n);
    for (std::size_t s = 0; s < options.n_samples; ++s) {
        truth.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (paths(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) > theta) truth.push_back(i);
        scores[s] = f_score(prediction_upper, truth, n);
    }
    const double value = nearest_rank_percentile(scores, 100.0 - options.percentile);
    return {value >= options.target_f, value};
}

}  // namespace lse
