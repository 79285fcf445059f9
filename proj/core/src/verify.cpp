#include "lse/verify.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lse/metrics.hpp"
#include "lse/stopping.hpp"

namespace lse {

namespace {

AccuracyEstimate summarize(std::size_t hits, std::size_t n) {
    const double est = static_cast<double>(hits) / static_cast<double>(n);
    return {est, std::sqrt(est * (1.0 - est) / static_cast<double>(n))};
}

void require_paths(std::size_t n_paths) {
    if (n_paths < 100) throw std::invalid_argument("verification needs at least 100 sample paths");
}

}  // namespace

AccuracyEstimate empirical_eps_accuracy_prob(const gp::JointPosterior& jp, const ClassificationTriplet& triplet,
                                             double theta, double eps, std::size_t n_paths, std::uint64_t seed) {
    require_paths(n_paths);
    if (triplet.size() != jp.size()) throw std::invalid_argument("triplet does not cover the candidate set");
    const Eigen::MatrixXd paths = gp::sample_paths(jp, n_paths, seed);
    std::vector<double> row(jp.size());
    std::size_t hits = 0;
    for (Eigen::Index s = 0; s < paths.rows(); ++s) {
        Eigen::VectorXd::Map(row.data(), paths.cols()) = paths.row(s).transpose();
        if (eps_accuracy(triplet, row, theta, eps)) ++hits;
    }
    return summarize(hits, n_paths);
}

AccuracyEstimate empirical_indicator_prob(const gp::JointPosterior& jp, std::span<const TriProbability> tps,
                                          double theta, double eps, std::size_t n_paths, std::uint64_t seed,
                                          bool midpoint_tweak) {
    require_paths(n_paths);
    if (tps.size() != jp.size()) throw std::invalid_argument("one TriProbability per candidate required");
    std::vector<GammaEta> ge(tps.size());
    for (std::size_t i = 0; i < tps.size(); ++i) ge[i] = gamma_eta(tps[i], midpoint_tweak);

    const Eigen::MatrixXd paths = gp::sample_paths(jp, n_paths, seed);
    std::size_t hits = 0;
    for (Eigen::Index s = 0; s < paths.rows(); ++s) {
        bool ok = true;
        for (std::size_t i = 0; i < tps.size() && ok; ++i) {
            const double gap = paths(s, static_cast<Eigen::Index>(i)) - theta;
            const double z = gap > 0.0 ? 1.0 : 0.0;
            const int w = (gap > -0.5 * eps && gap <= 0.5 * eps) ? 1 : 0;
            const double dev = std::fabs(z - tps[i].p_h);
            ok = dev <= ge[i].gamma * (1.0 + 1e-12) && w >= ge[i].eta;
        }
        if (ok) ++hits;
    }
    return summarize(hits, n_paths);
}

double bound_gap(double estimate, std::span<const TriProbability> tps) {
    return estimate - check_proposed(tps, 0.5).bound;
}

}  // namespace lse
