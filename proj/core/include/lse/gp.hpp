#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lse::gp {

/// A point of the (normalized) input domain.
struct InputPoint {
    std::vector<double> coords;

    std::size_t dim() const noexcept { return coords.size(); }
    friend bool operator==(const InputPoint&, const InputPoint&) = default;
};

/// Ordered observations (x_n, y_n). Replicated inputs are allowed.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<InputPoint> points, std::vector<double> outputs);

    void add(InputPoint x, double y);

    std::size_t size() const noexcept { return outputs_.size(); }
    bool empty() const noexcept { return outputs_.empty(); }
    const std::vector<InputPoint>& points() const noexcept { return points_; }
    const std::vector<double>& outputs() const noexcept { return outputs_; }

private:
    std::vector<InputPoint> points_;
    std::vector<double> outputs_;
};

/// Gaussian kernel k(x, x') = rho * exp(-|x - x'|^2 / (2 ell^2)) plus noise precision lambda.
struct KernelHyperparams {
    double rho = 1.0;
    double ell = 1.0;
    double lambda = 1.0;

    static constexpr double kLambdaMin = 1e-6;
    static constexpr double kLambdaMax = 1e6;

    /// Throws std::invalid_argument when rho/ell are not positive or lambda leaves [1e-6, 1e6].
    void validate() const;
    double kernel(const InputPoint& a, const InputPoint& b) const;
    double prior_variance() const noexcept { return rho; }

    friend bool operator==(const KernelHyperparams&, const KernelHyperparams&) = default;
};

/// Constant prior mean m(x) = value.
struct MeanFunction {
    double value = 0.0;
};

struct PosteriorSummary {
    std::vector<double> mu;
    std::vector<double> sigma;
};

struct JointPosterior {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;

    std::size_t size() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// Marginal posterior at each candidate.
PosteriorSummary posterior(const Dataset& data, const KernelHyperparams& hp, MeanFunction mean,
                           std::span<const InputPoint> candidates);

/// Full posterior covariance over the candidate set.
JointPosterior joint_posterior(const Dataset& data, const KernelHyperparams& hp, MeanFunction mean,
                               std::span<const InputPoint> candidates);

/// Draws n_paths rows from N(mean, covariance). Deterministic given seed.
Eigen::MatrixXd sample_paths(const JointPosterior& jp, std::size_t n_paths, std::uint64_t seed);

/// Lower-triangular factor F with F F^T = covariance (+ relative 1e-9 jitter). Falls back to a
/// clamped eigendecomposition for numerically indefinite covariances; a zero matrix gives F = 0.
Eigen::MatrixXd sampling_factor(const Eigen::MatrixXd& covariance);

struct GammaPrior {
    double shape = 2.0;
    double scale = 1.0;

    double log_density(double x) const;
};

struct PriorSet {
    GammaPrior rho;
    GammaPrior ell;
};

/// log N(y | m, K + lambda^-1 I), plus the log gamma densities of rho and ell when priors are given.
/// Requires a non-empty dataset.
double log_marginal_likelihood(const Dataset& data, const KernelHyperparams& hp, MeanFunction mean,
                               const std::optional<PriorSet>& priors = std::nullopt);

struct FitBounds {
    double rho_min = 1e-8;
    double rho_max = 1e12;
    double ell_min = 1e-3;
    double ell_max = 1e2;
    double lambda_min = KernelHyperparams::kLambdaMin;
    double lambda_max = KernelHyperparams::kLambdaMax;
};

struct FitOptions {
    FitBounds bounds;
    std::optional<PriorSet> priors;
    int restarts = 5;          // total simplex starts, the first one at init
    int max_iterations = 200;  // per start
    double tolerance = 1e-6;
    std::uint64_t seed = 0;
};

struct FitResult {
    KernelHyperparams hp;
    double objective = 0.0;
    bool warning = false;  // every start failed; hp is the unchanged init
    int evaluations = 0;
};

/// Maximizes the (penalized) log marginal likelihood with a Nelder-Mead search in log-parameter
/// space. Datasets with fewer than two observations return init unchanged.
FitResult fit_hyperparameters(const Dataset& data, const KernelHyperparams& init, MeanFunction mean,
                              const FitOptions& options);

}  // namespace lse::gp
