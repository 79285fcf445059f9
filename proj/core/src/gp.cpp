#include "lse/gp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "lse/errors.hpp"

namespace lse::gp {

Dataset::Dataset(std::vector<InputPoint> points, std::vector<double> outputs)
    : points_(std::move(points)), outputs_(std::move(outputs)) {
    if (points_.size() != outputs_.size())
        throw std::invalid_argument("Dataset: points and outputs differ in length");
    for (double y : outputs_)
        if (!std::isfinite(y)) throw std::invalid_argument("Dataset: non-finite output");
}

void Dataset::add(InputPoint x, double y) {
    if (!std::isfinite(y)) throw std::invalid_argument("Dataset: non-finite output");
    points_.push_back(std::move(x));
    outputs_.push_back(y);
}

void KernelHyperparams::validate() const {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be positive");
    if (!(ell > 0.0) || !std::isfinite(ell)) throw std::invalid_argument("ell must be positive");
    if (!(lambda >= kLambdaMin && lambda <= kLambdaMax))
        throw std::invalid_argument("lambda must lie in [1e-6, 1e6]");
}

double KernelHyperparams::kernel(const InputPoint& a, const InputPoint& b) const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        const double d = a.coords[i] - b.coords[i];
        d2 += d * d;
    }
    return rho * std::exp(-0.5 * d2 / (ell * ell));
}

double GammaPrior::log_density(double x) const {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    return (shape - 1.0) * std::log(x) - x / scale - shape * std::log(scale) - std::lgamma(shape);
}

namespace {

Eigen::MatrixXd to_matrix(std::span<const InputPoint> pts) {
    const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
    const Eigen::Index d = n == 0 ? 0 : static_cast<Eigen::Index>(pts.front().dim());
    Eigen::MatrixXd out(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(pts[i].dim()) != d)
            throw std::invalid_argument("inconsistent input dimension");
        for (Eigen::Index j = 0; j < d; ++j) out(i, j) = pts[i].coords[j];
    }
    return out;
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd d2(a.rows(), b.rows());
    for (Eigen::Index j = 0; j < b.rows(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) d2(i, j) = (a.row(i) - b.row(j)).squaredNorm();
    return d2;
}

Eigen::MatrixXd gaussian_gram(const Eigen::MatrixXd& sqdist, const KernelHyperparams& hp) {
    const double scale = -0.5 / (hp.ell * hp.ell);
    return (sqdist.array() * scale).exp().matrix() * hp.rho;
}

// Replicated inputs collapse to one row carrying the count, the replicate mean and the
// within-replicate sum of squares. The posterior depends on the data only through these.
struct Aggregated {
    Eigen::MatrixXd points;
    Eigen::VectorXd counts;
    Eigen::VectorXd mean_y;
    Eigen::VectorXd scatter;
    Eigen::MatrixXd sqdist;
    std::size_t n_obs = 0;
};

Aggregated aggregate(const Dataset& data) {
    std::map<std::vector<double>, std::size_t> index;
    std::vector<const InputPoint*> unique;
    std::vector<std::vector<double>> groups;
    for (std::size_t n = 0; n < data.size(); ++n) {
        const auto& x = data.points()[n];
        auto [it, inserted] = index.try_emplace(x.coords, unique.size());
        if (inserted) {
            unique.push_back(&x);
            groups.emplace_back();
        }
        groups[it->second].push_back(data.outputs()[n]);
    }

    Aggregated agg;
    agg.n_obs = data.size();
    const Eigen::Index m = static_cast<Eigen::Index>(unique.size());
    const Eigen::Index d = m == 0 ? 0 : static_cast<Eigen::Index>(unique.front()->dim());
    agg.points.resize(m, d);
    agg.counts.resize(m);
    agg.mean_y.resize(m);
    agg.scatter.resize(m);
    for (Eigen::Index g = 0; g < m; ++g) {
        if (static_cast<Eigen::Index>(unique[g]->dim()) != d)
            throw std::invalid_argument("inconsistent input dimension");
        for (Eigen::Index j = 0; j < d; ++j) agg.points(g, j) = unique[g]->coords[j];
        const auto& ys = groups[g];
        double mean = 0.0;
        for (double y : ys) mean += y;
        mean /= static_cast<double>(ys.size());
        double ss = 0.0;
        for (double y : ys) ss += (y - mean) * (y - mean);
        agg.counts(g) = static_cast<double>(ys.size());
        agg.mean_y(g) = mean;
        agg.scatter(g) = ss;
    }
    agg.sqdist = squared_distances(agg.points, agg.points);
    return agg;
}

struct Factor {
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd alpha;     // Ktilde^-1 (ybar - m)
    Eigen::VectorXd residual;  // ybar - m
};

// Ktilde = K + lambda^-1 diag(1/count), the covariance of the replicate means.
Factor factorize(const Aggregated& agg, const KernelHyperparams& hp, double mean) {
    Eigen::MatrixXd ktilde = gaussian_gram(agg.sqdist, hp);
    ktilde.diagonal().array() += agg.counts.array().inverse() / hp.lambda;

    Factor f;
    f.llt.compute(ktilde);
    if (f.llt.info() != Eigen::Success) {
        const double mean_diag = ktilde.diagonal().mean();
        bool ok = false;
        for (double rel : {1e-9, 1e-6, 1e-3}) {
            Eigen::MatrixXd jittered = ktilde;
            jittered.diagonal().array() += rel * mean_diag;
            f.llt.compute(jittered);
            if (f.llt.info() == Eigen::Success) {
                ok = true;
                break;
            }
        }
        if (!ok)
            throw NumericalError("GP covariance is numerically singular for a dataset of " +
                                 std::to_string(agg.n_obs) + " observations");
    }
    f.residual = agg.mean_y.array() - mean;
    f.alpha = f.llt.solve(f.residual);
    return f;
}

double data_log_likelihood(const Aggregated& agg, const Factor& f, double lambda) {
    const double log2pi = std::log(2.0 * std::numbers::pi);
    const auto& l = f.llt.matrixLLT();
    double logdet_half = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) logdet_half += std::log(l(i, i));
    const double m = static_cast<double>(agg.mean_y.size());
    double value = -0.5 * f.residual.dot(f.alpha) - logdet_half - 0.5 * m * log2pi;

    // Replicate correction: density of the individual outputs given their mean.
    for (Eigen::Index g = 0; g < agg.counts.size(); ++g) {
        const double n = agg.counts(g);
        if (n <= 1.0) continue;
        value += -0.5 * (n - 1.0) * (log2pi - std::log(lambda)) - 0.5 * std::log(n) -
                 0.5 * lambda * agg.scatter(g);
    }
    return value;
}

double log_prior(const KernelHyperparams& hp, const std::optional<PriorSet>& priors) {
    if (!priors) return 0.0;
    return priors->rho.log_density(hp.rho) + priors->ell.log_density(hp.ell);
}

}  // namespace

PosteriorSummary posterior(const Dataset& data, const KernelHyperparams& hp, MeanFunction mean,
                           std::span<const InputPoint> candidates) {
    hp.validate();
    PosteriorSummary out;
    out.mu.assign(candidates.size(), mean.value);
    out.sigma.assign(candidates.size(), std::sqrt(hp.rho));
    if (data.empty() || candidates.empty()) return out;

    const Aggregated agg = aggregate(data);
    const Factor f = factorize(agg, hp, mean.value);
    const Eigen::MatrixXd cand = to_matrix(candidates);
    const Eigen::MatrixXd cross = gaussian_gram(squared_distances(agg.points, cand), hp);
    const Eigen::VectorXd mu = (cross.transpose() * f.alpha).array() + mean.value;
    const Eigen::MatrixXd v = f.llt.matrixL().solve(cross);
    const Eigen::VectorXd reduction = v.colwise().squaredNorm();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        out.mu[i] = mu(e);
        out.sigma[i] = std::sqrt(std::max(0.0, hp.rho - reduction(e)));
    }
    return out;
}

JointPosterior joint_posterior(const Dataset& data, const KernelHyperparams& hp, MeanFunction mean,
                               std::span<const InputPoint> candidates) {
    hp.validate();
    const Eigen::MatrixXd cand = to_matrix(candidates);
    JointPosterior jp;
    jp.covariance = gaussian_gram(squared_distances(cand, cand), hp);
    jp.mean = Eigen::VectorXd::Constant(cand.rows(), mean.value);
    if (data.empty() || candidates.empty()) return jp;

    const Aggregated agg = aggregate(data);
    const Factor f = factorize(agg, hp, mean.value);
    const Eigen::MatrixXd cross = gaussian_gram(squared_distances(agg.points, cand), hp);
    jp.mean.array() += (cross.transpose() * f.alpha).array();
    const Eigen::MatrixXd v = f.llt.matrixL().solve(cross);
    jp.covariance.noalias() -= v.transpose() * v;
    // Symmetrize and clamp roundoff on the diagonal so it matches posterior().
    jp.covariance = 0.5 * (jp.covariance + jp.covariance.transpose()).eval();
    for (Eigen::Index i = 0; i < jp.covariance.rows(); ++i)
        jp.covariance(i, i) = std::max(0.0, jp.covariance(i, i));
    return jp;
}

Eigen::MatrixXd sampling_factor(const Eigen::MatrixXd& covariance) {
    const Eigen::Index n = covariance.rows();
    const double mean_diag = n == 0 ? 0.0 : covariance.diagonal().mean();
    if (n == 0 || mean_diag <= 0.0) return Eigen::MatrixXd::Zero(n, n);

    Eigen::MatrixXd jittered = covariance;
    jittered.diagonal().array() += 1e-9 * mean_diag;
    Eigen::LLT<Eigen::MatrixXd> llt(jittered);
    if (llt.info() == Eigen::Success) return llt.matrixL();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
    if (eig.info() != Eigen::Success)
        throw NumericalError("posterior covariance could not be factored for sampling");
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal();
}

Eigen::MatrixXd sample_paths(const JointPosterior& jp, std::size_t n_paths, std::uint64_t seed) {
    if (n_paths == 0) throw std::invalid_argument("sample_paths: n_paths must be positive");
    const Eigen::Index m = static_cast<Eigen::Index>(jp.size());
    const Eigen::MatrixXd factor = sampling_factor(jp.covariance);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n_paths), m);
    for (Eigen::Index r = 0; r < z.rows(); ++r)
        for (Eigen::Index c = 0; c < m; ++c) z(r, c) = normal(rng);

    Eigen::MatrixXd paths = z * factor.transpose();
    paths.rowwise() += jp.mean.transpose();
    return paths;
}

double log_marginal_likelihood(const Dataset& data, const KernelHyperparams& hp, MeanFunction mean,
                               const std::optional<PriorSet>& priors) {
    if (data.empty()) throw std::invalid_argument("log_marginal_likelihood: empty dataset");
    hp.validate();
    const Aggregated agg = aggregate(data);
    const Factor f = factorize(agg, hp, mean.value);
    return data_log_likelihood(agg, f, hp.lambda) + log_prior(hp, priors);
}

namespace {

using Vec3 = Eigen::Vector3d;

struct LogBox {
    Vec3 lo;
    Vec3 hi;

    Vec3 clamp(const Vec3& v) const { return v.cwiseMax(lo).cwiseMin(hi); }
};

KernelHyperparams from_log(const Vec3& v) {
    return {std::exp(v(0)), std::exp(v(1)), std::exp(v(2))};
}

}  // namespace

FitResult fit_hyperparameters(const Dataset& data, const KernelHyperparams& init, MeanFunction mean,
                              const FitOptions& options) {
    init.validate();
    FitResult result{init, -std::numeric_limits<double>::infinity(), false, 0};
    if (data.size() < 2) return result;

    const auto& b = options.bounds;
    const LogBox box{Vec3(std::log(b.rho_min), std::log(b.ell_min), std::log(b.lambda_min)),
                     Vec3(std::log(b.rho_max), std::log(b.ell_max), std::log(b.lambda_max))};
    const Aggregated agg = aggregate(data);

    // Negated objective for minimization; failures map to +inf.
    auto cost = [&](const Vec3& v) {
        ++result.evaluations;
        try {
            const KernelHyperparams hp = from_log(v);
            const Factor f = factorize(agg, hp, mean.value);
            const double value = data_log_likelihood(agg, f, hp.lambda) + log_prior(hp, options.priors);
            return std::isfinite(value) ? -value : std::numeric_limits<double>::infinity();
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    const Vec3 start0 =
        box.clamp(Vec3(std::log(init.rho), std::log(init.ell), std::log(init.lambda)));
    const double init_cost = cost(start0);

    Vec3 best = start0;
    double best_cost = init_cost;
    bool improved = false;

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> perturb(0.0, 1.0);
    constexpr double kStep = 0.5;

    for (int start = 0; start < std::max(1, options.restarts); ++start) {
        Vec3 x0 = start0;
        if (start > 0) {
            for (int k = 0; k < 3; ++k) x0(k) += perturb(rng);
            x0 = box.clamp(x0);
        }

        std::array<Vec3, 4> simplex;
        std::array<double, 4> costs;
        simplex[0] = x0;
        costs[0] = start == 0 ? init_cost : cost(x0);
        for (int k = 0; k < 3; ++k) {
            Vec3 v = x0;
            // Step inward when the start sits on the upper bound.
            v(k) += (v(k) + kStep <= box.hi(k)) ? kStep : -kStep;
            simplex[k + 1] = box.clamp(v);
            costs[k + 1] = cost(simplex[k + 1]);
        }

        std::array<int, 4> order{0, 1, 2, 3};
        for (int iter = 0; iter < options.max_iterations; ++iter) {
            std::sort(order.begin(), order.end(), [&](int a, int c) { return costs[a] < costs[c]; });
            const int lo = order[0];
            const int hi = order[3];
            const int second = order[2];
            if (std::isfinite(costs[hi]) &&
                costs[hi] - costs[lo] <= options.tolerance * (1.0 + std::fabs(costs[lo])))
                break;

            Vec3 centroid = Vec3::Zero();
            for (int k = 0; k < 3; ++k) centroid += simplex[order[k]];
            centroid /= 3.0;

            const Vec3 reflected = box.clamp(centroid + (centroid - simplex[hi]));
            const double fr = cost(reflected);
            if (fr < costs[lo]) {
                const Vec3 expanded = box.clamp(centroid + 2.0 * (centroid - simplex[hi]));
                const double fe = cost(expanded);
                if (fe < fr) {
                    simplex[hi] = expanded;
                    costs[hi] = fe;
                } else {
                    simplex[hi] = reflected;
                    costs[hi] = fr;
                }
                continue;
            }
            if (fr < costs[second]) {
                simplex[hi] = reflected;
                costs[hi] = fr;
                continue;
            }
            const bool outside = fr < costs[hi];
            const Vec3 contracted = outside ? Vec3(centroid + 0.5 * (reflected - centroid))
                                            : Vec3(centroid + 0.5 * (simplex[hi] - centroid));
            const double fc = cost(contracted);
            if (fc < (outside ? fr : costs[hi])) {
                simplex[hi] = contracted;
                costs[hi] = fc;
                continue;
            }
            for (int k = 1; k < 4; ++k) {
                const int idx = order[k];
                simplex[idx] = simplex[lo] + 0.5 * (simplex[idx] - simplex[lo]);
                costs[idx] = cost(simplex[idx]);
            }
        }

        for (int k = 0; k < 4; ++k) {
            if (costs[k] < best_cost) {
                best_cost = costs[k];
                best = simplex[k];
                improved = true;
            }
        }
    }

    if (!std::isfinite(best_cost)) {
        result.warning = true;
        return result;
    }
    if (improved) {
        result.hp = from_log(best);
    } else {
        result.hp.rho = std::clamp(init.rho, b.rho_min, b.rho_max);
        result.hp.ell = std::clamp(init.ell, b.ell_min, b.ell_max);
    }
    result.hp.lambda = std::clamp(result.hp.lambda, b.lambda_min, b.lambda_max);
    result.objective = -best_cost;
    return result;
}

}  // namespace lse::gp
