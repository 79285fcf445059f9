#include <doctest.h>

#include <cmath>
#include <random>

#include "lse/errors.hpp"
#include "lse/gp.hpp"
#include "oracles.hpp"

using namespace lse;
using namespace lse::gp;

namespace {

KernelHyperparams random_hp(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {0.5 + 1.5 * u(rng), 0.1 + 0.9 * u(rng), std::pow(10.0, 2.0 * u(rng))};
}

}  // namespace

TEST_CASE("empty dataset gives the prior") {
    const std::vector<InputPoint> cand{{{0.1, 0.2}}, {{0.5, 0.5}}};
    const auto post = posterior({}, {1.0, 1.0, 1.0}, {0.0}, cand);
    for (std::size_t i = 0; i < cand.size(); ++i) {
        CHECK(post.mu[i] == 0.0);
        CHECK(post.sigma[i] == 1.0);
    }
    const auto jp = joint_posterior({}, {2.0, 0.5, 1.0}, {3.0}, cand);
    CHECK(jp.mean(0) == 3.0);
    CHECK(jp.covariance(0, 0) == doctest::Approx(2.0));
    CHECK(jp.covariance(0, 1) == doctest::Approx(2.0 * std::exp(-0.5 * (0.16 + 0.09) / 0.25)));
}

TEST_CASE("single observation closed form") {
    const InputPoint x{{0.3, 0.7}};
    const Dataset d({x}, {2.0});
    const std::vector<InputPoint> cand{x};
    const auto post = posterior(d, {1.0, 1.0, 1.0}, {0.0}, cand);
    CHECK(post.mu[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(post.sigma[0] * post.sigma[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("posterior and joint posterior match the dense oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = oracle::random_dataset(rng, 1 + trial % 20, 2, trial % 2 == 0);
        const auto hp = random_hp(rng);
        const auto cand = oracle::random_points(rng, 30, 2);
        const double m = 0.7;
        const auto ref = oracle::posterior(d, hp, m, cand);
        const auto post = posterior(d, hp, {m}, cand);
        const auto jp = joint_posterior(d, hp, {m}, cand);
        for (std::size_t i = 0; i < cand.size(); ++i) {
            const auto e = static_cast<Eigen::Index>(i);
            CHECK(std::fabs(post.mu[i] - ref.mean(e)) <= 1e-8 * (std::fabs(ref.mean(e)) + std::sqrt(hp.rho)));
            CHECK(std::fabs(post.sigma[i] * post.sigma[i] - ref.cov(e, e)) <= 1e-8 * hp.rho);
            CHECK(std::fabs(jp.mean(e) - post.mu[i]) <= 1e-10 * (1.0 + std::fabs(post.mu[i])));
            CHECK(std::fabs(jp.covariance(e, e) - post.sigma[i] * post.sigma[i]) <= 1e-8 * hp.rho);
            for (std::size_t j = 0; j < cand.size(); ++j)
                CHECK(std::fabs(jp.covariance(e, static_cast<Eigen::Index>(j)) - ref.cov(e, static_cast<Eigen::Index>(j))) <=
                      1e-8 * hp.rho);
        }
    }
}

TEST_CASE("log marginal likelihood matches the dense oracle, including replicates") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const auto d = oracle::random_dataset(rng, 1 + trial % 15, 2, true);
        const auto hp = random_hp(rng);
        const double ref = oracle::log_marginal_likelihood(d, hp, -0.4);
        CHECK(std::fabs(log_marginal_likelihood(d, hp, {-0.4}) - ref) <= 1e-8 * std::fabs(ref));
    }
}

TEST_CASE("log marginal likelihood closed form and priors") {
    const Dataset d({{{0.0, 0.0}}}, {0.0});
    CHECK(log_marginal_likelihood(d, {1.0, 1.0, 1.0}, {0.0}) == doctest::Approx(-0.5 * std::log(2.0 * M_PI * 2.0)));
    const PriorSet priors;
    const KernelHyperparams hp{1.7, 0.4, 3.0};
    const double with = log_marginal_likelihood(d, hp, {0.0}, priors);
    const double without = log_marginal_likelihood(d, hp, {0.0});
    CHECK(with - without ==
          doctest::Approx(oracle::log_gamma_density(1.7, 2.0, 1.0) + oracle::log_gamma_density(0.4, 2.0, 1.0)));
    CHECK(GammaPrior{3.0, 0.5}.log_density(1.2) == doctest::Approx(oracle::log_gamma_density(1.2, 3.0, 0.5)));
}

TEST_CASE("log marginal likelihood is maximized by y = m at fixed covariance") {
    const Dataset flat({{{0.1, 0.1}}, {{0.9, 0.4}}}, {2.0, 2.0});
    const Dataset bumped({{{0.1, 0.1}}, {{0.9, 0.4}}}, {2.3, 1.9});
    const KernelHyperparams hp{1.0, 0.3, 10.0};
    CHECK(log_marginal_likelihood(flat, hp, {2.0}) > log_marginal_likelihood(bumped, hp, {2.0}));
}

TEST_CASE("log marginal likelihood is permutation invariant") {
    std::mt19937_64 rng(5);
    const auto d = oracle::random_dataset(rng, 12, 2, true);
    auto pts = d.points();
    auto ys = d.outputs();
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
    std::vector<InputPoint> p2;
    std::vector<double> y2;
    for (auto i : order) {
        p2.push_back(pts[i]);
        y2.push_back(ys[i]);
    }
    const KernelHyperparams hp{1.3, 0.25, 7.0};
    CHECK(log_marginal_likelihood(Dataset(p2, y2), hp, {0.1}) ==
          doctest::Approx(log_marginal_likelihood(d, hp, {0.1})).epsilon(1e-12));
}

TEST_CASE("posterior variance does not increase as observations are added") {
    std::mt19937_64 rng(13);
    const auto cand = oracle::random_points(rng, 25, 2);
    const KernelHyperparams hp{1.0, 0.3, 20.0};
    const auto full = oracle::random_dataset(rng, 15, 2, true);
    std::vector<double> prev(cand.size(), std::sqrt(hp.rho));
    Dataset d;
    for (std::size_t n = 0; n < full.size(); ++n) {
        d.add(full.points()[n], full.outputs()[n]);
        const auto post = posterior(d, hp, {0.0}, cand);
        for (std::size_t i = 0; i < cand.size(); ++i) {
            CHECK(post.sigma[i] <= prev[i] + 1e-10);
            CHECK(post.sigma[i] <= std::sqrt(hp.rho) + 1e-8);
            prev[i] = post.sigma[i];
        }
    }
}

TEST_CASE("hyperparameter validation") {
    CHECK_THROWS_AS((KernelHyperparams{0.0, 1.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((KernelHyperparams{1.0, -1.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((KernelHyperparams{1.0, 1.0, 1e-7}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((KernelHyperparams{1.0, 1.0, 2e6}.validate()), std::invalid_argument);
    CHECK_NOTHROW((KernelHyperparams{1.0, 1.0, 1e6}.validate()));
    CHECK_THROWS_AS(log_marginal_likelihood({}, {}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Dataset({{{0.0}}}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("sample paths") {
    SUBCASE("zero covariance reproduces the mean exactly") {
        JointPosterior jp{Eigen::Vector3d(1.0, -2.0, 0.5), Eigen::Matrix3d::Zero()};
        const auto paths = sample_paths(jp, 50, 3);
        for (Eigen::Index r = 0; r < paths.rows(); ++r) CHECK(paths.row(r) == jp.mean.transpose());
    }
    SUBCASE("moments of a single standard normal") {
        JointPosterior jp{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1)};
        const auto paths = sample_paths(jp, 10000, 42);
        const double mean = paths.col(0).mean();
        const double var = (paths.col(0).array() - mean).square().sum() / 9999.0;
        CHECK(std::fabs(mean) < 0.05);
        CHECK(std::fabs(var - 1.0) < 0.05);
    }
    SUBCASE("determinism and seed sensitivity") {
        std::mt19937_64 rng(3);
        const auto d = oracle::random_dataset(rng, 6, 2, false);
        const auto jp = joint_posterior(d, {1.0, 0.3, 50.0}, {0.0}, oracle::random_points(rng, 8, 2));
        CHECK(sample_paths(jp, 100, 9) == sample_paths(jp, 100, 9));
        CHECK(sample_paths(jp, 100, 9) != sample_paths(jp, 100, 10));
    }
    SUBCASE("indefinite covariance falls back to the eigendecomposition") {
        Eigen::Matrix2d c;
        c << 1.0, 1.0 + 1e-7, 1.0 + 1e-7, 1.0;
        const auto f = sampling_factor(c);
        CHECK(((f * f.transpose()) - c).cwiseAbs().maxCoeff() < 1e-6);
    }
    CHECK_THROWS_AS(sample_paths(JointPosterior{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1)}, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("fit returns init for fewer than two observations") {
    const KernelHyperparams init{2.0, 0.5, 3.0};
    const Dataset d({{{0.5, 0.5}}}, {1.0});
    const auto fit = fit_hyperparameters(d, init, {0.0}, FitOptions{});
    CHECK(fit.hp == init);
    CHECK_FALSE(fit.warning);
}

TEST_CASE("fit improves on init and reaches the generating parameters' likelihood") {
    // 50 grid points drawn from a GP with rho=1, ell=0.3, lambda=100.
    std::vector<InputPoint> pts;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 5; ++j) pts.push_back({{i / 9.0, j / 4.0}});
    const KernelHyperparams truth{1.0, 0.3, 100.0};
    JointPosterior prior = joint_posterior({}, truth, {0.0}, pts);
    prior.covariance.diagonal().array() += 1.0 / truth.lambda;
    const Eigen::MatrixXd draw = sample_paths(prior, 1, 2024);
    std::vector<double> ys(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) ys[i] = draw(0, static_cast<Eigen::Index>(i));
    const Dataset d(pts, ys);

    const KernelHyperparams init{0.2, 1.5, 1.0};
    FitOptions options;
    options.seed = 17;
    const auto fit = fit_hyperparameters(d, init, {0.0}, options);
    const double at_fit = log_marginal_likelihood(d, fit.hp, {0.0});
    CHECK(at_fit >= log_marginal_likelihood(d, init, {0.0}));
    CHECK(at_fit >= log_marginal_likelihood(d, truth, {0.0}) - 1e-6);
    CHECK(fit.objective == doctest::Approx(at_fit).epsilon(1e-12));
    CHECK(fit.hp.lambda >= KernelHyperparams::kLambdaMin);
    CHECK(fit.hp.lambda <= KernelHyperparams::kLambdaMax);
}

TEST_CASE("fit never returns a worse objective than init") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = oracle::random_dataset(rng, 2 + trial % 10, 2, true);
        const auto init = random_hp(rng);
        FitOptions options;
        options.priors = PriorSet{};
        options.seed = static_cast<std::uint64_t>(trial);
        const auto fit = fit_hyperparameters(d, init, {0.0}, options);
        CHECK(log_marginal_likelihood(d, fit.hp, {0.0}, options.priors) >=
              log_marginal_likelihood(d, init, {0.0}, options.priors));
    }
}

TEST_CASE("fit is deterministic given seed") {
    std::mt19937_64 rng(4);
    const auto d = oracle::random_dataset(rng, 10, 2, false);
    FitOptions options;
    options.seed = 5;
    const auto a = fit_hyperparameters(d, {1.0, 0.5, 1.0}, {0.0}, options);
    const auto b = fit_hyperparameters(d, {1.0, 0.5, 1.0}, {0.0}, options);
    CHECK(a.hp == b.hp);
}
