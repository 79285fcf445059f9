#include <random>

#include <benchmark/benchmark.h>

#include "lse/bench.hpp"
#include "lse/gp.hpp"
#include "lse/probabilities.hpp"
#include "lse/stopping.hpp"

using namespace lse;

namespace {

struct Problem {
    gp::Dataset data;
    std::vector<gp::InputPoint> candidates;
};

Problem make_problem(int n_obs, int resolution) {
    auto spec = bench::default_spec(bench::Function::Branin);
    spec.resolution = resolution;
    Problem p;
    p.candidates = bench::normalize(spec, bench::make_grid(spec));
    const auto grid = bench::make_grid(spec);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
    for (int i = 0; i < n_obs; ++i) {
        const auto k = pick(rng);
        p.data.add(p.candidates[k], bench::observe(spec, grid[k], rng));
    }
    return p;
}

const gp::KernelHyperparams kHp{2000.0, 0.2, 0.0025};

void BM_Posterior(benchmark::State& state) {
    const auto p = make_problem(static_cast<int>(state.range(0)), 20);
    for (auto _ : state) benchmark::DoNotOptimize(gp::posterior(p.data, kHp, {100.0}, p.candidates));
}
BENCHMARK(BM_Posterior)->Arg(10)->Arg(50)->Arg(200);

void BM_JointPosterior(benchmark::State& state) {
    const auto p = make_problem(50, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gp::joint_posterior(p.data, kHp, {100.0}, p.candidates));
}
BENCHMARK(BM_JointPosterior)->Arg(10)->Arg(20);

void BM_LogMarginalLikelihood(benchmark::State& state) {
    const auto p = make_problem(static_cast<int>(state.range(0)), 20);
    for (auto _ : state) benchmark::DoNotOptimize(gp::log_marginal_likelihood(p.data, kHp, {100.0}));
}
BENCHMARK(BM_LogMarginalLikelihood)->Arg(10)->Arg(50)->Arg(200);

void BM_FitHyperparameters(benchmark::State& state) {
    const auto p = make_problem(static_cast<int>(state.range(0)), 20);
    gp::FitOptions options;
    options.priors = gp::PriorSet{};
    for (auto _ : state) benchmark::DoNotOptimize(gp::fit_hyperparameters(p.data, kHp, {100.0}, options));
}
BENCHMARK(BM_FitHyperparameters)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ClassProbs(benchmark::State& state) {
    const auto p = make_problem(50, 20);
    const auto post = gp::posterior(p.data, kHp, {100.0}, p.candidates);
    std::vector<TriProbability> tps(post.mu.size());
    for (auto _ : state) {
        for (std::size_t i = 0; i < tps.size(); ++i) tps[i] = class_probs(post.mu[i], post.sigma[i], 100.0, 5.0);
        benchmark::DoNotOptimize(check_proposed(tps, 0.99));
    }
}
BENCHMARK(BM_ClassProbs);

void BM_SamplePaths(benchmark::State& state) {
    const auto p = make_problem(50, 10);
    const auto jp = gp::joint_posterior(p.data, kHp, {100.0}, p.candidates);
    for (auto _ : state) benchmark::DoNotOptimize(gp::sample_paths(jp, static_cast<std::size_t>(state.range(0)), 1));
}
BENCHMARK(BM_SamplePaths)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
