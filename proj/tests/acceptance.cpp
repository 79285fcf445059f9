#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lse/classification.hpp"
#include "lse/config.hpp"
#include "lse/margin.hpp"
#include "lse/metrics.hpp"
#include "lse/probabilities.hpp"
#include "lse/runner.hpp"
#include "lse/trace_io.hpp"
#include "oracles.hpp"

using namespace lse;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.1fs", secs);
    if (limit_s > 0) {
        timing += fmt(" (limit %.0fs)", limit_s);
        if (secs > limit_s) o.pass = false;
    }
    if (!o.pass) ++failures;
    std::printf("%s  %2d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
}

Outcome gp_oracle() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_mu = 0, worst_var = 0, worst_lml = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = 1 + rng() % 20;
        const auto data = oracle::random_dataset(rng, n, 2, inst % 2 == 1);
        const auto cand = oracle::random_points(rng, 50, 2);
        const gp::KernelHyperparams hp{0.5 + 4.5 * u(rng), 0.1 + 0.9 * u(rng), std::exp(std::log(100.0) * u(rng))};
        const double m = 2.0 * u(rng) - 1.0;
        const auto post = gp::posterior(data, hp, {m}, cand);
        const auto ref = oracle::posterior(data, hp, m, cand);
        for (std::size_t j = 0; j < cand.size(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            worst_mu = std::max(worst_mu, oracle::rel_err(post.mu[j], ref.mean(jj)));
            worst_var = std::max(worst_var, oracle::rel_err(post.sigma[j] * post.sigma[j], ref.cov(jj, jj)));
        }
        worst_lml = std::max(worst_lml, oracle::rel_err(gp::log_marginal_likelihood(data, hp, {m}),
                                                        oracle::log_marginal_likelihood(data, hp, m)));
    }
    const double worst = std::max({worst_mu, worst_var, worst_lml});
    return {worst <= 1e-8, fmt("max rel err mean %.2e, variance %.2e, lml %.2e (tol 1e-8)", worst_mu, worst_var,
                               worst_lml)};
}

Outcome probability_identities() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int not_increasing = 0, strict_checked = 0;
    for (int i = 0; i < 100000; ++i) {
        const double mu = 20.0 * u(rng) - 10.0, theta = 20.0 * u(rng) - 10.0;
        const double sigma = i % 100 == 0 ? 0.0 : std::exp(std::log(1e-3) + u(rng) * std::log(1e4));
        const double eps = 1e-3 + 10.0 * u(rng);
        const auto tp = class_probs(mu, sigma, theta, eps);
        const auto fb = four_bin(mu, sigma, theta, eps);
        const double vals[] = {tp.p_h, tp.p_l, tp.p_u, tp.p_not_u, fb.p00, fb.p01, fb.p10, fb.p11};
        for (double v : vals)
            if (!(v >= 0.0 && v <= 1.0)) worst = std::max(worst, 1.0);
        const double errs[] = {
            std::fabs(tp.p_h + tp.p_l - 1.0),
            std::fabs(tp.p_u + tp.p_not_u - 1.0),
            std::fabs(fb.p00 + fb.p01 + fb.p10 + fb.p11 - 1.0),
            std::fabs(fb.p00 + fb.p01 - tp.p_l),
            std::fabs(fb.p10 + fb.p11 - tp.p_h),
            std::fabs(fb.p01 + fb.p11 - tp.p_u),
            std::fabs(tp.r_min() - std::min({tp.p_h, tp.p_l, tp.p_not_u})),
            std::fabs(tp.r_max() - std::max({tp.p_h, tp.p_l, tp.p_u})),
        };
        for (double e : errs) worst = std::max(worst, e);
        if (sigma > 0.0) {
            const double z = (mu - theta) / sigma;
            worst = std::max(worst, std::fabs(tp.p_h - oracle::Phi_c(-z)));
            const double pu_ref = oracle::Phi((0.5 * eps - (mu - theta)) / sigma) -
                                  oracle::Phi((-0.5 * eps - (mu - theta)) / sigma);
            worst = std::max(worst, std::fabs(tp.p_u - pu_ref));

            const double eps2 = eps * (1.0 + u(rng));
            const double pu2 = class_probs(mu, sigma, theta, eps2).p_u;
            const double pu2_ref = oracle::Phi((0.5 * eps2 - (mu - theta)) / sigma) -
                                   oracle::Phi((-0.5 * eps2 - (mu - theta)) / sigma);
            if (pu2 < tp.p_u) ++not_increasing;
            // Strictness is only observable where the exact increase exceeds double resolution.
            if (pu2_ref - pu_ref > 1e-14) {
                ++strict_checked;
                if (!(pu2 > tp.p_u)) ++not_increasing;
            }
        }
    }
    return {worst <= 1e-12 && not_increasing == 0,
            fmt("max invariant/oracle err %.2e (tol 1e-12); p_u monotonicity violations %d (%d strict pairs)", worst,
                not_increasing, strict_checked)};
}

ExperimentConfig branin_verify_config() {
    return parse_config(R"({"benchmark": {"function": "branin", "resolution": 10, "noise_std": 20},
        "delta": 0.99, "budget": 80, "n_seeds": 3,
        "stopping": {"designated": "none", "monitor": ["proposed"]},
        "verify": {"cadence": 1, "n_paths": 10000}})");
}

std::vector<ExperimentTrace> branin_runs;

Outcome soundness() {
    branin_runs = run_suite(branin_verify_config(), 0);
    int checked = 0, violations = 0;
    double min_margin = 1e9;
    for (const auto& t : branin_runs) {
        if (t.stop_reason == "error") return {false, "run failed: " + t.error};
        for (const auto& r : t.records) {
            if (!r.verify) continue;
            ++checked;
            const double margin = r.verify->estimate - (r.bound - 3.0 * r.verify->std_error);
            min_margin = std::min(min_margin, margin);
            if (margin < 0.0) ++violations;
        }
    }
    return {checked == 240 && violations == 0,
            fmt("%d iterations checked, %d below bound - 3 stderr, min slack %.4f", checked, violations, min_margin)};
}

Outcome tightness() {
    int near = 0, violations = 0;
    double max_gap = -1.0, max_bound = -1e9;
    for (const auto& t : branin_runs)
        for (const auto& r : t.records) {
            if (!r.verify) continue;
            max_bound = std::max(max_bound, r.bound);
            if (r.bound < 0.99) continue;
            ++near;
            const double gap = r.verify->estimate - r.bound;
            max_gap = std::max(max_gap, gap);
            if (gap > 0.01 + 3.0 * r.verify->std_error) ++violations;
        }
    if (branin_runs.empty()) return {false, "no runs from the soundness criterion"};
    if (near == 0)
        return {true, fmt("no iteration reached bound 0.99 (max bound %.4f); condition holds vacuously", max_bound)};
    return {violations == 0, fmt("%d iterations with bound >= 0.99, %d gaps above 0.01 + 3 stderr, max gap %.4f", near,
                                 violations, max_gap)};
}

Outcome rosenbrock_stopping() {
    const auto c = parse_config(R"({"benchmark": {"function": "rosenbrock", "resolution": 20, "theta": 100,
        "noise_std": 30}, "delta": 0.99, "margin": {"kind": "adaptive", "L": 5}, "budget": 300, "n_seeds": 5,
        "stopping": {"designated": "none", "monitor": ["proposed", "fc"]}})");
    const auto traces = run_suite(c, 0);
    int stopped = 0, fc_fired = 0, far = 0;
    double sum_stop_f = 0.0, sum_end_f = 0.0;
    std::string per_seed;
    for (const auto& t : traces) {
        if (t.stop_reason == "error") return {false, "run failed: " + t.error};
        const double f_end = t.records.back().f_score;
        if (t.first_fc) ++fc_fired;
        if (!t.first_proposed) {
            per_seed += fmt(" s%d:none/F_end=%.3f", static_cast<int>(t.seed), f_end);
            continue;
        }
        ++stopped;
        const double f_stop = t.at(*t.first_proposed)->f_score;
        sum_stop_f += f_stop;
        sum_end_f += f_end;
        if (std::fabs(f_stop - f_end) > 0.05) ++far;
        per_seed += fmt(" s%d:t=%d,F=%.3f/%.3f", static_cast<int>(t.seed), *t.first_proposed, f_stop, f_end);
    }
    const double mean_gap = stopped ? std::fabs(sum_stop_f - sum_end_f) / stopped : 0.0;
    return {stopped >= 4 && far == 0 && fc_fired == 0,
            fmt("proposed stopped %d/5, seeds with |F_stop - F_end| > 0.05: %d (mean gap %.3f), FC fired %d/5;", stopped,
                far, mean_gap, fc_fired) +
                per_seed};
}

Outcome sphere_noise_free() {
    const auto c = parse_config(R"({"benchmark": {"function": "sphere", "resolution": 20, "theta": 20,
        "noise_std": 0}, "budget": 300, "n_seeds": 5,
        "stopping": {"designated": "all", "monitor": ["proposed", "fc"]}})");
    const auto traces = run_suite(c, 0);
    int both = 0;
    double min_f = 1.0;
    std::string per_seed;
    for (const auto& t : traces) {
        if (t.stop_reason == "error") return {false, "run failed: " + t.error};
        if (t.first_proposed && t.first_fc) ++both;
        if (t.first_proposed) min_f = std::min(min_f, t.at(*t.first_proposed)->f_score);
        else min_f = 0.0;
        per_seed += fmt(" s%d:proposed=%d,fc=%d", static_cast<int>(t.seed), t.first_proposed.value_or(-1),
                        t.first_fc.value_or(-1));
    }
    return {both == 5 && min_f >= 0.95,
            fmt("both rules fired in %d/5 seeds, min F at proposed stop %.3f;", both, min_f) + per_seed};
}

Outcome metric_bounds() {
    std::mt19937_64 rng(707);
    long cases = 0, violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t h = rng() % 15, l = rng() % 15, nu = trial < 20 ? 12 : rng() % 13;
        ClassificationTriplet t;
        for (std::size_t i = 0; i < h; ++i) t.upper.push_back(i);
        for (std::size_t i = 0; i < l; ++i) t.lower.push_back(h + i);
        for (std::size_t i = 0; i < nu; ++i) t.undetermined.push_back(h + l + i);
        const auto b = metric_lower_bounds(t);
        const std::size_t full = (std::size_t{1} << nu) - 1;
        // Predictions put every H member upper and every L member lower; U members may go either way.
        const std::size_t predictions[] = {0, full, rng() & full, rng() & full};
        for (std::size_t s : predictions)
            for (std::size_t truth = 0; truth <= full; ++truth) {
                const double tp = static_cast<double>(h + std::popcount(s & truth));
                const double fp = std::popcount(s & ~truth);
                const double fn = std::popcount(~s & truth & full);
                const double tn = static_cast<double>(l + std::popcount(~s & ~truth & full));
                auto ratio = [](double a, double d) { return d == 0.0 ? 1.0 : a / d; };
                const double realized[] = {ratio(2 * tp, 2 * tp + fp + fn), ratio(tp + tn, tp + tn + fp + fn),
                                           ratio(tp, tp + fp), ratio(tp, tp + fn), ratio(tn, tn + fp)};
                const double bounds[] = {b.f_score_lb, b.accuracy_lb, b.precision_lb, b.recall_lb, b.specificity_lb};
                for (int k = 0; k < 5; ++k) {
                    ++cases;
                    if (realized[k] < bounds[k] - 1e-15) ++violations;
                }
            }
    }
    return {violations == 0, fmt("%ld metric/completion pairs, %ld below the closed-form bound", cases, violations)};
}

Outcome beta_eps() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double mu = 20.0 * u(rng) - 10.0, theta = 20.0 * u(rng) - 10.0;
        const double sigma = 1e-3 + 5.0 * u(rng);
        const double beta = 0.1 + 4.9 * u(rng);
        const double eps = beta_to_eps(mu, sigma, theta, beta);
        worst = std::max(worst, std::fabs(eps_to_beta(mu, sigma, theta, eps) - beta) / beta);
    }
    int mismatches = 0, tested = 0;
    while (tested < 10000) {
        const double mu = 20.0 * u(rng) - 10.0, theta = 20.0 * u(rng) - 10.0;
        const double sigma = 1e-3 + 5.0 * u(rng);
        const double beta = 0.1 + 4.9 * u(rng);
        if (std::fabs(std::fabs(mu - theta) / sigma - beta) < 1e-6) continue;
        ++tested;
        const auto tp = with_undetermined_prob(class_probs(mu, sigma, theta, 1.0), oracle::Phi(beta));
        const auto a = classify_proposed(std::span<const TriProbability>(&tp, 1));
        const auto b = classify_standard(std::span<const double>(&mu, 1), std::span<const double>(&sigma, 1), theta,
                                         beta);
        if (a.upper != b.upper || a.lower != b.lower || a.undetermined != b.undetermined) ++mismatches;
    }
    return {worst <= 1e-8 && mismatches == 0,
            fmt("roundtrip max rel err %.2e (tol 1e-8); rule mismatches %d/%d", worst, mismatches, tested)};
}

Outcome adaptive_margin() {
    const double ks[] = {0.1, 1.0, 10.0, 1000.0};
    const double lambdas[] = {1e-4, 1e-2, 1.0, 100.0};
    const int Ls[] = {1, 2, 5, 20};
    const double deltas[] = {0.5, 0.9, 0.99, 0.999};
    const std::size_t ns[] = {1, 10, 400, 10000};
    double worst = 0.0;
    int monotone_violations = 0;
    auto eps = [](double k, double lam, int L, double d, std::size_t n) { return adaptive_eps(k, lam, L, d, n); };
    for (double k : ks)
        for (double lam : lambdas)
            for (int L : Ls)
                for (double d : deltas)
                    for (std::size_t n : ns) {
                        const double sigma_l = std::sqrt(1.0 / (1.0 / k + L * lam));
                        const double tail = (1.0 - d) / (2.0 * static_cast<double>(n));
                        const double q = boost::math::quantile(
                            boost::math::complement(boost::math::normal_distribution<double>(), tail));
                        const double ref = 2.0 * sigma_l * q;
                        const double got = eps(k, lam, L, d, n);
                        worst = std::max(worst, std::fabs(got - ref) / ref);
                        if (!(eps(k, lam, L + 1, d, n) < got)) ++monotone_violations;
                        if (!(eps(k, lam, L, std::min(0.9999, d + 0.005), n) > got)) ++monotone_violations;
                        if (!(eps(k, lam, L, d, n + 1) > got)) ++monotone_violations;
                        if (!(eps(k * 1.1, lam, L, d, n) > got)) ++monotone_violations;
                        if (!(eps(k, lam * 1.1, L, d, n) < got)) ++monotone_violations;
                    }
    return {worst <= 1e-6 && monotone_violations == 0,
            fmt("max rel err %.2e (tol 1e-6) over 1024 grid points; monotonicity violations %d", worst,
                monotone_violations)};
}

Outcome candidate_robustness() {
    std::string detail;
    bool ok = true;
    for (int res : {10, 20, 30}) {
        auto c = parse_config(R"({"benchmark": {"function": "rosenbrock", "theta": 100, "noise_std": 0},
            "budget": 300, "n_seeds": 5, "stopping": {"designated": "proposed", "monitor": ["proposed"]}})");
        c.benchmark.resolution = res;
        const auto traces = run_suite(c, 0);
        int fired = 0;
        double min_f = 1.0, sum_f = 0.0, sum_t = 0.0;
        for (const auto& t : traces) {
            if (t.stop_reason == "error") return {false, "run failed: " + t.error};
            if (!t.first_proposed) {
                min_f = 0.0;
                continue;
            }
            ++fired;
            const double f = t.at(*t.first_proposed)->f_score;
            min_f = std::min(min_f, f);
            sum_f += f;
            sum_t += *t.first_proposed;
        }
        ok = ok && fired == 5 && min_f >= 0.9;
        detail += fmt(" %dx%d: fired %d/5, mean stop %.1f, min F %.3f, mean F %.3f;", res, res, fired,
                      fired ? sum_t / fired : 0.0, min_f, fired ? sum_f / fired : 0.0);
    }
    return {ok, detail.substr(1)};
}

Outcome determinism() {
    const auto c = parse_config(R"({"benchmark": {"function": "branin", "resolution": 8},
        "budget": 25, "n_seeds": 2, "stopping": {"designated": "none"},
        "fs": {"n_samples": 300}, "verify": {"cadence": 4, "n_paths": 500}})");
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "lse_acceptance_determinism";
    fs::create_directories(dir);
    auto write = [&](const std::string& name) {
        const auto traces = run_suite(c, 0);
        std::ofstream out(dir / name, std::ios::binary);
        for (const auto& t : traces) write_trace(out, t);
    };
    write("a.jsonl");
    write("b.jsonl");
    auto slurp = [&](const std::string& name) {
        std::ifstream in(dir / name, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const std::string a = slurp("a.jsonl"), b = slurp("b.jsonl");
    fs::remove_all(dir);
    return {!a.empty() && a == b, fmt("two runs of a %zu-byte trace set %s", a.size(), a == b ? "identical" : "differ")};
}

}  // namespace

int main() {
    criterion(1, "GP posterior and likelihood match dense oracle", 10, gp_oracle);
    criterion(2, "probability identities", 5, probability_identities);
    criterion(3, "accuracy bound soundness on Branin 10x10", 300, soundness);
    criterion(4, "bound tightness near stop", 0, tightness);
    criterion(5, "stopping on noisy Rosenbrock 20x20", 900, rosenbrock_stopping);
    criterion(6, "noise-free Sphere stop parity", 0, sphere_noise_free);
    criterion(7, "metric lower bounds by enumeration", 30, metric_bounds);
    criterion(8, "beta/eps conversion and rule equivalence", 0, beta_eps);
    criterion(9, "adaptive margin formula", 0, adaptive_margin);
    criterion(10, "candidate-count robustness on noise-free Rosenbrock", 0, candidate_robustness);
    criterion(11, "byte-identical traces", 0, determinism);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
