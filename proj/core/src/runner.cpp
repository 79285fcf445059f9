#include "lse/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "lse/classification.hpp"
#include "lse/errors.hpp"
#include "lse/probabilities.hpp"
#include "lse/stopping.hpp"

namespace lse {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    return splitmix(splitmix(splitmix(seed) ^ (stream * 0x632be59bd9b4e019ULL)) + index);
}

enum Stream : std::uint64_t { kInit = 1, kNoise = 2, kFs = 3, kVerify = 4, kFit = 5 };

double mean_square_gap(const std::vector<double>& y, double theta) {
    double s = 0.0;
    for (double v : y) s += (v - theta) * (v - theta);
    return y.empty() ? 0.0 : s / static_cast<double>(y.size());
}

gp::KernelHyperparams derived_init(const std::vector<double>& y, double theta) {
    const double v = mean_square_gap(y, theta);
    gp::KernelHyperparams hp;
    hp.rho = v > 0.0 ? v : 1.0;
    hp.ell = 0.3;
    hp.lambda = std::clamp(100.0 / hp.rho, gp::KernelHyperparams::kLambdaMin, gp::KernelHyperparams::kLambdaMax);
    return hp;
}

gp::FitOptions fit_options(const ExperimentConfig& c, const std::vector<double>& y, std::uint64_t seed) {
    gp::FitOptions o;
    o.restarts = c.gp.restarts;
    o.max_iterations = c.gp.max_iterations;
    o.tolerance = c.gp.tolerance;
    o.seed = seed;
    if (c.gp.priors) {
        // The signal-variance prior is placed on rho relative to the observed spread about theta.
        const double v = mean_square_gap(y, c.benchmark.theta);
        gp::PriorSet p;
        p.rho.scale = v > 0.0 ? v : 1.0;
        // Inputs are normalized to the unit box, so the length-scale prior is the unit-scale prior on
        // the original axes carried over to normalized units.
        double log_width = 0.0;
        for (const auto& b : c.benchmark.domain) log_width += std::log(b.upper - b.lower);
        p.ell.scale = std::exp(-log_width / static_cast<double>(c.benchmark.domain.size()));
        o.priors = p;
    }
    return o;
}

bool designated_fired(const ExperimentConfig& c, const ExperimentTrace& t) {
    switch (c.designated) {
        case Designation::Proposed: return t.first_proposed.has_value();
        case Designation::FullyClassified: return t.first_fc.has_value();
        case Designation::FScoreSampling: return t.first_fs.has_value();
        case Designation::None: return false;
        case Designation::All:
            return !c.monitor.empty() && std::all_of(c.monitor.begin(), c.monitor.end(), [&](StopRule r) {
                return t.first_trigger(r).has_value();
            });
    }
    return false;
}

}  // namespace

std::optional<int> ExperimentTrace::first_trigger(StopRule rule) const {
    switch (rule) {
        case StopRule::Proposed: return first_proposed;
        case StopRule::FullyClassified: return first_fc;
        case StopRule::FScoreSampling: return first_fs;
    }
    return std::nullopt;
}

const IterationRecord* ExperimentTrace::at(int iteration) const {
    if (iteration < 0 || static_cast<std::size_t>(iteration) >= records.size()) return nullptr;
    return &records[static_cast<std::size_t>(iteration)];
}

ExperimentTrace run_single(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();
    ExperimentTrace trace;
    trace.config = config;
    trace.seed = seed;

    const auto& spec = config.benchmark;
    const auto grid = bench::make_grid(spec);
    const auto inputs = bench::normalize(spec, grid);
    const std::size_t n = grid.size();
    const double theta = spec.theta;
    const gp::MeanFunction mean{theta};

    std::vector<double> f_true(n);
    std::vector<std::size_t> truth;
    for (std::size_t i = 0; i < n; ++i) {
        f_true[i] = bench::eval_true(spec, grid[i]);
        if (f_true[i] > theta) truth.push_back(i);
    }

    std::mt19937_64 init_stream(derive(seed, kInit));
    std::mt19937_64 noise_stream(derive(seed, kNoise));
    const std::uint64_t fs_base = derive(seed, kFs);
    const std::uint64_t verify_base = derive(seed, kVerify);

    gp::Dataset data;
    std::set<std::size_t> history;
    std::vector<double> outputs;
    auto observe = [&](std::size_t idx) {
        const double y = bench::observe(spec, grid[idx], noise_stream);
        data.add(inputs[idx], y);
        outputs.push_back(y);
        history.insert(idx);
        return y;
    };

    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int k = 0; k < config.n_initial; ++k) {
        std::size_t idx = pick(init_stream);
        if (!config.acquisition.allow_repeats) {
            if (history.size() >= n) break;
            while (history.count(idx)) idx = pick(init_stream);
        }
        trace.initial_indices.push_back(idx);
        trace.initial_outputs.push_back(observe(idx));
    }

    std::optional<gp::KernelHyperparams> hp = config.gp.init;
    const bool need_joint_fs = config.monitors(StopRule::FScoreSampling);
    trace.stop_reason = "budget";

    for (int t = 0; t < config.budget; ++t) {
        IterationRecord rec;
        rec.iteration = t;
        rec.n_observations = data.size();

        if (!hp) hp = derived_init(outputs, theta);
        if (config.refit || t == 0) {
            const auto fit = gp::fit_hyperparameters(data, *hp, mean,
                                                     fit_options(config, outputs, derive(seed, kFit, t)));
            hp = fit.hp;
            rec.fit_warning = fit.warning;
        }
        rec.hp = *hp;

        const bool verify_now = config.verify.cadence > 0 && t % config.verify.cadence == 0;
        std::vector<double> mu(n), sigma(n);
        std::optional<gp::JointPosterior> jp;
        if (need_joint_fs || verify_now) {
            jp = gp::joint_posterior(data, *hp, mean, inputs);
            for (std::size_t i = 0; i < n; ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                mu[i] = jp->mean(ii);
                sigma[i] = std::sqrt(std::max(0.0, jp->covariance(ii, ii)));
            }
        } else {
            auto post = gp::posterior(data, *hp, mean, inputs);
            mu = std::move(post.mu);
            sigma = std::move(post.sigma);
        }

        rec.eps = margin_eps(config.margin, hp->rho, hp->lambda, n);
        std::vector<TriProbability> tps(n);
        for (std::size_t i = 0; i < n; ++i) tps[i] = class_probs(mu[i], sigma[i], theta, rec.eps);

        const bool proposed_method = config.acquisition.kind == AcquisitionKind::Proposed;
        const ClassificationTriplet standard = classify_standard(mu, sigma, theta, config.beta);
        const ClassificationTriplet triplet = proposed_method ? classify_proposed(tps) : standard;
        rec.n_upper = triplet.upper.size();
        rec.n_lower = triplet.lower.size();
        rec.n_undetermined = triplet.undetermined.size();
        rec.metric_bounds = metric_lower_bounds(triplet);

        const auto prediction = evaluation_prediction(mu, theta);
        rec.f_score = f_score(prediction, truth, n);

        const auto proposed = check_proposed(tps, config.delta);
        rec.bound = proposed.bound;
        rec.proposed_stop = config.monitors(StopRule::Proposed) && proposed.stop;
        rec.fc_stop = config.monitors(StopRule::FullyClassified) && check_fc(standard);
        if (need_joint_fs) {
            const auto fs = check_fs(*jp, prediction, theta, config.fs, derive(fs_base, 0, t));
            rec.fs_stop = fs.stop;
            rec.fs_percentile = fs.percentile_value;
        }
        if (verify_now)
            rec.verify = empirical_eps_accuracy_prob(*jp, triplet, theta, rec.eps, config.verify.n_paths,
                                                     derive(verify_base, 0, t));

        if (rec.proposed_stop && !trace.first_proposed) trace.first_proposed = t;
        if (rec.fc_stop && !trace.first_fc) trace.first_fc = t;
        if (rec.fs_stop.value_or(false) && !trace.first_fs) trace.first_fs = t;

        if (designated_fired(config, trace)) {
            trace.stop_reason = "stopped:" + to_string(config.designated);
            trace.records.push_back(std::move(rec));
            break;
        }
        if (t + 1 == config.budget) {
            trace.records.push_back(std::move(rec));
            break;
        }

        std::vector<double> scores(n);
        for (std::size_t i = 0; i < n; ++i) scores[i] = score(config.acquisition, tps[i], mu[i], sigma[i], theta);
        try {
            const std::size_t next = select_next(config.acquisition, scores, history);
            rec.selected = next;
            rec.observed = observe(next);
        } catch (const ExhaustionError&) {
            trace.stop_reason = "exhausted";
            trace.records.push_back(std::move(rec));
            break;
        }
        trace.records.push_back(std::move(rec));
    }
    return trace;
}

std::vector<ExperimentTrace> run_suite(const ExperimentConfig& config, int jobs) {
    config.validate();
    const auto n = static_cast<std::size_t>(config.n_seeds);
    std::vector<ExperimentTrace> traces(n);
    auto run_one = [&](std::size_t k) {
        const std::uint64_t seed = config.seed + k;
        try {
            traces[k] = run_single(config, seed);
        } catch (const std::exception& e) {
            ExperimentTrace failed;
            failed.config = config;
            failed.seed = seed;
            failed.stop_reason = "error";
            failed.error = e.what();
            traces[k] = std::move(failed);
        }
    };

    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) run_one(k);
        return traces;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) run_one(k);
        });
    for (auto& th : pool) th.join();
    return traces;
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentTrace>& traces) {
    std::size_t length = 0;
    for (const auto& t : traces) length = std::max(length, t.records.size());
    std::vector<SummaryRow> rows;
    rows.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        SummaryRow row;
        row.iteration = static_cast<int>(i);
        double sum_f = 0.0, sum_b = 0.0;
        for (const auto& t : traces) {
            if (i < t.records.size()) {
                ++row.n_runs;
                sum_f += t.records[i].f_score;
                sum_b += t.records[i].bound;
            }
            auto fired = [&](const std::optional<int>& first) { return first && *first <= row.iteration; };
            row.proposed_stops += fired(t.first_proposed);
            row.fc_stops += fired(t.first_fc);
            row.fs_stops += fired(t.first_fs);
        }
        row.f_mean = sum_f / row.n_runs;
        row.bound_mean = sum_b / row.n_runs;
        double var = 0.0;
        for (const auto& t : traces)
            if (i < t.records.size()) var += std::pow(t.records[i].f_score - row.f_mean, 2);
        row.f_std = std::sqrt(var / row.n_runs);
        rows.push_back(row);
    }
    return rows;
}

StopStats stop_statistics(const std::vector<ExperimentTrace>& traces, StopRule rule) {
    StopStats s;
    s.rule = rule;
    s.n_runs = static_cast<int>(traces.size());
    std::vector<double> times, fs;
    for (const auto& t : traces) {
        if (auto first = t.first_trigger(rule)) {
            times.push_back(*first);
            if (const auto* r = t.at(*first)) fs.push_back(r->f_score);
        }
    }
    s.n_stopped = static_cast<int>(times.size());
    if (times.empty()) return s;
    for (double v : times) s.mean_stop += v;
    s.mean_stop /= static_cast<double>(times.size());
    for (double v : times) s.std_stop += (v - s.mean_stop) * (v - s.mean_stop);
    s.std_stop = std::sqrt(s.std_stop / static_cast<double>(times.size()));
    for (double v : fs) s.mean_f_at_stop += v;
    if (!fs.empty()) s.mean_f_at_stop /= static_cast<double>(fs.size());
    return s;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::L: return "L";
        case SweepAxis::Theta: return "theta";
        case SweepAxis::GridResolution: return "grid_resolution";
        case SweepAxis::EpsilonFixed: return "epsilon_fixed";
        case SweepAxis::NoiseStd: return "noise_std";
    }
    return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    for (auto a : {SweepAxis::L, SweepAxis::Theta, SweepAxis::GridResolution, SweepAxis::EpsilonFixed,
                   SweepAxis::NoiseStd})
        if (to_string(a) == name) return a;
    throw std::invalid_argument("unknown sweep axis '" + name +
                                "' (expected L, theta, grid_resolution, epsilon_fixed or noise_std)");
}

ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, double value) {
    ExperimentConfig c = base;
    auto as_int = [&](const char* key) {
        if (value != std::floor(value) || std::abs(value) > 1e9) throw ConfigError(key, "expected an integer value");
        return static_cast<int>(value);
    };
    switch (axis) {
        case SweepAxis::L: c.margin = AdaptiveMargin{as_int("margin.L"), c.delta}; break;
        case SweepAxis::Theta: c.benchmark.theta = value; break;
        case SweepAxis::GridResolution: c.benchmark.resolution = as_int("benchmark.resolution"); break;
        case SweepAxis::EpsilonFixed: c.margin = FixedMargin{value}; break;
        case SweepAxis::NoiseStd: c.benchmark.noise_std = value; break;
    }
    c.validate();
    return c;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& values,
                                  int jobs) {
    if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (double v : values) {
        SweepPoint p;
        p.value = v;
        p.config = apply_axis(base, axis, v);
        p.traces = run_suite(p.config, jobs);
        points.push_back(std::move(p));
    }
    return points;
}

}  // namespace lse
