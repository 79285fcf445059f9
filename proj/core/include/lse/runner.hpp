#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lse/config.hpp"
#include "lse/metrics.hpp"
#include "lse/verify.hpp"

namespace lse {

/// State of one LSE iteration: the posterior after the observations so far, the stopping
/// checks on it, and the point acquired next (absent on the final record).
struct IterationRecord {
    int iteration = 0;
    std::size_t n_observations = 0;
    std::optional<std::size_t> selected;
    std::optional<double> observed;
    gp::KernelHyperparams hp;
    bool fit_warning = false;
    double eps = 0.0;
    double f_score = 0.0;
    double bound = 0.0;
    bool proposed_stop = false;
    bool fc_stop = false;
    std::optional<bool> fs_stop;
    std::optional<double> fs_percentile;
    std::size_t n_upper = 0;
    std::size_t n_lower = 0;
    std::size_t n_undetermined = 0;
    MetricBounds metric_bounds;
    std::optional<AccuracyEstimate> verify;
};

struct ExperimentTrace {
    ExperimentConfig config;
    std::uint64_t seed = 0;
    std::vector<std::size_t> initial_indices;  // initial design, in observation order
    std::vector<double> initial_outputs;
    std::vector<IterationRecord> records;
    std::optional<int> first_proposed;
    std::optional<int> first_fc;
    std::optional<int> first_fs;
    std::string stop_reason;  // "stopped:<rule>", "budget", "exhausted" or "error"
    std::string error;

    std::optional<int> first_trigger(StopRule rule) const;
    /// Record at a given iteration, if the run reached it.
    const IterationRecord* at(int iteration) const;
};

/// One LSE run; deterministic given config and seed.
ExperimentTrace run_single(const ExperimentConfig& config, std::uint64_t seed);

/// n_seeds runs with seeds config.seed + k. A failing run is kept with stop_reason "error".
std::vector<ExperimentTrace> run_suite(const ExperimentConfig& config, int jobs = 1);

struct SummaryRow {
    int iteration = 0;
    int n_runs = 0;
    double f_mean = 0.0;
    double f_std = 0.0;
    double bound_mean = 0.0;
    int proposed_stops = 0;  // runs whose first trigger is at or before this iteration
    int fc_stops = 0;
    int fs_stops = 0;
};

/// Per-iteration aggregate over the traces that reached each iteration. Std is the population std.
std::vector<SummaryRow> summarize(const std::vector<ExperimentTrace>& traces);

struct StopStats {
    StopRule rule = StopRule::Proposed;
    int n_runs = 0;
    int n_stopped = 0;
    double mean_stop = 0.0;
    double std_stop = 0.0;
    double mean_f_at_stop = 0.0;
};

StopStats stop_statistics(const std::vector<ExperimentTrace>& traces, StopRule rule);

enum class SweepAxis { L, Theta, GridResolution, EpsilonFixed, NoiseStd };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

/// Copy of `base` with the axis set to `value`.
ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, double value);

struct SweepPoint {
    double value = 0.0;
    ExperimentConfig config;
    std::vector<ExperimentTrace> traces;
};

/// One suite per value, all sharing the base seed.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& values,
                                  int jobs = 1);

}  // namespace lse
