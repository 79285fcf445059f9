#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lse/acquisition.hpp"
#include "lse/bench.hpp"
#include "lse/gp.hpp"
#include "lse/margin.hpp"
#include "lse/stopping.hpp"

namespace lse {

enum class StopRule { Proposed, FullyClassified, FScoreSampling };

/// Which rule ends a run. None runs to budget; All stops once every monitored rule has fired.
enum class Designation { Proposed, FullyClassified, FScoreSampling, None, All };

std::string to_string(StopRule rule);
std::string to_string(Designation d);

struct GpConfig {
    bool priors = true;
    int restarts = 5;
    int max_iterations = 200;
    double tolerance = 1e-6;
    std::optional<gp::KernelHyperparams> init;  // derived from the first observations when absent
};

struct VerifyConfig {
    int cadence = 0;  // 0 disables
    std::size_t n_paths = 10000;
    bool midpoint_tweak = false;
    double bound_offset = 0.0;  // test hook added to the bound before the soundness comparison
};

struct ExperimentConfig {
    bench::BenchmarkSpec benchmark = bench::default_spec(bench::Function::Sphere);
    AcquisitionPolicy acquisition;
    MarginPolicy margin = AdaptiveMargin{5, 0.99};
    Designation designated = Designation::Proposed;
    std::vector<StopRule> monitor{StopRule::Proposed, StopRule::FullyClassified, StopRule::FScoreSampling};
    FsOptions fs;
    double delta = 0.99;
    double beta = 1.96;
    int budget = 300;
    int n_seeds = 5;
    std::uint64_t seed = 0;
    int n_initial = 1;
    bool refit = true;
    GpConfig gp;
    VerifyConfig verify;

    bool monitors(StopRule rule) const;
    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// Parses a JSON configuration. Unknown keys and ill-typed values raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);

/// Compact JSON with every key spelled out; parse_config(to_json_text(c)) reproduces c.
std::string to_json_text(const ExperimentConfig& config);

/// Markdown table of every configuration key, its default and meaning.
std::string config_reference();

}  // namespace lse
