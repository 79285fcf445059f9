#include "lse_cli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lse/config.hpp"
#include "lse/errors.hpp"
#include "lse/runner.hpp"
#include "lse/trace_io.hpp"

namespace lse::cli {

namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> budget;
    std::optional<double> L;
    std::optional<double> theta;
    std::optional<double> resolution;
    std::optional<double> eps;
    std::optional<double> noise_std;
};

struct Common {
    std::string config_path;
    std::string out_dir;
    bool timestamp = false;
    int jobs = 1;
    Overrides overrides;
};

class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--config", c.config_path, "JSON configuration file")->required();
    cmd.add_option("--out", c.out_dir, "output directory (default: $LSE_OUTPUT_ROOT/<config name>)");
    cmd.add_flag("--timestamp", c.timestamp, "write into a timestamped subdirectory of the output directory");
    cmd.add_option("--jobs", c.jobs, "parallel runs (0 = one per hardware thread)");
    cmd.add_option("--seed", c.overrides.seed, "base seed");
    cmd.add_option("--budget", c.overrides.budget, "iterations per run");
    cmd.add_option("--L", c.overrides.L, "adaptive margin replicate count");
    cmd.add_option("--theta", c.overrides.theta, "level-set threshold");
    cmd.add_option("--resolution", c.overrides.resolution, "grid points per axis");
    cmd.add_option("--eps", c.overrides.eps, "fixed margin width");
    cmd.add_option("--noise-std", c.overrides.noise_std, "observation noise standard deviation");
}

ExperimentConfig load(const Common& c) {
    std::ifstream in(c.config_path);
    if (!in) throw InvalidInput("cannot read config file '" + c.config_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    ExperimentConfig config = parse_config(buffer.str());

    const auto& o = c.overrides;
    if (o.seed) config.seed = *o.seed;
    if (o.budget) config.budget = *o.budget;
    if (o.L) config = apply_axis(config, SweepAxis::L, *o.L);
    if (o.theta) config = apply_axis(config, SweepAxis::Theta, *o.theta);
    if (o.resolution) config = apply_axis(config, SweepAxis::GridResolution, *o.resolution);
    if (o.eps) config = apply_axis(config, SweepAxis::EpsilonFixed, *o.eps);
    if (o.noise_std) config = apply_axis(config, SweepAxis::NoiseStd, *o.noise_std);
    config.validate();
    return config;
}

fs::path output_dir(const Common& c) {
    fs::path dir;
    if (!c.out_dir.empty()) {
        dir = c.out_dir;
    } else {
        const char* root = std::getenv("LSE_OUTPUT_ROOT");
        dir = fs::path(root && *root ? root : "lse_output") / fs::path(c.config_path).stem();
    }
    if (c.timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::ostringstream stamp;
        stamp << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
        dir /= stamp.str();
    }
    fs::create_directories(dir);
    return dir;
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    fn(out);
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string value_label(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

int report_failures(const std::vector<ExperimentTrace>& traces, std::ostream& err) {
    int failures = 0;
    for (const auto& t : traces)
        if (t.stop_reason == "error") {
            err << "run with seed " << t.seed << " failed: " << t.error << '\n';
            ++failures;
        }
    return failures;
}

int cmd_run(const Common& c, std::ostream& out, std::ostream& err) {
    const ExperimentConfig config = load(c);
    const fs::path dir = output_dir(c);
    const auto traces = run_suite(config, c.jobs);
    for (const auto& t : traces)
        write_file(dir / ("trace_seed" + std::to_string(t.seed) + ".jsonl"), [&](std::ostream& o) { write_trace(o, t); });
    write_file(dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, config, traces); });
    write_file(dir / "stop_times.csv", [&](std::ostream& o) { write_stop_times_csv(o, config, traces); });
    for (const auto& t : traces) {
        out << "seed " << t.seed << ": " << t.stop_reason << " after " << t.records.size() << " iterations";
        if (!t.records.empty()) out << ", F=" << t.records.back().f_score;
        out << '\n';
    }
    out << "wrote " << dir.string() << '\n';
    return report_failures(traces, err) ? kRuntimeFailure : kOk;
}

int cmd_verify(const Common& c, std::ostream& out, std::ostream& err) {
    const ExperimentConfig config = load(c);
    if (config.verify.cadence < 1) throw ConfigError("verify.cadence", "must be >= 1 for the verify command");
    const fs::path dir = output_dir(c);
    const auto traces = run_suite(config, c.jobs);
    int violations = 0;
    out << "seed,iteration,estimate,bound\n" << std::setprecision(10);
    for (const auto& t : traces) {
        write_file(dir / ("trace_seed" + std::to_string(t.seed) + ".jsonl"), [&](std::ostream& o) { write_trace(o, t); });
        write_file(dir / ("verify_seed" + std::to_string(t.seed) + ".csv"), [&](std::ostream& o) { write_verify_csv(o, t); });
        for (const auto& r : t.records) {
            if (!r.verify) continue;
            out << t.seed << ',' << r.iteration << ',' << r.verify->estimate << ','
                << r.bound + config.verify.bound_offset << '\n';
            if (!verify_record_ok(r, config.verify.bound_offset)) {
                err << "seed " << t.seed << " iteration " << r.iteration << ": estimate " << r.verify->estimate
                    << " is below bound " << r.bound + config.verify.bound_offset << " - 3 stderr\n";
                ++violations;
            }
        }
    }
    const int failures = report_failures(traces, err);
    return failures || violations ? kRuntimeFailure : kOk;
}

int cmd_sweep(const Common& c, const std::string& axis_name, const std::vector<double>& values, std::ostream& out,
              std::ostream& err) {
    if (values.empty()) throw InvalidInput("--values must list at least one value");
    SweepAxis axis;
    try {
        axis = sweep_axis_from_string(axis_name);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
    const ExperimentConfig base = load(c);
    for (double v : values) apply_axis(base, axis, v);  // reject bad values before any run starts
    const fs::path dir = output_dir(c);
    const auto points = run_sweep(base, axis, values, c.jobs);
    int failures = 0;
    for (const auto& p : points) {
        const std::string name = "summary_" + to_string(axis) + "_" + value_label(p.value) + ".csv";
        write_file(dir / name, [&](std::ostream& o) { write_summary_csv(o, p.config, p.traces); });
        failures += report_failures(p.traces, err);
    }
    write_file(dir / "stop_times.csv", [&](std::ostream& o) { write_sweep_stop_table(o, base, axis, points); });
    out << "wrote " << dir.string() << '\n';
    return failures ? kRuntimeFailure : kOk;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"(epsilon, delta)-accurate level set estimation experiments", "lse"};
    app.require_subcommand(1);

    Common run_opts, verify_opts, sweep_opts;
    std::string axis;
    std::vector<double> values;
    auto* run = app.add_subcommand("run", "run a multi-seed experiment");
    add_common(*run, run_opts);
    auto* verify = app.add_subcommand("verify", "check the accuracy bound against Monte-Carlo estimates");
    add_common(*verify, verify_opts);
    auto* sweep = app.add_subcommand("sweep", "run one experiment per value of a parameter");
    add_common(*sweep, sweep_opts);
    sweep->add_option("--axis", axis, "L | theta | grid_resolution | epsilon_fixed | noise_std")->required();
    sweep->add_option("--values", values, "comma-separated values")->delimiter(',');
    auto* keys = app.add_subcommand("keys", "print the configuration key reference");

    std::vector<const char*> argv{"lse"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidConfig;
    }

    try {
        if (*run) return cmd_run(run_opts, out, err);
        if (*verify) return cmd_verify(verify_opts, out, err);
        if (*sweep) return cmd_sweep(sweep_opts, axis, values, out, err);
        if (*keys) {
            out << config_reference();
            return kOk;
        }
    } catch (const ConfigError& e) {
        err << "invalid config: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kInvalidConfig;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return main(args, out, err);
}

}  // namespace lse::cli
