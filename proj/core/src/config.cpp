#include "lse/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lse/errors.hpp"

namespace lse {

using Json = nlohmann::ordered_json;

std::string to_string(StopRule rule) {
    switch (rule) {
        case StopRule::Proposed: return "proposed";
        case StopRule::FullyClassified: return "fc";
        case StopRule::FScoreSampling: return "fs";
    }
    return "unknown";
}

std::string to_string(Designation d) {
    switch (d) {
        case Designation::Proposed: return "proposed";
        case Designation::FullyClassified: return "fc";
        case Designation::FScoreSampling: return "fs";
        case Designation::None: return "none";
        case Designation::All: return "all";
    }
    return "unknown";
}

bool ExperimentConfig::monitors(StopRule rule) const {
    return std::find(monitor.begin(), monitor.end(), rule) != monitor.end();
}

void ExperimentConfig::validate() const {
    auto check = [](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(key, what);
    };
    try {
        benchmark.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("benchmark", e.what());
    }
    check(acquisition.kind != AcquisitionKind::Straddle || acquisition.beta > 0.0, "acquisition.beta",
          "must be positive");
    if (const auto* f = std::get_if<FixedMargin>(&margin)) {
        check(f->eps > 0.0 && std::isfinite(f->eps), "margin.eps", "must be positive");
    } else {
        const auto& a = std::get<AdaptiveMargin>(margin);
        check(a.L >= 1, "margin.L", "must be >= 1");
    }
    check(delta > 0.0 && delta < 1.0, "delta", "must lie in (0, 1)");
    check(beta > 0.0, "beta", "must be positive");
    check(budget >= 1, "budget", "must be >= 1");
    check(n_seeds >= 1, "n_seeds", "must be >= 1");
    check(n_initial >= 1, "n_initial", "must be >= 1");
    check(fs.n_samples >= 100, "fs.n_samples", "must be >= 100");
    check(fs.percentile > 0.0 && fs.percentile < 100.0, "fs.percentile", "must lie in (0, 100)");
    check(fs.target_f >= 0.0 && fs.target_f <= 1.0, "fs.target_f", "must lie in [0, 1]");
    check(gp.restarts >= 1, "gp.restarts", "must be >= 1");
    check(gp.max_iterations >= 1, "gp.max_iterations", "must be >= 1");
    check(gp.tolerance > 0.0, "gp.tolerance", "must be positive");
    if (gp.init) {
        try {
            gp.init->validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("gp.init", e.what());
        }
    }
    check(verify.cadence >= 0, "verify.cadence", "must be >= 0");
    check(verify.n_paths >= 100, "verify.n_paths", "must be >= 100");
    if (designated != Designation::None && designated != Designation::All) {
        const StopRule rule = designated == Designation::Proposed          ? StopRule::Proposed
                              : designated == Designation::FullyClassified ? StopRule::FullyClassified
                                                                           : StopRule::FScoreSampling;
        check(monitors(rule), "stopping.designated", "designated rule must also be monitored");
    }
}

namespace {

struct KeyDoc {
    const char* key;
    const char* default_value;
    const char* meaning;
};

constexpr KeyDoc kKeys[] = {
    {"benchmark.function", "\"sphere\"",
     "sphere | rosenbrock | branin | booth | cross_in_tray | holder_table"},
    {"benchmark.resolution", "20", "grid points per axis (>= 2)"},
    {"benchmark.theta", "function default", "level-set threshold"},
    {"benchmark.noise_std", "function default", "standard deviation of additive Gaussian observation noise"},
    {"benchmark.domain", "function default", "[[lo, hi], [lo, hi]] input box"},
    {"acquisition.kind", "\"proposed\"", "proposed | misclass | straddle | us"},
    {"acquisition.beta", "1.96", "straddle width multiplier"},
    {"acquisition.allow_repeats", "true", "whether a candidate may be selected more than once"},
    {"margin.kind", "\"adaptive\"", "adaptive | fixed"},
    {"margin.L", "5", "effective replicate count for the adaptive margin"},
    {"margin.eps", "-", "fixed margin width (required when kind = fixed)"},
    {"stopping.designated", "\"proposed\"", "proposed | fc | fs | none | all: the rule that ends a run"},
    {"stopping.monitor", "[\"proposed\", \"fc\", \"fs\"]", "rules evaluated and recorded every iteration"},
    {"fs.target_f", "0.95", "desired F-score of the F-score sampling rule"},
    {"fs.percentile", "95", "required probability (%) of exceeding fs.target_f"},
    {"fs.n_samples", "1000", "posterior paths drawn per F-score sampling check"},
    {"delta", "0.99", "confidence level of the stopping bound (also used by the adaptive margin)"},
    {"beta", "1.96", "confidence multiplier of the interval classification rule"},
    {"budget", "300", "maximum number of iterations per run"},
    {"n_seeds", "5", "runs per suite"},
    {"seed", "0", "base seed; run k uses seed + k"},
    {"n_initial", "1", "random grid points observed before the first iteration"},
    {"refit", "true", "refit kernel hyperparameters every iteration"},
    {"gp.priors", "true", "gamma priors on signal variance and length scale"},
    {"gp.restarts", "5", "simplex starts per fit (the first at the previous estimate)"},
    {"gp.max_iterations", "200", "simplex iterations per start"},
    {"gp.tolerance", "1e-6", "relative objective spread that ends a simplex start"},
    {"gp.init", "derived", "{rho, ell, lambda} used before the first fit"},
    {"verify.cadence", "0", "verify every k-th iteration (0 = off)"},
    {"verify.n_paths", "10000", "posterior paths per verification"},
    {"verify.midpoint_tweak", "false", "also report the indicator-form estimate with the midpoint gamma"},
    {"verify.bound_offset", "0", "test hook: added to the bound before the soundness check"},
};

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const Json& obj, const std::string& prefix) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string path = join(prefix, it.key());
        const bool known = std::any_of(std::begin(kKeys), std::end(kKeys), [&](const KeyDoc& d) {
            const std::string k = d.key;
            return k == path || k.rfind(path + ".", 0) == 0;
        });
        if (!known) throw ConfigError(path, "unknown key");
    }
}

const Json* child(const Json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const Json& require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    return j;
}

double read_number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

long long read_integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<long long>();
}

bool read_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

std::string read_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

template <class Fn>
void with(const Json& obj, const std::string& prefix, const std::string& key, Fn&& fn) {
    if (const Json* c = child(obj, key)) fn(*c, join(prefix, key));
}

StopRule rule_from_string(const std::string& s, const std::string& path) {
    if (s == "proposed") return StopRule::Proposed;
    if (s == "fc") return StopRule::FullyClassified;
    if (s == "fs") return StopRule::FScoreSampling;
    throw ConfigError(path, "unknown stopping rule '" + s + "'");
}

Designation designation_from_string(const std::string& s, const std::string& path) {
    if (s == "none") return Designation::None;
    if (s == "all") return Designation::All;
    switch (rule_from_string(s, path)) {
        case StopRule::Proposed: return Designation::Proposed;
        case StopRule::FullyClassified: return Designation::FullyClassified;
        case StopRule::FScoreSampling: return Designation::FScoreSampling;
    }
    return Designation::None;
}

void parse_benchmark(const Json& j, ExperimentConfig& c) {
    require_object(j, "benchmark");
    reject_unknown(j, "benchmark");
    auto& b = c.benchmark;
    if (const Json* f = child(j, "function")) {
        try {
            b = bench::default_spec(bench::function_from_string(read_string(*f, "benchmark.function")));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("benchmark.function", e.what());
        }
    }
    with(j, "benchmark", "resolution", [&](const Json& v, const std::string& p) {
        b.resolution = static_cast<int>(read_integer(v, p));
    });
    with(j, "benchmark", "theta", [&](const Json& v, const std::string& p) { b.theta = read_number(v, p); });
    with(j, "benchmark", "noise_std",
         [&](const Json& v, const std::string& p) { b.noise_std = read_number(v, p); });
    with(j, "benchmark", "domain", [&](const Json& v, const std::string& p) {
        if (!v.is_array()) throw ConfigError(p, "expected [[lo, hi], ...]");
        b.domain.clear();
        for (const auto& axis : v) {
            if (!axis.is_array() || axis.size() != 2) throw ConfigError(p, "each axis must be [lo, hi]");
            b.domain.push_back({read_number(axis[0], p), read_number(axis[1], p)});
        }
    });
}

void parse_acquisition(const Json& j, ExperimentConfig& c) {
    require_object(j, "acquisition");
    reject_unknown(j, "acquisition");
    with(j, "acquisition", "kind", [&](const Json& v, const std::string& p) {
        try {
            c.acquisition.kind = acquisition_from_string(read_string(v, p));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(p, e.what());
        }
    });
    with(j, "acquisition", "beta", [&](const Json& v, const std::string& p) { c.acquisition.beta = read_number(v, p); });
    with(j, "acquisition", "allow_repeats",
         [&](const Json& v, const std::string& p) { c.acquisition.allow_repeats = read_bool(v, p); });
}

void parse_margin(const Json& j, ExperimentConfig& c) {
    require_object(j, "margin");
    reject_unknown(j, "margin");
    std::string kind = std::holds_alternative<FixedMargin>(c.margin) ? "fixed" : "adaptive";
    with(j, "margin", "kind", [&](const Json& v, const std::string& p) { kind = read_string(v, p); });
    if (kind == "adaptive") {
        AdaptiveMargin a{5, c.delta};
        if (const auto* prev = std::get_if<AdaptiveMargin>(&c.margin)) a = *prev;
        with(j, "margin", "L", [&](const Json& v, const std::string& p) { a.L = static_cast<int>(read_integer(v, p)); });
        if (child(j, "eps")) throw ConfigError("margin.eps", "only valid with kind = fixed");
        c.margin = a;
    } else if (kind == "fixed") {
        const Json* eps = child(j, "eps");
        if (!eps) throw ConfigError("margin.eps", "required when kind = fixed");
        if (child(j, "L")) throw ConfigError("margin.L", "only valid with kind = adaptive");
        c.margin = FixedMargin{read_number(*eps, "margin.eps")};
    } else {
        throw ConfigError("margin.kind", "expected adaptive or fixed");
    }
}

void parse_stopping(const Json& j, ExperimentConfig& c) {
    require_object(j, "stopping");
    reject_unknown(j, "stopping");
    with(j, "stopping", "designated",
         [&](const Json& v, const std::string& p) { c.designated = designation_from_string(read_string(v, p), p); });
    with(j, "stopping", "monitor", [&](const Json& v, const std::string& p) {
        if (!v.is_array()) throw ConfigError(p, "expected a list of rule names");
        c.monitor.clear();
        for (const auto& r : v) {
            const StopRule rule = rule_from_string(read_string(r, p), p);
            if (!c.monitors(rule)) c.monitor.push_back(rule);
        }
    });
}

void parse_fs(const Json& j, ExperimentConfig& c) {
    require_object(j, "fs");
    reject_unknown(j, "fs");
    with(j, "fs", "target_f", [&](const Json& v, const std::string& p) { c.fs.target_f = read_number(v, p); });
    with(j, "fs", "percentile", [&](const Json& v, const std::string& p) { c.fs.percentile = read_number(v, p); });
    with(j, "fs", "n_samples", [&](const Json& v, const std::string& p) {
        const auto n = read_integer(v, p);
        if (n < 0) throw ConfigError(p, "must be non-negative");
        c.fs.n_samples = static_cast<std::size_t>(n);
    });
}

void parse_gp(const Json& j, ExperimentConfig& c) {
    require_object(j, "gp");
    reject_unknown(j, "gp");
    with(j, "gp", "priors", [&](const Json& v, const std::string& p) { c.gp.priors = read_bool(v, p); });
    with(j, "gp", "restarts", [&](const Json& v, const std::string& p) {
        c.gp.restarts = static_cast<int>(read_integer(v, p));
    });
    with(j, "gp", "max_iterations", [&](const Json& v, const std::string& p) {
        c.gp.max_iterations = static_cast<int>(read_integer(v, p));
    });
    with(j, "gp", "tolerance", [&](const Json& v, const std::string& p) { c.gp.tolerance = read_number(v, p); });
    with(j, "gp", "init", [&](const Json& v, const std::string& p) {
        if (v.is_null()) {
            c.gp.init.reset();
            return;
        }
        require_object(v, p);
        for (auto it = v.begin(); it != v.end(); ++it)
            if (it.key() != "rho" && it.key() != "ell" && it.key() != "lambda")
                throw ConfigError(join(p, it.key()), "unknown key");
        gp::KernelHyperparams hp;
        for (const char* k : {"rho", "ell", "lambda"})
            if (!child(v, k)) throw ConfigError(join(p, k), "required");
        hp.rho = read_number(v.at("rho"), p + ".rho");
        hp.ell = read_number(v.at("ell"), p + ".ell");
        hp.lambda = read_number(v.at("lambda"), p + ".lambda");
        c.gp.init = hp;
    });
}

void parse_verify(const Json& j, ExperimentConfig& c) {
    require_object(j, "verify");
    reject_unknown(j, "verify");
    with(j, "verify", "cadence", [&](const Json& v, const std::string& p) {
        c.verify.cadence = static_cast<int>(read_integer(v, p));
    });
    with(j, "verify", "n_paths", [&](const Json& v, const std::string& p) {
        const auto n = read_integer(v, p);
        if (n < 0) throw ConfigError(p, "must be non-negative");
        c.verify.n_paths = static_cast<std::size_t>(n);
    });
    with(j, "verify", "midpoint_tweak",
         [&](const Json& v, const std::string& p) { c.verify.midpoint_tweak = read_bool(v, p); });
    with(j, "verify", "bound_offset",
         [&](const Json& v, const std::string& p) { c.verify.bound_offset = read_number(v, p); });
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    Json root;
    try {
        root = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
    }
    require_object(root, "<document>");
    reject_unknown(root, "");

    ExperimentConfig c;
    // Scalars first: the adaptive margin inherits delta.
    with(root, "", "delta", [&](const Json& v, const std::string& p) { c.delta = read_number(v, p); });
    with(root, "", "beta", [&](const Json& v, const std::string& p) { c.beta = read_number(v, p); });
    with(root, "", "budget", [&](const Json& v, const std::string& p) { c.budget = static_cast<int>(read_integer(v, p)); });
    with(root, "", "n_seeds", [&](const Json& v, const std::string& p) { c.n_seeds = static_cast<int>(read_integer(v, p)); });
    with(root, "", "seed", [&](const Json& v, const std::string& p) {
        if (!v.is_number_unsigned()) throw ConfigError(p, "expected a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    });
    with(root, "", "n_initial",
         [&](const Json& v, const std::string& p) { c.n_initial = static_cast<int>(read_integer(v, p)); });
    with(root, "", "refit", [&](const Json& v, const std::string& p) { c.refit = read_bool(v, p); });
    c.margin = AdaptiveMargin{5, c.delta};

    with(root, "", "benchmark", [&](const Json& v, const std::string&) { parse_benchmark(v, c); });
    with(root, "", "acquisition", [&](const Json& v, const std::string&) { parse_acquisition(v, c); });
    with(root, "", "margin", [&](const Json& v, const std::string&) { parse_margin(v, c); });
    with(root, "", "stopping", [&](const Json& v, const std::string&) { parse_stopping(v, c); });
    with(root, "", "fs", [&](const Json& v, const std::string&) { parse_fs(v, c); });
    with(root, "", "gp", [&](const Json& v, const std::string&) { parse_gp(v, c); });
    with(root, "", "verify", [&](const Json& v, const std::string&) { parse_verify(v, c); });

    c.validate();
    return c;
}

std::string to_json_text(const ExperimentConfig& c) {
    Json j;
    Json domain = Json::array();
    for (const auto& b : c.benchmark.domain) domain.push_back({b.lower, b.upper});
    j["benchmark"] = {{"function", bench::to_string(c.benchmark.function)},
                      {"resolution", c.benchmark.resolution},
                      {"theta", c.benchmark.theta},
                      {"noise_std", c.benchmark.noise_std},
                      {"domain", domain}};
    j["acquisition"] = {{"kind", to_string(c.acquisition.kind)},
                        {"beta", c.acquisition.beta},
                        {"allow_repeats", c.acquisition.allow_repeats}};
    if (const auto* f = std::get_if<FixedMargin>(&c.margin))
        j["margin"] = {{"kind", "fixed"}, {"eps", f->eps}};
    else
        j["margin"] = {{"kind", "adaptive"}, {"L", std::get<AdaptiveMargin>(c.margin).L}};
    Json monitor = Json::array();
    for (auto r : c.monitor) monitor.push_back(to_string(r));
    j["stopping"] = {{"designated", to_string(c.designated)}, {"monitor", monitor}};
    j["fs"] = {{"target_f", c.fs.target_f}, {"percentile", c.fs.percentile}, {"n_samples", c.fs.n_samples}};
    j["delta"] = c.delta;
    j["beta"] = c.beta;
    j["budget"] = c.budget;
    j["n_seeds"] = c.n_seeds;
    j["seed"] = c.seed;
    j["n_initial"] = c.n_initial;
    j["refit"] = c.refit;
    j["gp"] = {{"priors", c.gp.priors},
               {"restarts", c.gp.restarts},
               {"max_iterations", c.gp.max_iterations},
               {"tolerance", c.gp.tolerance}};
    if (c.gp.init)
        j["gp"]["init"] = {{"rho", c.gp.init->rho}, {"ell", c.gp.init->ell}, {"lambda", c.gp.init->lambda}};
    else
        j["gp"]["init"] = nullptr;
    j["verify"] = {{"cadence", c.verify.cadence},
                   {"n_paths", c.verify.n_paths},
                   {"midpoint_tweak", c.verify.midpoint_tweak},
                   {"bound_offset", c.verify.bound_offset}};
    return j.dump();
}

std::string config_reference() {
    std::ostringstream out;
    out << "| key | default | meaning |\n|---|---|---|\n";
    for (const auto& k : kKeys) out << "| `" << k.key << "` | " << k.default_value << " | " << k.meaning << " |\n";
    return out.str();
}

}  // namespace lse
