#include "lse/trace_io.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace lse {

using Json = nlohmann::ordered_json;

namespace {

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json record_json(const IterationRecord& r) {
    Json j;
    j["type"] = "iteration";
    j["iteration"] = r.iteration;
    j["n_observations"] = r.n_observations;
    j["selected"] = r.selected ? Json(*r.selected) : Json(nullptr);
    j["observed"] = r.observed ? Json(*r.observed) : Json(nullptr);
    j["hp"] = {{"rho", r.hp.rho}, {"ell", r.hp.ell}, {"lambda", r.hp.lambda}};
    j["fit_warning"] = r.fit_warning;
    j["eps"] = r.eps;
    j["f_score"] = r.f_score;
    j["bound"] = r.bound;
    j["proposed_stop"] = r.proposed_stop;
    j["fc_stop"] = r.fc_stop;
    j["fs_stop"] = r.fs_stop ? Json(*r.fs_stop) : Json(nullptr);
    j["fs_percentile"] = r.fs_percentile ? Json(*r.fs_percentile) : Json(nullptr);
    j["n_upper"] = r.n_upper;
    j["n_lower"] = r.n_lower;
    j["n_undetermined"] = r.n_undetermined;
    j["metric_bounds"] = {{"accuracy", r.metric_bounds.accuracy_lb},
                          {"precision", r.metric_bounds.precision_lb},
                          {"recall", r.metric_bounds.recall_lb},
                          {"specificity", r.metric_bounds.specificity_lb},
                          {"f_score", r.metric_bounds.f_score_lb}};
    if (r.verify)
        j["verify"] = {{"estimate", r.verify->estimate}, {"stderr", r.verify->std_error}};
    else
        j["verify"] = nullptr;
    return j;
}

void config_comment(std::ostream& out, const ExperimentConfig& config) {
    out << "# config=" << to_json_text(config) << '\n';
}

std::ostream& numeric(std::ostream& out) { return out << std::setprecision(17); }

}  // namespace

void write_trace(std::ostream& out, const ExperimentTrace& trace) {
    Json head;
    head["type"] = "config";
    head["seed"] = trace.seed;
    head["config"] = Json::parse(to_json_text(trace.config));
    head["initial"] = {{"indices", trace.initial_indices}, {"outputs", trace.initial_outputs}};
    out << head.dump() << '\n';
    for (const auto& r : trace.records) out << record_json(r).dump() << '\n';
    Json tail;
    tail["type"] = "summary";
    tail["n_records"] = trace.records.size();
    tail["stop_reason"] = trace.stop_reason;
    tail["first_proposed"] = optional_int(trace.first_proposed);
    tail["first_fc"] = optional_int(trace.first_fc);
    tail["first_fs"] = optional_int(trace.first_fs);
    if (!trace.error.empty()) tail["error"] = trace.error;
    out << tail.dump() << '\n';
}

std::string trace_to_string(const ExperimentTrace& trace) {
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<ExperimentTrace>& traces) {
    config_comment(out, config);
    out << "iteration,n_runs,f_mean,f_std,bound_mean,proposed_stops,fc_stops,fs_stops\n";
    numeric(out);
    for (const auto& r : summarize(traces))
        out << r.iteration << ',' << r.n_runs << ',' << r.f_mean << ',' << r.f_std << ',' << r.bound_mean << ','
            << r.proposed_stops << ',' << r.fc_stops << ',' << r.fs_stops << '\n';
}

void write_stop_times_csv(std::ostream& out, const ExperimentConfig& config,
                          const std::vector<ExperimentTrace>& traces) {
    config_comment(out, config);
    out << "seed,stop_reason,n_records,first_proposed,first_fc,first_fs,f_final\n";
    numeric(out);
    auto cell = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    for (const auto& t : traces) {
        out << t.seed << ',' << t.stop_reason << ',' << t.records.size() << ',' << cell(t.first_proposed) << ','
            << cell(t.first_fc) << ',' << cell(t.first_fs) << ',';
        if (!t.records.empty()) out << t.records.back().f_score;
        out << '\n';
    }
}

bool verify_record_ok(const IterationRecord& record, double bound_offset) {
    if (!record.verify) return true;
    return record.verify->estimate >= record.bound + bound_offset - 3.0 * record.verify->std_error;
}

void write_verify_csv(std::ostream& out, const ExperimentTrace& trace) {
    config_comment(out, trace.config);
    out << "iteration,estimate,stderr,bound,gap,ok\n";
    numeric(out);
    const double offset = trace.config.verify.bound_offset;
    for (const auto& r : trace.records) {
        if (!r.verify) continue;
        out << r.iteration << ',' << r.verify->estimate << ',' << r.verify->std_error << ',' << r.bound + offset
            << ',' << r.verify->estimate - (r.bound + offset) << ',' << (verify_record_ok(r, offset) ? 1 : 0)
            << '\n';
    }
}

void write_sweep_stop_table(std::ostream& out, const ExperimentConfig& base, SweepAxis axis,
                            const std::vector<SweepPoint>& points) {
    config_comment(out, base);
    out << to_string(axis) << ",rule,n_runs,n_stopped,mean_stop,std_stop,mean_f_at_stop\n";
    numeric(out);
    for (const auto& p : points) {
        for (StopRule rule : p.config.monitor) {
            const auto s = stop_statistics(p.traces, rule);
            out << p.value << ',' << to_string(rule) << ',' << s.n_runs << ',' << s.n_stopped << ',' << s.mean_stop
                << ',' << s.std_stop << ',' << s.mean_f_at_stop << '\n';
        }
    }
}

}  // namespace lse
