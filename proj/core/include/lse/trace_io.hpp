#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "lse/runner.hpp"

namespace lse {

/// JSON Lines: a config line, one line per iteration, and a closing summary line.
void write_trace(std::ostream& out, const ExperimentTrace& trace);
std::string trace_to_string(const ExperimentTrace& trace);

// CSV tables start with a "# config=<json>" comment, then a header row.
void write_summary_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<ExperimentTrace>& traces);
void write_stop_times_csv(std::ostream& out, const ExperimentConfig& config,
                          const std::vector<ExperimentTrace>& traces);
/// iteration, estimate, stderr, bound, gap, ok for every verified record of one trace.
void write_verify_csv(std::ostream& out, const ExperimentTrace& trace);
/// Stop statistics for every value of a sweep.
void write_sweep_stop_table(std::ostream& out, const ExperimentConfig& base, SweepAxis axis,
                            const std::vector<SweepPoint>& points);

/// Whether a verified record satisfies estimate >= bound + offset - 3 stderr.
bool verify_record_ok(const IterationRecord& record, double bound_offset);

}  // namespace lse
