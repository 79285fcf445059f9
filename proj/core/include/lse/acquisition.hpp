#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lse/probabilities.hpp"

namespace lse {

enum class AcquisitionKind {
    Proposed,          // r_min(x)
    MisclassBaseline,  // p_min(x)
    Straddle,          // beta * sigma - |mu - theta|
    UncertaintySampling,
};

/// Extension point for acquisition rules outside the built-in set.
using CustomScore = std::function<double(const TriProbability& tp, double mu, double sigma, double theta)>;

struct AcquisitionPolicy {
    AcquisitionKind kind = AcquisitionKind::Proposed;
    double beta = 1.96;  // Straddle only
    bool allow_repeats = true;
    CustomScore custom;  // overrides `kind` when set

    void validate() const;
};

std::string to_string(AcquisitionKind kind);
AcquisitionKind acquisition_from_string(const std::string& name);

double score(const AcquisitionPolicy& policy, const TriProbability& tp, double mu, double sigma, double theta);

/// Argmax over eligible candidates; ties go to the lowest index. Without repeats, indices in
/// `history` are ineligible. Throws ExhaustionError when nothing is eligible.
std::size_t select_next(const AcquisitionPolicy& policy, std::span<const double> scores,
                        const std::set<std::size_t>& history);

}  // namespace lse
