#include "lse/acquisition.hpp"

#include <cmath>
#include <stdexcept>

#include "lse/errors.hpp"

namespace lse {

void AcquisitionPolicy::validate() const {
    if (kind == AcquisitionKind::Straddle && !(beta > 0.0))
        throw std::invalid_argument("straddle beta must be positive");
}

std::string to_string(AcquisitionKind kind) {
    switch (kind) {
        case AcquisitionKind::Proposed: return "proposed";
        case AcquisitionKind::MisclassBaseline: return "misclass";
        case AcquisitionKind::Straddle: return "straddle";
        case AcquisitionKind::UncertaintySampling: return "us";
    }
    return "unknown";
}

AcquisitionKind acquisition_from_string(const std::string& name) {
    if (name == "proposed") return AcquisitionKind::Proposed;
    if (name == "misclass") return AcquisitionKind::MisclassBaseline;
    if (name == "straddle") return AcquisitionKind::Straddle;
    if (name == "us") return AcquisitionKind::UncertaintySampling;
    throw std::invalid_argument("unknown acquisition '" + name + "'");
}

double score(const AcquisitionPolicy& policy, const TriProbability& tp, double mu, double sigma, double theta) {
    if (policy.custom) return policy.custom(tp, mu, sigma, theta);
    switch (policy.kind) {
        case AcquisitionKind::Proposed: return tp.r_min();
        case AcquisitionKind::MisclassBaseline: return tp.p_min();
        case AcquisitionKind::Straddle: return policy.beta * sigma - std::fabs(mu - theta);
        case AcquisitionKind::UncertaintySampling: return sigma;
    }
    return 0.0;
}

std::size_t select_next(const AcquisitionPolicy& policy, std::span<const double> scores,
                        const std::set<std::size_t>& history) {
    std::size_t best = scores.size();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!policy.allow_repeats && history.contains(i)) continue;
        if (best == scores.size() || scores[i] > scores[best]) best = i;
    }
    if (best == scores.size()) throw ExhaustionError("no eligible candidate left to select");
    return best;
}

}  // namespace lse
