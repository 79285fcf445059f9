#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lse/classification.hpp"

namespace lse {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + tn + fp + fn; }
};

/// Worst-case metric values implied by an eps-accurate triplet. Upper set is the positive class.
struct MetricBounds {
    double accuracy_lb = 1.0;
    double precision_lb = 1.0;
    double recall_lb = 1.0;
    double specificity_lb = 1.0;
    double f_score_lb = 1.0;
};

/// Indices with mu_i > theta (ties fall in the lower set).
std::vector<std::size_t> evaluation_prediction(std::span<const double> mu, double theta);

ConfusionCounts confusion(std::span<const std::size_t> pred_upper, std::span<const std::size_t> true_upper,
                          std::size_t n);

// All ratios below treat 0/0 as 1.
double f_score(const ConfusionCounts& c);
double accuracy(const ConfusionCounts& c);
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
double specificity(const ConfusionCounts& c);

/// 2TP / (2TP + FP + FN) over candidates 0..n-1.
double f_score(std::span<const std::size_t> pred_upper, std::span<const std::size_t> true_upper, std::size_t n);

/// True iff every upper member has f > theta, every lower member f <= theta and every
/// undetermined member -eps/2 < f - theta <= eps/2.
bool eps_accuracy(const ClassificationTriplet& triplet, std::span<const double> f_true, double theta, double eps);

MetricBounds metric_lower_bounds(const ClassificationTriplet& triplet);

}  // namespace lse
