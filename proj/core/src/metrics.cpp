#include "lse/metrics.hpp"

#include <stdexcept>

namespace lse {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 1.0 : num / den; }

std::vector<char> membership(std::span<const std::size_t> idx, std::size_t n) {
    std::vector<char> m(n, 0);
    for (std::size_t i : idx) {
        if (i >= n) throw std::out_of_range("index outside candidate set");
        m[i] = 1;
    }
    return m;
}

}  // namespace

std::vector<std::size_t> evaluation_prediction(std::span<const double> mu, double theta) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] > theta) out.push_back(i);
    return out;
}

ConfusionCounts confusion(std::span<const std::size_t> pred_upper, std::span<const std::size_t> true_upper,
                          std::size_t n) {
    const auto pred = membership(pred_upper, n);
    const auto truth = membership(true_upper, n);
    ConfusionCounts c;
    for (std::size_t i = 0; i < n; ++i) {
        if (pred[i] && truth[i]) ++c.tp;
        else if (pred[i]) ++c.fp;
        else if (truth[i]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double f_score(const ConfusionCounts& c) {
    return ratio(2.0 * static_cast<double>(c.tp), static_cast<double>(2 * c.tp + c.fp + c.fn));
}
double accuracy(const ConfusionCounts& c) {
    return ratio(static_cast<double>(c.tp + c.tn), static_cast<double>(c.total()));
}
double precision(const ConfusionCounts& c) {
    return ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
}
double recall(const ConfusionCounts& c) { return ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn)); }
double specificity(const ConfusionCounts& c) {
    return ratio(static_cast<double>(c.tn), static_cast<double>(c.tn + c.fp));
}

double f_score(std::span<const std::size_t> pred_upper, std::span<const std::size_t> true_upper, std::size_t n) {
    return f_score(confusion(pred_upper, true_upper, n));
}

bool eps_accuracy(const ClassificationTriplet& triplet, std::span<const double> f_true, double theta, double eps) {
    for (std::size_t i : triplet.upper)
        if (!(f_true[i] > theta)) return false;
    for (std::size_t i : triplet.lower)
        if (!(f_true[i] <= theta)) return false;
    for (std::size_t i : triplet.undetermined) {
        const double gap = f_true[i] - theta;
        if (!(gap > -0.5 * eps && gap <= 0.5 * eps)) return false;
    }
    return true;
}

MetricBounds metric_lower_bounds(const ClassificationTriplet& triplet) {
    const double h = static_cast<double>(triplet.upper.size());
    const double l = static_cast<double>(triplet.lower.size());
    const double u = static_cast<double>(triplet.undetermined.size());
    MetricBounds b;
    b.accuracy_lb = ratio(h + l, h + l + u);
    b.precision_lb = ratio(h, h + u);
    b.recall_lb = b.precision_lb;
    b.specificity_lb = ratio(l, l + u);
    b.f_score_lb = ratio(2.0 * h, 2.0 * h + u);
    return b;
}

}  // namespace lse
