#include "lse/classification.hpp"

#include <cmath>
#include <stdexcept>

#include "lse/errors.hpp"
#include "lse/normal.hpp"

namespace lse {

ClassificationTriplet classify_proposed(std::span<const TriProbability> tps) {
    ClassificationTriplet out;
    for (std::size_t i = 0; i < tps.size(); ++i) {
        const auto& tp = tps[i];
        if (tp.p_h >= tp.p_l && tp.p_h >= tp.p_u)
            out.upper.push_back(i);
        else if (tp.p_l >= tp.p_u)
            out.lower.push_back(i);
        else
            out.undetermined.push_back(i);
    }
    return out;
}

ClassificationTriplet classify_standard(std::span<const double> mu, std::span<const double> sigma, double theta,
                                        double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (mu.size() != sigma.size()) throw std::invalid_argument("mu and sigma differ in length");
    ClassificationTriplet out;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] - beta * sigma[i] > theta)
            out.upper.push_back(i);
        else if (mu[i] + beta * sigma[i] < theta)
            out.lower.push_back(i);
        else
            out.undetermined.push_back(i);
    }
    return out;
}

namespace {

constexpr double kMinTail = 1e-16;

// 1 - g(eps), from both tails directly.
double outside_margin(double mu, double sigma, double theta, double eps) {
    return normal::cdf((theta - 0.5 * eps - mu) / sigma) + normal::survival((theta + 0.5 * eps - mu) / sigma);
}

}  // namespace

double beta_cap() { return -normal::quantile(kMinTail); }

double eps_to_beta(double mu, double sigma, double theta, double eps) {
    if (!(sigma > 0.0)) throw std::invalid_argument("eps_to_beta requires sigma > 0");
    if (!(eps > 0.0)) throw std::invalid_argument("eps_to_beta requires eps > 0");
    const double tail = outside_margin(mu, sigma, theta, eps);
    if (tail < kMinTail) return beta_cap();
    return -normal::quantile(tail);
}

double beta_to_eps(double mu, double sigma, double theta, double beta) {
    if (!(sigma > 0.0)) throw std::invalid_argument("beta_to_eps requires sigma > 0");
    const double target_tail = normal::survival(beta);  // 1 - Phi(beta)
    if (!(normal::cdf(beta) < 1.0) || target_tail <= 0.0)
        throw RangeError("Phi(beta) is numerically 1; no finite margin attains it");
    if (target_tail >= 1.0) return 0.0;

    double lo = 0.0;
    double hi = 2.0 * (std::fabs(theta - mu) + 10.0 * sigma);
    while (outside_margin(mu, sigma, theta, hi) > target_tail) {
        hi *= 2.0;
        if (!std::isfinite(hi)) throw RangeError("beta_to_eps: bracket overflow");
    }
    // The tail is decreasing in eps; bisect until the bracket stops shrinking.
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (outside_margin(mu, sigma, theta, mid) > target_tail)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace lse
