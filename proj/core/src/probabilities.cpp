#include "lse/probabilities.hpp"

#include <algorithm>
#include <stdexcept>

#include "lse/normal.hpp"

namespace lse {

double TriProbability::r_min() const noexcept { return std::min({p_h, p_l, p_not_u}); }

double TriProbability::r_max() const noexcept { return std::max({p_h, p_l, p_u}); }

namespace {

void require_margin(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("margin eps must be positive");
}

}  // namespace

TriProbability class_probs(double mu, double sigma, double theta, double eps) {
    require_margin(eps);
    TriProbability tp;
    if (sigma <= 0.0) {
        const double gap = mu - theta;
        const bool upper = gap > 0.0;
        const bool inside = gap > -0.5 * eps && gap <= 0.5 * eps;
        tp.p_h = upper ? 1.0 : 0.0;
        tp.p_l = upper ? 0.0 : 1.0;
        tp.p_u = inside ? 1.0 : 0.0;
        tp.p_not_u = inside ? 0.0 : 1.0;
        return tp;
    }
    const double z = (theta - mu) / sigma;
    const double lo = (theta - 0.5 * eps - mu) / sigma;
    const double hi = (theta + 0.5 * eps - mu) / sigma;
    tp.p_l = normal::cdf(z);
    tp.p_h = normal::survival(z);
    tp.p_not_u = normal::cdf(lo) + normal::survival(hi);
    // Difference of the tail that is small for this interval.
    tp.p_u = hi <= 0.0 ? normal::cdf(hi) - normal::cdf(lo)
           : lo >= 0.0 ? normal::survival(lo) - normal::survival(hi)
                       : 1.0 - tp.p_not_u;
    tp.p_u = std::clamp(tp.p_u, 0.0, 1.0);
    return tp;
}

FourBin four_bin(double mu, double sigma, double theta, double eps) {
    require_margin(eps);
    FourBin fb;
    if (sigma <= 0.0) {
        const double gap = mu - theta;
        if (gap <= -0.5 * eps)
            fb.p00 = 1.0;
        else if (gap <= 0.0)
            fb.p01 = 1.0;
        else if (gap <= 0.5 * eps)
            fb.p11 = 1.0;
        else
            fb.p10 = 1.0;
        return fb;
    }
    const double z = (theta - mu) / sigma;
    const double lo = (theta - 0.5 * eps - mu) / sigma;
    const double hi = (theta + 0.5 * eps - mu) / sigma;
    fb.p00 = normal::cdf(lo);
    fb.p10 = normal::survival(hi);
    fb.p01 = std::max(0.0, z <= 0.0 ? normal::cdf(z) - fb.p00 : normal::survival(lo) - normal::survival(z));
    fb.p11 = std::max(0.0, hi <= 0.0 ? normal::cdf(hi) - normal::cdf(z) : normal::survival(z) - fb.p10);
    return fb;
}

TriProbability with_undetermined_prob(TriProbability tp, double p_u) {
    tp.p_u = p_u;
    tp.p_not_u = 1.0 - p_u;
    return tp;
}

GammaEta gamma_eta(const TriProbability& tp, bool midpoint_tweak) {
    const double base = midpoint_tweak ? 0.5 * (tp.p_min() + tp.p_max()) : tp.p_min();
    return {std::max(base, tp.p_u), tp.p_u - tp.p_max() > 0.0 ? 1 : 0};
}

}  // namespace lse
