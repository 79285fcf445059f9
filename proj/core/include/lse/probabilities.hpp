#pragma once

namespace lse {

/// Class membership probabilities of one candidate under its Gaussian posterior.
///
/// The gap f(x) - theta is split at 0 (upper vs lower) and by the half-open margin
/// (-eps/2, eps/2] (undetermined). `p_not_u` is computed directly from both tails rather
/// than as 1 - p_u, so small values keep their relative accuracy in the stopping sum.
struct TriProbability {
    double p_h = 0.5;
    double p_l = 0.5;
    double p_u = 0.0;
    double p_not_u = 1.0;

    double p_min() const noexcept { return p_h < p_l ? p_h : p_l; }
    double p_max() const noexcept { return p_h < p_l ? p_l : p_h; }
    /// min(p_h, p_l, 1 - p_u); the acquisition score and the per-candidate bound term.
    double r_min() const noexcept;
    /// max(p_h, p_l, p_u); the classification score.
    double r_max() const noexcept;
};

/// Joint law of the sign and margin indicators: f <= theta - eps/2, (theta - eps/2, theta],
/// (theta, theta + eps/2], f > theta + eps/2.
struct FourBin {
    double p00 = 0.0;
    double p01 = 0.0;
    double p11 = 0.0;
    double p10 = 0.0;
};

/// sigma == 0 is treated as a point mass at mu.
TriProbability class_probs(double mu, double sigma, double theta, double eps);

FourBin four_bin(double mu, double sigma, double theta, double eps);

/// Same probabilities with p_u replaced by `p_u` (and p_not_u by 1 - p_u).
TriProbability with_undetermined_prob(TriProbability tp, double p_u);

struct GammaEta {
    double gamma = 0.0;
    int eta = 0;
};

/// gamma = max(p_min, p_u), eta = 1 iff p_u > p_max. With `midpoint_tweak`, gamma uses
/// (p_min + p_max) / 2 in place of p_min, which avoids testing |z - E z| <= p_min by equality.
GammaEta gamma_eta(const TriProbability& tp, bool midpoint_tweak = false);

}  // namespace lse
