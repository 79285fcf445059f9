#pragma once

namespace lse::normal {

/// Standard normal CDF, evaluated through erfc so both tails keep full relative accuracy.
double cdf(double x);

/// Upper tail 1 - cdf(x), without cancellation.
double survival(double x);

/// Standard normal density.
double pdf(double x);

/// Inverse CDF (Wichura AS241, about 1e-16 relative). Returns -inf/+inf at p = 0/1
/// and NaN outside [0, 1].
double quantile(double p);

}  // namespace lse::normal
