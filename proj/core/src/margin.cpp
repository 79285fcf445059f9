#include "lse/margin.hpp"

#include <cmath>
#include <stdexcept>

#include "lse/normal.hpp"

namespace lse {

void validate(const MarginPolicy& policy) {
    if (const auto* f = std::get_if<FixedMargin>(&policy)) {
        if (!(f->eps > 0.0)) throw std::invalid_argument("fixed margin eps must be positive");
        return;
    }
    const auto& a = std::get<AdaptiveMargin>(policy);
    if (a.L < 1) throw std::invalid_argument("adaptive margin L must be >= 1");
    if (!(a.delta > 0.0 && a.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

double sigma_L(double k_xx, double lambda, int L) {
    if (!(k_xx > 0.0) || !(lambda > 0.0) || L < 1)
        throw std::invalid_argument("sigma_L requires k_xx > 0, lambda > 0, L >= 1");
    const double noise_var = 1.0 / lambda;
    return std::sqrt(noise_var * k_xx / (noise_var + static_cast<double>(L) * k_xx));
}

double adaptive_eps(double k_xx, double lambda, int L, double delta, std::size_t n_candidates) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (n_candidates == 0) throw std::invalid_argument("adaptive_eps requires at least one candidate");
    // Upper-tail form keeps the tiny per-candidate probability exact.
    const double tail = (1.0 - delta) / (2.0 * static_cast<double>(n_candidates));
    return 2.0 * sigma_L(k_xx, lambda, L) * -normal::quantile(tail);
}

double margin_eps(const MarginPolicy& policy, double k_xx, double lambda, std::size_t n_candidates) {
    if (const auto* f = std::get_if<FixedMargin>(&policy)) return f->eps;
    const auto& a = std::get<AdaptiveMargin>(policy);
    return adaptive_eps(k_xx, lambda, a.L, a.delta, n_candidates);
}

}  // namespace lse
