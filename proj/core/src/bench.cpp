#include "lse/bench.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lse/errors.hpp"

namespace lse::bench {

std::string to_string(Function f) {
    switch (f) {
        case Function::Sphere: return "sphere";
        case Function::Rosenbrock: return "rosenbrock";
        case Function::Branin: return "branin";
        case Function::Booth: return "booth";
        case Function::CrossInTray: return "cross_in_tray";
        case Function::HolderTable: return "holder_table";
    }
    return "unknown";
}

Function function_from_string(const std::string& name) {
    for (auto f : {Function::Sphere, Function::Rosenbrock, Function::Branin, Function::Booth,
                   Function::CrossInTray, Function::HolderTable})
        if (to_string(f) == name) return f;
    throw std::invalid_argument("unknown benchmark function '" + name + "'");
}

void BenchmarkSpec::validate() const {
    if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
    if (domain.empty()) throw std::invalid_argument("domain must have at least one axis");
    if (domain.size() != 2) throw std::invalid_argument("benchmark functions are two-dimensional");
    for (const auto& b : domain)
        if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower < b.upper))
            throw std::invalid_argument("domain bounds must be finite with lower < upper");
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw std::invalid_argument("noise_std must be >= 0");
}

std::vector<Bounds> default_domain(Function f) {
    switch (f) {
        case Function::Sphere: return {{-5.12, 5.12}, {-5.12, 5.12}};
        case Function::Rosenbrock: return {{-2.048, 2.048}, {-2.048, 2.048}};
        case Function::Branin: return {{-5.0, 10.0}, {0.0, 15.0}};
        case Function::Booth:
        case Function::CrossInTray:
        case Function::HolderTable: return {{-10.0, 10.0}, {-10.0, 10.0}};
    }
    return {};
}

std::pair<double, double> default_theta_noise(Function f) {
    switch (f) {
        case Function::Sphere: return {20.0, 2.0};
        case Function::Rosenbrock: return {100.0, 30.0};
        case Function::Branin: return {100.0, 20.0};
        case Function::Booth: return {500.0, 30.0};
        case Function::CrossInTray: return {-1.5, 0.01};
        case Function::HolderTable: return {-3.0, 0.3};
    }
    return {0.0, 0.0};
}

BenchmarkSpec default_spec(Function f) {
    const auto [theta, noise] = default_theta_noise(f);
    return {f, 20, default_domain(f), theta, noise};
}

namespace {

double evaluate(Function f, double x1, double x2) {
    using std::numbers::pi;
    switch (f) {
        case Function::Sphere: return x1 * x1 + x2 * x2;
        case Function::Rosenbrock: return 100.0 * std::pow(x2 - x1 * x1, 2) + std::pow(x1 - 1.0, 2);
        case Function::Branin: {
            const double b = 5.1 / (4.0 * pi * pi);
            const double c = 5.0 / pi;
            const double t = 1.0 / (8.0 * pi);
            return std::pow(x2 - b * x1 * x1 + c * x1 - 6.0, 2) + 10.0 * (1.0 - t) * std::cos(x1) + 10.0;
        }
        case Function::Booth: return std::pow(x1 + 2.0 * x2 - 7.0, 2) + std::pow(2.0 * x1 + x2 - 5.0, 2);
        case Function::CrossInTray: {
            const double r = std::sqrt(x1 * x1 + x2 * x2);
            const double inner = std::fabs(std::sin(x1) * std::sin(x2) * std::exp(std::fabs(100.0 - r / pi)));
            return -0.0001 * std::pow(inner + 1.0, 0.1);
        }
        case Function::HolderTable: {
            const double r = std::sqrt(x1 * x1 + x2 * x2);
            return -std::fabs(std::sin(x1) * std::cos(x2) * std::exp(std::fabs(1.0 - r / pi)));
        }
    }
    return 0.0;
}

}  // namespace

double eval_true(const BenchmarkSpec& spec, const gp::InputPoint& x) {
    if (x.dim() != spec.domain.size()) throw DomainError("input dimension does not match the benchmark domain");
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const auto& b = spec.domain[i];
        const double slack = 1e-12 * (b.upper - b.lower);
        if (!(x.coords[i] >= b.lower - slack && x.coords[i] <= b.upper + slack))
            throw DomainError("input outside the domain of " + to_string(spec.function));
    }
    return evaluate(spec.function, x.coords[0], x.coords[1]);
}

std::vector<gp::InputPoint> make_grid(const BenchmarkSpec& spec) {
    spec.validate();
    const std::size_t d = spec.domain.size();
    const auto n = static_cast<std::size_t>(spec.resolution);
    std::vector<std::vector<double>> axes(d);
    for (std::size_t a = 0; a < d; ++a) {
        const auto& b = spec.domain[a];
        for (std::size_t i = 0; i < n; ++i)
            axes[a].push_back(i + 1 == n ? b.upper
                                         : b.lower + (b.upper - b.lower) * static_cast<double>(i) /
                                                         static_cast<double>(n - 1));
    }
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) total *= n;

    std::vector<gp::InputPoint> grid;
    grid.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        gp::InputPoint p;
        p.coords.resize(d);
        std::size_t rem = k;
        for (std::size_t a = d; a-- > 0;) {
            p.coords[a] = axes[a][rem % n];
            rem /= n;
        }
        grid.push_back(std::move(p));
    }
    return grid;
}

std::vector<gp::InputPoint> normalize(const BenchmarkSpec& spec, const std::vector<gp::InputPoint>& points) {
    std::vector<gp::InputPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        gp::InputPoint q;
        q.coords.resize(p.dim());
        for (std::size_t a = 0; a < p.dim(); ++a) {
            const auto& b = spec.domain[a];
            q.coords[a] = (p.coords[a] - b.lower) / (b.upper - b.lower);
        }
        out.push_back(std::move(q));
    }
    return out;
}

double observe(const BenchmarkSpec& spec, const gp::InputPoint& x, std::mt19937_64& stream) {
    const double f = eval_true(spec, x);
    if (spec.noise_std == 0.0) return f;
    std::normal_distribution<double> noise(0.0, spec.noise_std);
    return f + noise(stream);
}

}  // namespace lse::bench
