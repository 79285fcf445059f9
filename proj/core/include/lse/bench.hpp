#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lse/gp.hpp"

namespace lse::bench {

enum class Function { Sphere, Rosenbrock, Branin, Booth, CrossInTray, HolderTable };

std::string to_string(Function f);
Function function_from_string(const std::string& name);

struct Bounds {
    double lower = 0.0;
    double upper = 1.0;
};

struct BenchmarkSpec {
    Function function = Function::Sphere;
    int resolution = 20;          // grid points per axis
    std::vector<Bounds> domain;   // one entry per axis
    double theta = 0.0;
    double noise_std = 0.0;

    void validate() const;
};

/// Standard 2-D domain of each function.
std::vector<Bounds> default_domain(Function f);

/// Threshold and noise level used for each function in the reference experiments.
std::pair<double, double> default_theta_noise(Function f);

/// Spec with default domain, threshold, noise and a 20-point-per-axis grid.
BenchmarkSpec default_spec(Function f);

/// Exact function value. Throws DomainError outside the spec's domain.
double eval_true(const BenchmarkSpec& spec, const gp::InputPoint& x);

/// Row-major lattice of resolution^d points with both endpoints included; the first axis varies slowest.
std::vector<gp::InputPoint> make_grid(const BenchmarkSpec& spec);

/// Maps grid points to the unit cube.
std::vector<gp::InputPoint> normalize(const BenchmarkSpec& spec, const std::vector<gp::InputPoint>& points);

/// eval_true plus N(0, noise_std^2) drawn from `stream`.
double observe(const BenchmarkSpec& spec, const gp::InputPoint& x, std::mt19937_64& stream);

}  // namespace lse::bench
