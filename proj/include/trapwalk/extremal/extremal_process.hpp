#pragma once

#include <vector>

#include "trapwalk/limits/cadlag_step.hpp"
#include "trapwalk/random.hpp"

namespace trapwalk {

// Running maximum m of a Poisson point process with intensity x^-2 dx dt, kept as its records.
struct ExtremalPath {
    std::vector<double> record_times;
    std::vector<double> record_values;
    double horizon = 0.0;

    double operator()(double t) const;
    CadlagStep as_step() const;
};

// m^-1(t) = inf{s : m(s) > t}. Past the last record the value is the
// horizon-cap sentinel, the smallest double above the horizon.
struct InversePath {
    CadlagStep path;
    double sentinel = 0.0;
    double operator()(double t) const { return path(t); }
};

// P(m(t) <= x) = exp(-t/x)
double marginal_cdf(double t, double x);

// Exact joint law of m on the grid via max-stability.
ExtremalPath sample_on_grid(const std::vector<double>& times, Rng& rng);

InversePath invert_path(const ExtremalPath& p);

// Cross-check sampler: thins the point process to atoms above `epsilon`.
// Biased: m(t) is reported as 0 with probability exp(-t/epsilon).
ExtremalPath sample_truncated(double horizon, double epsilon, Rng& rng);

}  // namespace trapwalk
