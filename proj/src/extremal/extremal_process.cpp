#include "trapwalk/extremal/extremal_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace trapwalk {

namespace {

// Fréchet with scale t: CDF exp(-t/x).
double frechet(double scale, Rng& rng)
{
    double u;
    do {
        u = uniform01(rng);
    } while (u == 0.0);
    return -scale / std::log(u);
}

}  // namespace

double ExtremalPath::operator()(double t) const
{
    auto it = std::upper_bound(record_times.begin(), record_times.end(), t);
    if (it == record_times.begin())
        return 0.0;
    return record_values[static_cast<std::size_t>(it - record_times.begin()) - 1];
}

CadlagStep ExtremalPath::as_step() const { return CadlagStep(0.0, record_times, record_values, horizon); }

double marginal_cdf(double t, double x)
{
    if (x <= 0.0)
        return 0.0;
    return std::exp(-t / x);
}

ExtremalPath sample_on_grid(const std::vector<double>& times, Rng& rng)
{
    if (times.empty())
        throw std::invalid_argument("extremal grid is empty");
    ExtremalPath p;
    double prev_t = 0.0, current = 0.0;
    for (double t : times) {
        if (!(t > prev_t))
            throw std::invalid_argument("extremal grid must be positive and strictly increasing");
        double m = frechet(t - prev_t, rng);
        if (m > current) {
            current = m;
            p.record_times.push_back(t);
            p.record_values.push_back(m);
        }
        prev_t = t;
    }
    p.horizon = times.back();
    return p;
}

InversePath invert_path(const ExtremalPath& p)
{
    InversePath inv;
    inv.sentinel = std::nextafter(p.horizon, std::numeric_limits<double>::infinity());
    if (p.record_times.empty()) {
        inv.path = CadlagStep::constant(inv.sentinel, 0.0);
        return inv;
    }
    std::vector<double> at, value;
    for (std::size_t i = 0; i < p.record_values.size(); ++i) {
        at.push_back(p.record_values[i]);
        value.push_back(i + 1 < p.record_times.size() ? p.record_times[i + 1] : inv.sentinel);
    }
    inv.path = CadlagStep(p.record_times.front(), std::move(at), std::move(value), p.record_values.back());
    return inv;
}

ExtremalPath sample_truncated(double horizon, double epsilon, Rng& rng)
{
    if (!(horizon > 0.0) || !(epsilon > 0.0))
        throw std::invalid_argument("truncated sampler needs positive horizon and epsilon");
    std::poisson_distribution<long long> count(horizon / epsilon);
    long long k = count(rng);
    std::vector<std::pair<double, double>> atoms;
    for (long long i = 0; i < k; ++i) {
        double t = horizon * uniform_open(rng);
        double x = epsilon / uniform_open(rng);
        atoms.emplace_back(t, x);
    }
    std::sort(atoms.begin(), atoms.end());
    ExtremalPath p;
    p.horizon = horizon;
    double current = 0.0;
    for (auto [t, x] : atoms) {
        if (x > current) {
            current = x;
            p.record_times.push_back(t);
            p.record_values.push_back(x);
        }
    }
    return p;
}

}  // namespace trapwalk
