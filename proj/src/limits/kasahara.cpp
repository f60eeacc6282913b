#include "trapwalk/limits/kasahara.hpp"

#include <cmath>
#include <stdexcept>

namespace trapwalk {

TriangularArraySpec iid_array(const TailFunction& tail)
{
    TriangularArraySpec s;
    s.row = [tail](double) { return tail; };
    s.reference = tail;
    s.h1 = [](double n) { return std::log(n); };
    s.h2 = [](double n) { return 1.0 / std::log(n); };
    return s;
}

EpcondReport check_epcond(const TriangularArraySpec& spec, double n, std::size_t grid_size)
{
    if (grid_size < 10)
        throw std::invalid_argument("epcond grid needs at least 10 points");
    if (!(n > 1.0))
        throw std::invalid_argument("epcond needs n > 1");
    EpcondReport r;
    LogMagnitude g1 = spec.reference.inverse(spec.h1(n) / n);
    LogMagnitude g2 = spec.reference.inverse(spec.h2(n) / n);
    r.lower = LogMagnitude::from_value(spec.c1) * std::max(g1, LogMagnitude::one());
    r.upper = LogMagnitude::from_value(spec.c2) * g2;
    if (!(r.lower < r.upper)) {
        r.degenerate = true;
        return r;
    }
    TailFunction row = spec.row(n);
    const double a = r.lower.log_value();
    const double b = r.upper.log_value();
    for (std::size_t k = 0; k < grid_size; ++k) {
        double lx = a + (b - a) * static_cast<double>(k) / static_cast<double>(grid_size - 1);
        LogMagnitude x = LogMagnitude::from_log(lx);
        double ref = spec.reference.survival(x);
        double fn = row.survival(x);
        double dev = fn > 0.0 ? std::abs(ref / fn - 1.0) : (ref > 0.0 ? INFINITY : 0.0);
        r.deviation = std::max(r.deviation, dev);
    }
    return r;
}

CadlagStep rescaled_sum_path(const TriangularArraySpec& spec, double n, const std::vector<double>& grid, Rng& rng)
{
    if (grid.empty() || grid.front() < 0.0)
        throw std::invalid_argument("grid must be nonempty and nonnegative");
    TailFunction row = spec.row(n);
    const auto terms = static_cast<std::size_t>(std::floor(n * grid.back() + 1e-9));
    std::vector<LogMagnitude> partial(terms + 1, LogMagnitude::zero());
    for (std::size_t m = 1; m <= terms; ++m)
        partial[m] = partial[m - 1] + row.sample(rng);
    std::vector<double> values;
    values.reserve(grid.size());
    for (double t : grid) {
        auto m = static_cast<std::size_t>(std::floor(n * t + 1e-9));
        values.push_back(spec.reference.L(partial[m]) / n);
    }
    return CadlagStep(spec.reference.L(LogMagnitude::zero()) / n, grid, values, grid.back());
}

}  // namespace trapwalk
