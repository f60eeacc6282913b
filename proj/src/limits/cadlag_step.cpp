#include "trapwalk/limits/cadlag_step.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trapwalk {

CadlagStep::CadlagStep(double initial, std::vector<double> times, std::vector<double> values, double horizon)
    : initial_(initial), horizon_(horizon)
{
    if (times.size() != values.size())
        throw std::invalid_argument("step function needs one value per jump time");
    if (!(horizon >= 0.0))
        throw std::invalid_argument("step function horizon must be nonnegative");
    double prev = -1.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        if (!(t > prev) || t > horizon)
            throw std::invalid_argument("jump times must be strictly increasing within [0, T]");
        prev = t;
        double current = values_.empty() ? initial_ : values_.back();
        if (t == 0.0) {
            initial_ = values[i];
            continue;
        }
        if (values[i] == current)
            continue;
        times_.push_back(t);
        values_.push_back(values[i]);
    }
}

double CadlagStep::operator()(double t) const
{
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin())
        return initial_;
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

bool CadlagStep::non_decreasing() const
{
    double prev = initial_;
    for (double v : values_) {
        if (v < prev)
            return false;
        prev = v;
    }
    return true;
}

CadlagStep step_from_grid(double initial, const std::vector<double>& grid, const std::vector<double>& values, double horizon)
{
    return CadlagStep(initial, grid, values, horizon);
}

}  // namespace trapwalk
