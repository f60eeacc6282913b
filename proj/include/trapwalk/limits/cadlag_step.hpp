#pragma once

#include <cstddef>
#include <vector>

namespace trapwalk {

// Right-continuous step function on [0, T]: `initial` until times[0], then values[i] on [times[i], times[i+1]).
// A jump listed at time 0 is folded into the initial value; repeated values are coalesced.
class CadlagStep {
public:
    CadlagStep() = default;
    CadlagStep(double initial, std::vector<double> times, std::vector<double> values, double horizon);
    static CadlagStep constant(double value, double horizon) { return CadlagStep(value, {}, {}, horizon); }

    double operator()(double t) const;
    double initial() const { return initial_; }
    const std::vector<double>& jump_times() const { return times_; }
    const std::vector<double>& jump_values() const { return values_; }
    double horizon() const { return horizon_; }
    std::size_t jump_count() const { return times_.size(); }
    double final_value() const { return values_.empty() ? initial_ : values_.back(); }
    bool non_decreasing() const;

private:
    double initial_ = 0.0;
    std::vector<double> times_;
    std::vector<double> values_;
    double horizon_ = 0.0;
};

// Samples a right-continuous path on an increasing grid: value[k] holds on [grid[k], grid[k+1]).
CadlagStep step_from_grid(double initial, const std::vector<double>& grid, const std::vector<double>& values, double horizon);

}  // namespace trapwalk
