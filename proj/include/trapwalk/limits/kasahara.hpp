#pragma once

#include <functional>
#include <vector>

#include "trapwalk/limits/cadlag_step.hpp"
#include "trapwalk/svt/tail_function.hpp"

namespace trapwalk {

// Row n of a triangular array is iid with tail F̄_n; the reference tail F̄ sets
// the scaling L = 1/F̄. The comparison window is [c1 (g1 ∨ 1), c2 g2] with
// g_i(n) = F̄^-1(h_i(n)/n).
struct TriangularArraySpec {
    std::function<TailFunction(double)> row;
    TailFunction reference = TailFunction::log_power(1.0);
    std::function<double(double)> h1;
    std::function<double(double)> h2;
    double c1 = 1.0;
    double c2 = 1.0;
};

// Row law equal to the reference; h1 = ln n and h2 = 1/ln n.
TriangularArraySpec iid_array(const TailFunction& tail);

struct EpcondReport {
    bool degenerate = false;
    LogMagnitude lower = LogMagnitude::zero();
    LogMagnitude upper = LogMagnitude::zero();
    // max over the grid of |F̄(x)/F̄_n(x) - 1|
    double deviation = 0.0;
    bool passes(double epsilon) const { return !degenerate && deviation <= epsilon; }
};

// (1-ε) F̄_n <= F̄ <= (1+ε) F̄_n on a log-spaced grid over the window.
EpcondReport check_epcond(const TriangularArraySpec& spec, double n, std::size_t grid_size);

// t ↦ (1/n) L(S_{⌊nt⌋}) with S_m the partial sums of row n.
CadlagStep rescaled_sum_path(const TriangularArraySpec& spec, double n, const std::vector<double>& grid, Rng& rng);

}  // namespace trapwalk
