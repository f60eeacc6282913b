#include "trapwalk/treewalk/quenched_mean.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace trapwalk {

namespace {

constexpr std::size_t kSmallLeafSample = 4096;

void check_beta(double beta)
{
    if (!(beta > 1.0))
        throw std::invalid_argument("bias beta must exceed 1");
}

LogMagnitude floor_weight(std::size_t height, double beta)
{
    // (β^(h+1) - 1)/(β - 1)
    double lb = std::log(beta);
    double top = static_cast<double>(height + 1) * lb;
    return LogMagnitude::from_log(top + std::log(-std::expm1(-top)) - std::log(beta - 1.0));
}

}  // namespace

LogMagnitude subtree_weight(const ExplicitTree& tree, ExplicitTree::Vertex top, double beta)
{
    const double lb = std::log(beta);
    const int base = tree.depth(top);
    std::vector<double> counts;
    std::vector<ExplicitTree::Vertex> stack{top};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (!tree.expanded(v))
            throw std::logic_error("subtree weight needs a realized subtree");
        auto g = static_cast<std::size_t>(tree.depth(v) - base);
        if (counts.size() <= g)
            counts.resize(g + 1, 0.0);
        counts[g] += 1.0;
        for (std::uint32_t c = 0; c < tree.known_child_count(v); ++c)
            stack.push_back(tree.known_child(v, c));
    }
    LogMagnitude w = LogMagnitude::zero();
    for (std::size_t g = 0; g < counts.size(); ++g)
        if (counts[g] > 0.0)
            w += LogMagnitude::from_log(static_cast<double>(g) * lb + std::log(counts[g]));
    return w;
}

LogMagnitude vertex_weight(const ExplicitTree& tree, ExplicitTree::Vertex rho, ExplicitTree::Vertex skip, double beta)
{
    LogMagnitude w = LogMagnitude::zero();
    for (std::uint32_t c = 0; c < tree.known_child_count(rho); ++c) {
        auto b = tree.known_child(rho, c);
        if (b != skip)
            w += subtree_weight(tree, b, beta);
    }
    return w;
}

LogMagnitude sigma_from_weight(LogMagnitude weight, bool root, double beta)
{
    check_beta(beta);
    double factor = root ? 2.0 : 2.0 * beta / (1.0 + beta);
    return LogMagnitude::one() + LogMagnitude::from_value(factor) * weight;
}

LogMagnitude quenched_mean_sigma(const ExplicitTree& tree, ExplicitTree::Vertex rho, ExplicitTree::Vertex skip, bool root,
                                 double beta)
{
    return sigma_from_weight(vertex_weight(tree, rho, skip, beta), root, beta);
}

QuenchedMean quenched_mean_delta(const std::vector<LogMagnitude>& weights, double beta, const std::vector<bool>& lower_only)
{
    check_beta(beta);
    if (!lower_only.empty() && lower_only.size() != weights.size())
        throw std::invalid_argument("lower-bound flags must match the weights");
    QuenchedMean out;
    const LogMagnitude inv = LogMagnitude::from_value(1.0 / beta);
    const LogMagnitude two = LogMagnitude::from_value(2.0);
    LogMagnitude a = LogMagnitude::zero();
    LogMagnitude b = LogMagnitude::zero();
    LogMagnitude exact = LogMagnitude::zero();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out.lower += sigma_from_weight(weights[i], i == 0, beta);
        if (!lower_only.empty() && lower_only[i])
            out.capped = true;
        a = weights[i] + a * inv;
        if (i > 0)
            b = (LogMagnitude::one() + b) * inv;
        exact += LogMagnitude::one() + two * (a + b);
    }
    if (out.capped) {
        out.upper = LogMagnitude::from_log(std::numeric_limits<double>::infinity());
    } else {
        out.upper = LogMagnitude::from_value((beta + 1.0) / (beta - 1.0)) * out.lower;
        out.exact = exact;
    }
    return out;
}

QuenchedMean quenched_mean_delta(const ExplicitTree& tree, const std::vector<ExplicitTree::Vertex>& backbone, double beta)
{
    if (backbone.empty())
        throw std::invalid_argument("backbone path is empty");
    std::vector<LogMagnitude> w;
    for (std::size_t i = 0; i + 1 < backbone.size(); ++i) {
        if (tree.parent(backbone[i + 1]) != backbone[i])
            throw std::invalid_argument("backbone vertices must form a downward path");
        w.push_back(vertex_weight(tree, backbone[i], backbone[i + 1], beta));
    }
    return quenched_mean_delta(w, beta);
}

SpineWeights spine_weights(const SpinalSkeleton& spine, std::size_t n, double beta, Rng& rng)
{
    if (spine.length() < n)
        throw std::invalid_argument("spine shorter than the requested level");
    const SurvivalTable& t = spine.table();
    SpineWeights out;
    out.weights.resize(n, LogMagnitude::zero());
    out.lower_only.resize(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        LogMagnitude w = LogMagnitude::zero();
        auto heights = spine.heights(i);
        auto capped = spine.capped(i);
        for (std::size_t j = 0; j < heights.size(); ++j) {
            if (capped[j]) {
                w += floor_weight(heights[j], beta);
                out.lower_only[i] = true;
            } else if (heights[j] == 0) {
                w += LogMagnitude::one();
            } else {
                w += weighted_generation_sum(leaf_generation_sizes(t, heights[j], rng), beta);
            }
        }
        const auto& counts = spine.small_leaf_counts(i);
        for (std::size_t h = 0; h < counts.size(); ++h) {
            std::uint64_t c = counts[h];
            if (c == 0)
                continue;
            if (h == 0) {
                w += LogMagnitude::from_value(static_cast<double>(c));
                continue;
            }
            std::uint64_t draws = std::min<std::uint64_t>(c, kSmallLeafSample);
            LogMagnitude part = LogMagnitude::zero();
            for (std::uint64_t k = 0; k < draws; ++k)
                part += weighted_generation_sum(leaf_generation_sizes(t, h, rng), beta);
            if (draws < c) {
                part *= LogMagnitude::from_value(static_cast<double>(c) / static_cast<double>(draws));
                ++out.estimated;
            }
            w += part;
        }
        out.weights[i] = w;
    }
    return out;
}

QuenchedStat quenched_mean_rescaled_stat(std::shared_ptr<const SurvivalTable> table, double beta, std::size_t n, Rng& rng)
{
    check_beta(beta);
    if (n < 2)
        throw std::invalid_argument("quenched mean statistic needs n >= 2");
    const double alpha = table->law().alpha();
    SpinalSkeleton spine(table, critical_height(static_cast<double>(n)));
    spine.extend(n, rng);
    SpineWeights sw = spine_weights(spine, n, beta, rng);
    QuenchedStat out;
    out.mean = quenched_mean_delta(sw.weights, beta, sw.lower_only);
    out.estimated = sw.estimated;
    LogMagnitude centre = out.mean.exact ? *out.mean.exact : out.mean.lower;
    out.value = (alpha - 1.0) * std::max(0.0, centre.log_value()) / (static_cast<double>(n) * alpha * std::log(beta));
    return out;
}

}  // namespace trapwalk
