#include "trapwalk/treewalk/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace trapwalk {

namespace {

constexpr std::size_t kMaxLocalizationSearch = 2'000'000'000ULL;

void check_beta(double beta)
{
    if (!(beta > 1.0))
        throw std::invalid_argument("bias beta must exceed 1");
}

}  // namespace

std::vector<std::uint32_t> sample_visited_set(std::uint32_t b, Rng& rng)
{
    auto size = static_cast<std::uint32_t>(uniform01(rng) * (b + 1.0));
    size = std::min(size, b);
    std::vector<std::uint32_t> all(b);
    std::iota(all.begin(), all.end(), 0u);
    // partial Fisher-Yates
    for (std::uint32_t k = 0; k < size; ++k) {
        auto r = k + static_cast<std::uint32_t>(uniform01(rng) * (b - k));
        std::swap(all[k], all[std::min(r, b - 1)]);
    }
    all.resize(size);
    std::sort(all.begin(), all.end());
    return all;
}

double visited_set_probability(std::uint32_t b, std::uint32_t subset_size)
{
    if (subset_size > b)
        return 0.0;
    double log_binom = std::lgamma(b + 1.0) - std::lgamma(subset_size + 1.0) - std::lgamma(b - subset_size + 1.0);
    return std::exp(-std::log(b + 1.0) - log_binom);
}

double visited_height_tail(const SurvivalTable& table, std::size_t x, double critical_height)
{
    if (static_cast<double>(x) < critical_height)
        throw std::domain_error("visited height tail needs x >= h_n");
    double q = table.q(x);
    if (q >= 1.0)
        throw std::domain_error("visited height tail needs q_x < 1");
    // q^(α-1) L(q) = gap(q)/q
    return table.law().gap(q) / q;
}

double full_height_tail(const SurvivalTable& table, std::size_t x) { return table.law().derivative_deficit(table.q(x)); }

VisitedSpine::VisitedSpine(std::shared_ptr<const SurvivalTable> table, double critical_height, std::uint64_t seed)
    : spine_(std::move(table), critical_height), rng_(derive_seed(seed, 0, StreamTag::spine))
{
}

long VisitedSpine::max_visited(std::size_t i)
{
    while (best_.size() <= i) {
        std::size_t k = best_.size();
        spine_.extend(k + 1, rng_);
        auto heights = spine_.heights(k);
        auto big = spine_.big_leaves(k);
        long best = -1;
        for (std::uint32_t j : sample_visited_set(static_cast<std::uint32_t>(big.size()), rng_))
            best = std::max<long>(best, heights[big[j]]);
        best_.push_back(best);
    }
    return best_[i];
}

TreeHittingRecord surrogate_hitting_path(std::shared_ptr<const SurvivalTable> table, double beta, long n,
                                         const std::vector<double>& grid, std::uint64_t seed)
{
    check_beta(beta);
    if (n < 10)
        throw std::invalid_argument("surrogate hitting path needs n >= 10");
    if (grid.empty() || grid.front() < 0.0)
        throw std::invalid_argument("grid must be nonempty and nonnegative");
    const double alpha = table->law().alpha();
    const auto levels = static_cast<std::size_t>(std::floor(static_cast<double>(n) * grid.back() + 1e-9));
    VisitedSpine vs(table, critical_height(static_cast<double>(n)), seed);
    TreeHittingRecord rec;
    rec.beta = beta;
    rec.n = n;
    rec.log_hitting.assign(levels + 1, 0.0);
    long best = 0;
    const double lb = std::log(beta);
    for (std::size_t k = 1; k <= levels; ++k) {
        best = std::max(best, vs.max_visited(k - 1));
        rec.log_hitting[k] = lb * static_cast<double>(best);
    }
    std::vector<double> values;
    for (double t : grid) {
        auto k = static_cast<std::size_t>(std::floor(static_cast<double>(n) * t + 1e-9));
        values.push_back((alpha - 1.0) * rec.log_hitting[k] / (static_cast<double>(n) * lb));
    }
    rec.path = CadlagStep(0.0, grid, values, grid.back());
    return rec;
}

std::size_t tree_localization_index(VisitedSpine& spine, double u, double beta, const LocalizationOptions& options)
{
    check_beta(beta);
    if (!(u >= 0.0))
        throw std::invalid_argument("localization threshold must be nonnegative");
    double threshold = u / std::log(beta);
    if (options.fold_alpha)
        threshold /= spine.spine().table().law().alpha() - 1.0;
    for (std::size_t i = 0; i < kMaxLocalizationSearch; ++i) {
        long h = spine.max_visited(i);
        if (h >= 0 && static_cast<double>(h) >= threshold)
            return i;
    }
    throw std::runtime_error("no localizing leaf within the search limit");
}

bool tree_aging_indicator(std::shared_ptr<const SurvivalTable> table, double beta, double n, double a, double b,
                          std::uint64_t seed, const LocalizationOptions& options)
{
    if (!(a > 0.0 && a <= b))
        throw std::invalid_argument("aging needs 0 < a <= b");
    VisitedSpine vs(std::move(table), critical_height(n), seed);
    std::size_t la = tree_localization_index(vs, a * n, beta, options);
    std::size_t lb = tree_localization_index(vs, b * n, beta, options);
    return la == lb;
}

}  // namespace trapwalk
