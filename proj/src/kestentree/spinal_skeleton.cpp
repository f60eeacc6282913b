#include "trapwalk/kestentree/spinal_skeleton.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace trapwalk {

namespace {

constexpr std::uint64_t kMaxExplicitBig = 50'000'000;
const std::vector<std::uint64_t> kNoCounts;

}  // namespace

double critical_height(double n)
{
    if (!(n > 1.0))
        throw std::domain_error("critical height needs n > 1");
    return n / std::log(n);
}

SpinalSkeleton::SpinalSkeleton(std::shared_ptr<const SurvivalTable> table, double critical_height, std::uint64_t explicit_limit)
    : table_(std::move(table)), critical_height_(critical_height), explicit_limit_(explicit_limit)
{
    if (!(critical_height >= 0.0))
        throw std::invalid_argument("critical height must be nonnegative");
    big_from_ = static_cast<std::uint32_t>(std::ceil(critical_height));
    if (big_from_ > table_->max_height())
        throw std::invalid_argument("survival table does not reach the critical height");
}

void SpinalSkeleton::extend(std::size_t length, Rng& rng)
{
    const SurvivalTable& t = *table_;
    const OffspringLaw& law = t.law();
    while (buds_.size() < length) {
        const std::size_t i = buds_.size();
        std::uint64_t m = law.sample_size_biased(rng) - 1;
        buds_.push_back(m);
        std::uint32_t big = 0;
        bool capped = false;
        if (m <= explicit_limit_) {
            explicit_from_.push_back(0);
            for (std::uint64_t j = 0; j < m; ++j) {
                auto h = static_cast<std::uint32_t>(t.sample_height(rng, capped));
                heights_.push_back(h);
                capped_.push_back(capped ? 1 : 0);
                capped_total_ += capped ? 1 : 0;
                big += h >= big_from_ ? 1 : 0;
            }
        } else {
            // thin: the number of big leaves is binomial, small heights by sequential splitting
            std::uint32_t from = std::max<std::uint32_t>(big_from_, 1);
            explicit_from_.push_back(from);
            std::binomial_distribution<std::uint64_t> tall(m, t.q(from));
            std::uint64_t k = tall(rng);
            if (k > kMaxExplicitBig)
                throw std::runtime_error("spine vertex has too many big leaves to store explicitly");
            for (std::uint64_t j = 0; j < k; ++j) {
                auto h = static_cast<std::uint32_t>(t.sample_height_at_least(from, rng, capped));
                heights_.push_back(h);
                capped_.push_back(capped ? 1 : 0);
                capped_total_ += capped ? 1 : 0;
                big += h >= big_from_ ? 1 : 0;
            }
            std::vector<std::uint64_t> counts(from, 0);
            std::uint64_t rest = m - k;
            for (std::uint32_t h = 0; h + 1 < from && rest > 0; ++h) {
                double p = t.drop(h) / (t.q(h) - t.q(from));
                std::binomial_distribution<std::uint64_t> split(rest, std::min(1.0, p));
                counts[h] = split(rng);
                rest -= counts[h];
            }
            counts[from - 1] += rest;
            small_counts_[i] = std::move(counts);
        }
        big_count_.push_back(big);
        offset_.push_back(heights_.size());
    }
}

std::span<const std::uint32_t> SpinalSkeleton::heights(std::size_t i) const
{
    return {heights_.data() + offset_.at(i), offset_.at(i + 1) - offset_.at(i)};
}

std::span<const std::uint8_t> SpinalSkeleton::capped(std::size_t i) const
{
    return {capped_.data() + offset_.at(i), offset_.at(i + 1) - offset_.at(i)};
}

const std::vector<std::uint64_t>& SpinalSkeleton::small_leaf_counts(std::size_t i) const
{
    auto it = small_counts_.find(i);
    return it == small_counts_.end() ? kNoCounts : it->second;
}

std::vector<std::uint32_t> SpinalSkeleton::big_leaves(std::size_t i) const
{
    std::vector<std::uint32_t> out;
    auto h = heights(i);
    for (std::size_t j = 0; j < h.size(); ++j)
        if (h[j] >= big_from_)
            out.push_back(static_cast<std::uint32_t>(j));
    return out;
}

SpinalSkeleton build_spine(std::shared_ptr<const SurvivalTable> table, std::size_t length, double n_scale, Rng& rng)
{
    SpinalSkeleton s(std::move(table), critical_height(n_scale));
    s.extend(length, rng);
    return s;
}

}  // namespace trapwalk
