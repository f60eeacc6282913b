#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "trapwalk/kestentree/offspring_law.hpp"

namespace trapwalk {

// Backbone ρ_0, ρ_1, ... of Kesten's tree with Z~_i - 1 buds per vertex and the
// height of the leaf grown from each bud. Vertices with more than
// `explicit_limit` buds keep explicit heights only for big leaves and a
// histogram of the small ones.
class SpinalSkeleton {
public:
    static constexpr std::uint64_t kDefaultExplicitLimit = 4096;

    SpinalSkeleton(std::shared_ptr<const SurvivalTable> table, double critical_height,
                   std::uint64_t explicit_limit = kDefaultExplicitLimit);

    // Appends vertices until the backbone has `length` vertices.
    void extend(std::size_t length, Rng& rng);

    std::size_t length() const { return buds_.size(); }
    const SurvivalTable& table() const { return *table_; }
    std::shared_ptr<const SurvivalTable> table_ptr() const { return table_; }
    double critical_height() const { return critical_height_; }
    std::uint32_t big_from() const { return big_from_; }

    std::uint64_t buds(std::size_t i) const { return buds_.at(i); }
    // Explicit leaf heights at ρ_i, in bud order when all are explicit.
    std::span<const std::uint32_t> heights(std::size_t i) const;
    std::span<const std::uint8_t> capped(std::size_t i) const;
    bool all_explicit(std::size_t i) const { return explicit_from_.at(i) == 0; }
    // Counts of leaves of height h < explicit_from at ρ_i (empty when all explicit).
    const std::vector<std::uint64_t>& small_leaf_counts(std::size_t i) const;
    // N_n(i) = #B_i
    std::uint32_t big_count(std::size_t i) const { return big_count_.at(i); }
    // Positions in heights(i) of the big leaves.
    std::vector<std::uint32_t> big_leaves(std::size_t i) const;
    std::uint64_t capped_leaves() const { return capped_total_; }

private:
    std::shared_ptr<const SurvivalTable> table_;
    double critical_height_;
    std::uint32_t big_from_;
    std::uint64_t explicit_limit_;
    std::vector<std::uint64_t> buds_;
    std::vector<std::size_t> offset_{0};
    std::vector<std::uint32_t> heights_;
    std::vector<std::uint8_t> capped_;
    std::vector<std::uint32_t> explicit_from_;
    std::vector<std::uint32_t> big_count_;
    std::map<std::size_t, std::vector<std::uint64_t>> small_counts_;
    std::uint64_t capped_total_ = 0;
};

// Critical height h_n = n / ln n.
double critical_height(double n);

SpinalSkeleton build_spine(std::shared_ptr<const SurvivalTable> table, std::size_t length, double n_scale, Rng& rng);

}  // namespace trapwalk
