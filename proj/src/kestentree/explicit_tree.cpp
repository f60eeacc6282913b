#include "trapwalk/kestentree/explicit_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace trapwalk {

TreeSizeExceeded::TreeSizeExceeded(std::size_t cap)
    : std::runtime_error("tree exceeded the size cap of " + std::to_string(cap) + " vertices")
{
}

ExplicitTree::ExplicitTree(std::size_t size_cap) : cap_(std::min<std::size_t>(size_cap, kNone - 1))
{
    parent_.push_back(kNone);
    first_.push_back(0);
    count_.push_back(0);
    depth_.push_back(0);
    region_.push_back(-1);
    expanded_.push_back(0);
}

ExplicitTree ExplicitTree::from_parents(const std::vector<long>& parents, std::vector<long>* order)
{
    if (parents.empty() || parents[0] != -1)
        throw std::invalid_argument("parent array must start with the root (-1)");
    const std::size_t n = parents.size();
    std::vector<std::vector<long>> kids(n);
    for (std::size_t v = 1; v < n; ++v) {
        long p = parents[v];
        if (p < 0 || static_cast<std::size_t>(p) >= n || p == static_cast<long>(v))
            throw std::invalid_argument("parent array has an invalid entry at " + std::to_string(v));
        kids[static_cast<std::size_t>(p)].push_back(static_cast<long>(v));
    }
    ExplicitTree t(n + 1);
    std::vector<long> bfs{0};
    for (std::size_t k = 0; k < bfs.size(); ++k) {
        const auto& ch = kids[static_cast<std::size_t>(bfs[k])];
        t.add_children(static_cast<Vertex>(k), static_cast<std::uint32_t>(ch.size()));
        bfs.insert(bfs.end(), ch.begin(), ch.end());
    }
    if (bfs.size() != n)
        throw std::invalid_argument("parent array is not a tree");
    if (order)
        *order = std::move(bfs);
    return t;
}

ExplicitTree::Vertex ExplicitTree::add_children(Vertex v, std::uint32_t count)
{
    if (expanded_[v])
        throw std::logic_error("vertex already has children");
    if (size() + count > cap_)
        throw TreeSizeExceeded(cap_);
    Vertex first = static_cast<Vertex>(size());
    first_[v] = first;
    count_[v] = count;
    expanded_[v] = 1;
    for (std::uint32_t k = 0; k < count; ++k) {
        parent_.push_back(v);
        first_.push_back(0);
        count_.push_back(0);
        depth_.push_back(depth_[v] + 1);
        region_.push_back(region_[v]);
        expanded_.push_back(0);
    }
    return first;
}

void ExplicitTree::expand(Vertex v)
{
    if (expanded_[v])
        return;
    if (expander_)
        expander_(*this, v);
    if (!expanded_[v]) {
        expanded_[v] = 1;
        first_[v] = static_cast<Vertex>(size());
        count_[v] = 0;
    }
}

void ExplicitTree::expand_all()
{
    for (std::size_t v = 0; v < size(); ++v)
        expand(static_cast<Vertex>(v));
}

int ExplicitTree::height() const { return *std::max_element(depth_.begin(), depth_.end()); }

std::vector<long> ExplicitTree::parents() const
{
    std::vector<long> out(size());
    for (std::size_t v = 0; v < size(); ++v)
        out[v] = parent_[v] == kNone ? -1 : static_cast<long>(parent_[v]);
    return out;
}

std::vector<double> ExplicitTree::generation_sizes() const
{
    std::vector<double> z(static_cast<std::size_t>(height()) + 1, 0.0);
    for (std::size_t v = 0; v < size(); ++v) {
        if (!expanded_[v])
            throw std::logic_error("generation sizes need a fully expanded tree");
        z[static_cast<std::size_t>(depth_[v])] += 1.0;
    }
    return z;
}

void ExplicitTree::write_parent_csv(std::ostream& out) const
{
    out << "vertex,parent,depth\n";
    for (std::size_t v = 0; v < size(); ++v)
        out << v << ',' << (parent_[v] == kNone ? -1L : static_cast<long>(parent_[v])) << ',' << depth_[v] << '\n';
}

double gk_pmf(const SurvivalTable& table, std::size_t m, std::uint64_t j, std::uint64_t k)
{
    if (m < 1 || j < 1 || j > k)
        return 0.0;
    double a = 1.0 - table.q(m - 1);
    double b = 1.0 - table.q(m);
    double c = table.drop(m - 1) / table.drop(m);
    double aj = j == 1 ? 1.0 : std::pow(a, static_cast<double>(j - 1));
    return c * table.law().pmf(k) * aj * std::pow(b, static_cast<double>(k - j));
}

GkPair sample_gk_pair(const SurvivalTable& table, std::size_t m, Rng& rng)
{
    if (m < 1 || m > table.max_height())
        throw std::out_of_range("exact height outside the survival table");
    const OffspringLaw& law = table.law();
    const double b = 1.0 - table.q(m);
    const double width = table.drop(m - 1);  // b - a
    const double log_b = std::log(b);
    const double log_r = m == 1 ? -std::numeric_limits<double>::infinity() : std::log1p(-width / b);
    // ζ from the size-biased law, accepted with (b^k - a^k) / ((b - a) k)
    for (;;) {
        std::uint64_t k = law.sample_size_biased(rng);
        double kd = static_cast<double>(k);
        double spread = m == 1 ? 1.0 : -std::expm1(kd * log_r);
        double log_accept = kd * log_b + std::log(spread) - std::log(width) - std::log(kd);
        if (std::log(uniform01(rng)) >= log_accept)
            continue;
        GkPair out;
        out.zeta = k;
        if (m == 1 || k == 1)
            return out;
        double j = std::floor(std::log1p(-uniform01(rng) * spread) / log_r);
        out.xi = 1 + static_cast<std::uint64_t>(std::clamp(j, 0.0, kd - 1.0));
        return out;
    }
}

void GrowthRules::ensure(std::size_t n)
{
    if (kind_.size() < n) {
        kind_.resize(n, GrowthKind::free);
        param_.resize(n, 0);
    }
}

void GrowthRules::assign(ExplicitTree::Vertex v, GrowthKind kind, std::uint32_t param)
{
    ensure(static_cast<std::size_t>(v) + 1);
    kind_[v] = kind;
    param_[v] = param;
}

ExplicitTree::Vertex GrowthRules::grow(ExplicitTree& tree, ExplicitTree::Vertex v, Rng& rng)
{
    ensure(tree.size());
    const SurvivalTable& t = *table_;
    const OffspringLaw& law = t.law();
    const GrowthKind kind = kind_[v];
    const std::uint32_t m = param_[v];
    auto narrow = [&](std::uint64_t k) {
        if (k > ExplicitTree::kNone / 2)
            throw TreeSizeExceeded(k);
        return static_cast<std::uint32_t>(k);
    };
    switch (kind) {
    case GrowthKind::free: {
        std::uint32_t k = narrow(law.sample(rng));
        auto first = tree.add_children(v, k);
        ensure(tree.size());
        for (std::uint32_t c = 0; c < k; ++c)
            assign(first + c, GrowthKind::free, 0);
        return ExplicitTree::kNone;
    }
    case GrowthKind::below: {
        std::uint32_t k = m <= 1 ? 0 : narrow(law.sample_tilted(1.0 - t.q(m - 1), rng));
        auto first = tree.add_children(v, k);
        ensure(tree.size());
        for (std::uint32_t c = 0; c < k; ++c)
            assign(first + c, GrowthKind::below, m - 1);
        return ExplicitTree::kNone;
    }
    case GrowthKind::exact: {
        if (m == 0) {
            tree.add_children(v, 0);
            return ExplicitTree::kNone;
        }
        GkPair p = sample_gk_pair(t, m, rng);
        std::uint32_t k = narrow(p.zeta);
        auto first = tree.add_children(v, k);
        ensure(tree.size());
        std::uint32_t xi = static_cast<std::uint32_t>(p.xi);
        for (std::uint32_t c = 0; c < k; ++c) {
            if (c + 1 < xi)
                assign(first + c, GrowthKind::below, m - 1);
            else if (c + 1 == xi)
                assign(first + c, GrowthKind::exact, m - 1);
            else
                assign(first + c, GrowthKind::below, m);
        }
        return first + xi - 1;
    }
    }
    return ExplicitTree::kNone;
}

RealizedLeaf realize_leaf(std::shared_ptr<const SurvivalTable> table, std::optional<std::size_t> height, Rng& rng,
                          std::size_t size_cap)
{
    RealizedLeaf out{ExplicitTree(size_cap), false};
    GrowthRules rules(table);
    if (height)
        rules.assign(0, GrowthKind::exact, static_cast<std::uint32_t>(*height));
    else
        rules.assign(0, GrowthKind::free, 0);
    out.tree.set_expander([&](ExplicitTree& tr, ExplicitTree::Vertex v) { rules.grow(tr, v, rng); });
    try {
        out.tree.expand_all();
    } catch (const TreeSizeExceeded&) {
        out.overflow = true;
    }
    out.tree.set_expander({});
    return out;
}

std::vector<double> leaf_generation_sizes(const SurvivalTable& table, std::size_t height, Rng& rng)
{
    const OffspringLaw& law = table.law();
    const double huge = std::numeric_limits<double>::max();
    std::vector<double> z(height + 1, 1.0);
    double strict = 0.0;  // vertices at the current depth with height < height - depth
    double loose = 0.0;   // same with height < height - depth + 1
    for (std::size_t d = 0; d < height; ++d) {
        // children at depth d+1
        std::size_t left = height - d - 1;
        double next_strict = left == 0 ? 0.0 : law.sum_tilted(strict, 1.0 - table.q(left), huge, rng);
        double next_loose = law.sum_tilted(loose, 1.0 - table.q(left + 1), huge, rng);
        GkPair p = sample_gk_pair(table, height - d, rng);
        next_strict += static_cast<double>(p.xi - 1);
        next_loose += static_cast<double>(p.zeta - p.xi);
        strict = next_strict;
        loose = next_loose;
        z[d + 1] += strict + loose;
    }
    return z;
}

LogMagnitude weighted_generation_sum(const std::vector<double>& sizes, double beta)
{
    const double lb = std::log(beta);
    LogMagnitude s = LogMagnitude::zero();
    for (std::size_t g = 0; g < sizes.size(); ++g)
        if (sizes[g] > 0.0)
            s += LogMagnitude::from_log(static_cast<double>(g) * lb + std::log(sizes[g]));
    return s;
}

}  // namespace trapwalk
