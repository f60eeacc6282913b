#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "trapwalk/random.hpp"

namespace trapwalk {

// Critical offspring law in the domain of attraction of an α-stable law:
// f(s) = s + (1-s)^α L(1-s).
class OffspringLaw {
public:
    virtual ~OffspringLaw() = default;

    virtual std::string name() const = 0;
    virtual double alpha() const = 0;
    virtual double pmf(std::uint64_t k) const = 0;
    double pgf(double s) const { return s + gap(1.0 - s); }
    double pgf_derivative(double s) const { return 1.0 - derivative_deficit(1.0 - s); }
    // f(1-q) - (1-q), evaluated without cancellation for small q.
    virtual double gap(double q) const = 0;
    // 1 - f'(1-q)
    virtual double derivative_deficit(double q) const = 0;
    // L(u) = (f(1-u) - (1-u)) / u^α
    double slowly_varying(double u) const;

    virtual std::uint64_t sample(Rng& rng) const = 0;
    // P(Z~ = k) = k p_k
    virtual std::uint64_t sample_size_biased(Rng& rng) const = 0;
    // Law p_k s^k / f(s): offspring of a vertex whose children each satisfy an
    // independent event of probability s. Default is rejection from p_k.
    virtual std::uint64_t sample_tilted(double s, Rng& rng) const;
    // Sum of `count` independent tilted draws; stops early and returns a value
    // above `cap` once the partial sum exceeds it.
    virtual double sum_tilted(double count, double s, double cap, Rng& rng) const;
};

using LawPtr = std::shared_ptr<const OffspringLaw>;

// p_k = 2^-(k+1), f(s) = 1/(2-s), α = 2.
LawPtr make_geometric_law();
// p_k = k^-(1+α)/ζ(α) for k >= 1, p_0 = 1 - ζ(1+α)/ζ(α).
LawPtr make_stable_law(double alpha);

// ζ(s) for s > 1 by summation to 10^6 terms plus an Euler-Maclaurin tail.
double zeta_sum(double s);

// q_0 = 1, q_{n+1} = q_n - gap(q_n), with gaps kept alongside.
class SurvivalTable {
public:
    SurvivalTable(LawPtr law, std::size_t max_height);

    const OffspringLaw& law() const { return *law_; }
    LawPtr law_ptr() const { return law_; }
    std::size_t max_height() const { return q_.size() - 1; }
    double q(std::size_t n) const { return q_.at(n); }
    // q_n - q_{n+1}
    double drop(std::size_t n) const { return drop_.at(n); }
    const std::vector<double>& values() const { return q_; }

    // Height of an unconditioned tree by inverse transform: P(h >= k) = q_k.
    // Heights at or beyond the table end return max_height with capped = true.
    std::size_t sample_height(Rng& rng, bool& capped) const;
    // Same, conditioned on h >= from.
    std::size_t sample_height_at_least(std::size_t from, Rng& rng, bool& capped) const;

private:
    std::size_t height_for_uniform(double u, bool& capped) const;

    LawPtr law_;
    std::vector<double> q_;
    std::vector<double> drop_;
};

std::shared_ptr<const SurvivalTable> survival_table(LawPtr law, std::size_t max_height);

// c_n = P(h = n) / P(h = n+1)
double height_ratio_constant(const SurvivalTable& table, std::size_t n);

}  // namespace trapwalk
