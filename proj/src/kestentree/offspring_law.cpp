#include "trapwalk/kestentree/offspring_law.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace trapwalk {

namespace {

constexpr std::uint64_t kSaturated = std::uint64_t{1} << 62;

// Σ_{k>=K} k^-s by Euler-Maclaurin.
double power_tail_sum(double s, double K)
{
    double f = std::pow(K, -s);
    double d1 = -s * f / K;
    double d3 = -s * (s + 1) * (s + 2) * f / (K * K * K);
    double d5 = -s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * f / std::pow(K, 5);
    return K * f / (s - 1) + f / 2 - d1 / 12 + d3 / 720 - d5 / 30240;
}

// (1-q)^k - 1 + kq >= 0
double gap_term(double k, double q, double lam)
{
    if (k * q < 0.1) {
        double term = 0.5 * k * (k - 1) * q * q;
        double sum = term;
        for (double j = 2; j < k; ++j) {
            term *= -q * (k - j) / (j + 1);
            sum += term;
            if (std::abs(term) <= 1e-18 * sum)
                break;
        }
        return sum;
    }
    return std::expm1(-k * lam) + k * q;
}

// q + log(1-q) = q - λ, by series for small q.
double q_minus_lambda(double q)
{
    if (q < 0.05) {
        double sum = 0.0, pw = q;
        for (int j = 2; j < 40; ++j) {
            pw *= q;
            sum += pw / j;
        }
        return -sum;
    }
    return q + std::log1p(-q);
}

// Γ(b, a) for b in (-2, 0) by downward recurrence from a positive parameter.
double upper_gamma_negative(double b, double a)
{
    int steps = 0;
    double c = b;
    while (c <= 0.0) {
        c += 1.0;
        ++steps;
    }
    double g = boost::math::tgamma(c, a);
    for (int i = 0; i < steps; ++i) {
        c -= 1.0;
        g = (g - std::pow(a, c) * std::exp(-a)) / c;
    }
    return g;
}

// Inverse transform on a cumulative table for k < K0, exact rejection from a
// discretised Pareto envelope above.
class PowerLawSampler {
public:
    PowerLawSampler(double s, double zeta_s) : s_(s)
    {
        double acc = 0.0;
        for (std::uint64_t k = 1; k < kK0; ++k) {
            acc += std::pow(static_cast<double>(k), -s) / zeta_s;
            cumulative_.push_back(acc);
        }
        head_mass_ = 1.0 - power_tail_sum(s, static_cast<double>(kK0)) / zeta_s;
        bound_ = std::pow(1.0 + 1.0 / static_cast<double>(kK0), s);
    }

    std::uint64_t operator()(Rng& rng) const
    {
        double u = uniform01(rng);
        if (u < head_mass_) {
            double target = u * cumulative_.back() / head_mass_;
            auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
            return static_cast<std::uint64_t>(it - cumulative_.begin()) + 1;
        }
        for (;;) {
            double x = static_cast<double>(kK0) * std::pow(uniform_open(rng), -1.0 / (s_ - 1.0));
            if (x >= static_cast<double>(kSaturated))
                return kSaturated;
            double k = std::floor(x);
            // k^-s divided by the envelope mass ∫_k^{k+1} x^-s dx, scaled to <= 1
            double cell = -std::pow(k, 1.0 - s_) * std::expm1((1.0 - s_) * std::log1p(1.0 / k)) / (s_ - 1.0);
            double ratio = std::pow(k, -s_) / cell / bound_;
            if (uniform01(rng) < ratio)
                return static_cast<std::uint64_t>(k);
        }
    }

private:
    static constexpr std::uint64_t kK0 = 1024;
    double s_;
    double head_mass_ = 0.0;
    double bound_ = 1.0;
    std::vector<double> cumulative_;
};

class GeometricLaw final : public OffspringLaw {
public:
    std::string name() const override { return "geometric"; }
    double alpha() const override { return 2.0; }
    double pmf(std::uint64_t k) const override { return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(k + 1, 2000))); }
    double gap(double q) const override { return q * q / (1.0 + q); }
    double derivative_deficit(double q) const override { return q * (2.0 + q) / ((1.0 + q) * (1.0 + q)); }

    std::uint64_t sample(Rng& rng) const override { return geometric(0.5, rng); }
    std::uint64_t sample_size_biased(Rng& rng) const override { return 1 + geometric(0.5, rng) + geometric(0.5, rng); }
    std::uint64_t sample_tilted(double s, Rng& rng) const override { return geometric(s / 2.0, rng); }

    double sum_tilted(double count, double s, double, Rng& rng) const override
    {
        double r = s / 2.0;
        if (count <= 0.0 || r <= 0.0)
            return 0.0;
        // negative binomial as a gamma mixture of Poissons
        std::gamma_distribution<double> mix(count, r / (1.0 - r));
        double lambda = mix(rng);
        if (lambda > 1e15)
            return std::round(lambda);
        std::poisson_distribution<long long> draw(lambda);
        return static_cast<double>(draw(rng));
    }

private:
    // failures before the first success when each trial continues with probability r
    static std::uint64_t geometric(double r, Rng& rng)
    {
        if (r <= 0.0)
            return 0;
        double k = std::floor(std::log(uniform_open(rng)) / std::log(r));
        return k >= static_cast<double>(kSaturated) ? kSaturated : static_cast<std::uint64_t>(k);
    }
};

class ZipfLaw final : public OffspringLaw {
public:
    explicit ZipfLaw(double alpha)
        : alpha_(alpha),
          zeta_a_(zeta_sum(alpha)),
          zeta_a1_(zeta_sum(alpha + 1.0)),
          p0_(1.0 - zeta_a1_ / zeta_a_),
          offspring_(alpha + 1.0, zeta_a1_),
          size_biased_(alpha, zeta_a_)
    {
        for (std::size_t k = 0; k < kDirect; ++k) {
            double x = static_cast<double>(k);
            weight_a1_[k] = k == 0 ? 0.0 : std::pow(x, -(alpha + 1.0));
            weight_a_[k] = k == 0 ? 0.0 : std::pow(x, -alpha);
        }
    }

    std::string name() const override { return "zipf"; }
    double alpha() const override { return alpha_; }
    double pmf(std::uint64_t k) const override
    {
        return k == 0 ? p0_ : std::pow(static_cast<double>(k), -(alpha_ + 1.0)) / zeta_a_;
    }

    double gap(double q) const override
    {
        if (q <= 0.0)
            return 0.0;
        if (q >= 1.0)
            return p0_;
        const double lam = -std::log1p(-q);
        const double s = alpha_ + 1.0;
        double sum = 0.0;
        for (std::size_t k = 2; k < kDirect; ++k)
            sum += weight_a1_[k] * gap_term(static_cast<double>(k), q, lam);
        // Σ_{k>=K} h(k), h(x) = x^-s ((1-q)^x - 1 + qx)
        const double K = static_cast<double>(kDirect);
        const double ek = std::exp(-lam * K);
        const double u0 = std::pow(K, -s), u1 = -s * u0 / K, u2 = s * (s + 1) * u0 / (K * K),
                     u3 = -s * (s + 1) * (s + 2) * u0 / (K * K * K);
        const double f0 = gap_term(K, q, lam);
        const double f1 = q_minus_lambda(q) - lam * std::expm1(-lam * K);
        const double f2 = lam * lam * ek, f3 = -lam * lam * lam * ek;
        const double h0 = u0 * f0;
        const double h1 = u1 * f0 + u0 * f1;
        const double h3 = u3 * f0 + 3 * u2 * f1 + 3 * u1 * f2 + u0 * f3;
        double integral;
        const double a = lam * K;
        if (a < 2.0) {
            // x^-s [(e^{-λx} - 1 + λx) + (q - λ) x]
            double series = 0.0, term = 1.0;
            for (int m = 1; m < 60; ++m) {
                term *= -a / m;
                if (m >= 2) {
                    double add = term / (m + 1 - s);
                    series += add;
                    if (std::abs(add) < 1e-18 * std::abs(series))
                        break;
                }
            }
            integral = std::pow(lam, s - 1) * boost::math::tgamma(1 - s) - std::pow(K, 1 - s) * series +
                       q_minus_lambda(q) * std::pow(K, 2 - s) / (s - 2);
        } else {
            integral = -std::pow(K, 1 - s) / (s - 1) + q * std::pow(K, 2 - s) / (s - 2) +
                       std::pow(lam, s - 1) * upper_gamma_negative(1 - s, a);
        }
        sum += integral + h0 / 2 - h1 / 12 + h3 / 720;
        return sum / zeta_a_;
    }

    double derivative_deficit(double q) const override
    {
        if (q <= 0.0)
            return 0.0;
        if (q >= 1.0)
            return 1.0 - 1.0 / zeta_a_;
        const double lam = -std::log1p(-q);
        const double s = alpha_;
        double sum = 0.0;
        for (std::size_t k = 2; k < kDirect; ++k)
            sum += weight_a_[k] * -std::expm1(-lam * static_cast<double>(k - 1));
        // Σ_{k>=K} h(k), h(x) = x^-s (1 - e^{-λ(x-1)})
        const double K = static_cast<double>(kDirect);
        const double e1 = std::exp(-lam * (K - 1));
        const double u0 = std::pow(K, -s), u1 = -s * u0 / K, u2 = s * (s + 1) * u0 / (K * K),
                     u3 = -s * (s + 1) * (s + 2) * u0 / (K * K * K);
        const double f0 = -std::expm1(-lam * (K - 1));
        const double f1 = lam * e1, f2 = -lam * lam * e1, f3 = lam * lam * lam * e1;
        const double h0 = u0 * f0;
        const double h1 = u1 * f0 + u0 * f1;
        const double h3 = u3 * f0 + 3 * u2 * f1 + 3 * u1 * f2 + u0 * f3;
        const double a = lam * K;
        const double c = -std::exp(lam);
        double integral;
        if (a < 2.0) {
            // x^-s [c (e^{-λx} - 1) + (1 + c)]
            double series = 0.0, term = 1.0;
            for (int m = 1; m < 60; ++m) {
                term *= -a / m;
                double add = term / (m + 1 - s);
                series += add;
                if (std::abs(add) < 1e-18 * std::abs(series))
                    break;
            }
            integral = c * (std::pow(lam, s - 1) * boost::math::tgamma(1 - s) - std::pow(K, 1 - s) * series) -
                       std::expm1(lam) * std::pow(K, 1 - s) / (s - 1);
        } else {
            integral = std::pow(K, 1 - s) / (s - 1) + c * std::pow(lam, s - 1) * upper_gamma_negative(1 - s, a);
        }
        sum += integral + h0 / 2 - h1 / 12 + h3 / 720;
        return sum / zeta_a_;
    }

    std::uint64_t sample(Rng& rng) const override
    {
        if (uniform01(rng) < p0_)
            return 0;
        return offspring_(rng);
    }
    std::uint64_t sample_size_biased(Rng& rng) const override { return size_biased_(rng); }

private:
    static constexpr std::size_t kDirect = 256;
    double alpha_;
    double zeta_a_, zeta_a1_, p0_;
    PowerLawSampler offspring_, size_biased_;
    std::array<double, kDirect> weight_a1_{}, weight_a_{};
};

}  // namespace

double OffspringLaw::slowly_varying(double u) const { return gap(u) / std::pow(u, alpha()); }

std::uint64_t OffspringLaw::sample_tilted(double s, Rng& rng) const
{
    if (s <= 0.0)
        return 0;
    for (;;) {
        std::uint64_t k = sample(rng);
        if (k == 0 || uniform01(rng) < std::pow(s, static_cast<double>(k)))
            return k;
    }
}

double OffspringLaw::sum_tilted(double count, double s, double cap, Rng& rng) const
{
    double total = 0.0;
    for (double i = 0; i < count; ++i) {
        total += static_cast<double>(sample_tilted(s, rng));
        if (total > cap)
            return total;
    }
    return total;
}

LawPtr make_geometric_law() { return std::make_shared<const GeometricLaw>(); }

LawPtr make_stable_law(double alpha)
{
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("stable offspring law needs alpha in (1, 2)");
    return std::make_shared<const ZipfLaw>(alpha);
}

double zeta_sum(double s)
{
    if (!(s > 1.0))
        throw std::domain_error("zeta needs s > 1");
    constexpr int kTerms = 1'000'000;
    double sum = power_tail_sum(s, kTerms + 1.0);
    for (int k = kTerms; k >= 1; --k)
        sum += std::pow(static_cast<double>(k), -s);
    return sum;
}

SurvivalTable::SurvivalTable(LawPtr law, std::size_t max_height) : law_(std::move(law))
{
    if (max_height < 1)
        throw std::invalid_argument("survival table needs at least one generation");
    q_.reserve(max_height + 1);
    drop_.reserve(max_height + 1);
    double q = 1.0;
    for (std::size_t n = 0; n <= max_height; ++n) {
        q_.push_back(q);
        double d = law_->gap(q);
        drop_.push_back(d);
        q -= d;
        if (!(q > 0.0))
            throw std::runtime_error("survival probabilities underflowed before the requested height");
    }
}

std::size_t SurvivalTable::height_for_uniform(double u, bool& capped) const
{
    // first k with q_k < u; the height is one less
    auto it = std::upper_bound(q_.begin(), q_.end(), u, [](double x, double qk) { return x > qk; });
    if (it == q_.end()) {
        capped = true;
        return max_height();
    }
    capped = false;
    return static_cast<std::size_t>(it - q_.begin()) - 1;
}

std::size_t SurvivalTable::sample_height(Rng& rng, bool& capped) const { return height_for_uniform(uniform_open(rng), capped); }

std::size_t SurvivalTable::sample_height_at_least(std::size_t from, Rng& rng, bool& capped) const
{
    if (from >= max_height()) {
        capped = true;
        return max_height();
    }
    return height_for_uniform(uniform_open(rng) * q_[from], capped);
}

std::shared_ptr<const SurvivalTable> survival_table(LawPtr law, std::size_t max_height)
{
    return std::make_shared<const SurvivalTable>(std::move(law), max_height);
}

double height_ratio_constant(const SurvivalTable& table, std::size_t n)
{
    if (n + 1 > table.max_height())
        throw std::out_of_range("survival table too short for c_n");
    double den = table.drop(n + 1);
    if (!(den > 0.0))
        throw std::logic_error("consecutive survival probabilities coincide");
    return table.drop(n) / den;
}

}  // namespace trapwalk
