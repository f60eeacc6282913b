#include "trapwalk/limits/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace trapwalk {

namespace {

constexpr std::size_t kMinKsSamples = 50;

double chi_square_critical(std::size_t dof, double level)
{
    boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::quantile(boost::math::complement(dist, level));
}

}  // namespace

double dkw_bound(std::size_t samples, double delta)
{
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples)));
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf, double delta)
{
    if (samples.size() < kMinKsSamples)
        throw std::invalid_argument("KS test needs at least 50 samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, dkw_bound(samples.size(), delta), samples.size()};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double delta)
{
    if (a.size() < kMinKsSamples || b.size() < kMinKsSamples)
        throw std::invalid_argument("KS test needs at least 50 samples per group");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x)
            ++i;
        while (j < b.size() && b[j] == x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    double bound = std::sqrt(std::log(2.0 / delta) / 2.0 * (n + m) / (n * m));
    return {d, bound, a.size() + b.size()};
}

ChiSquareResult chi_square_test(const std::vector<double>& observed, const std::vector<double>& probabilities,
                                double level, double min_expected)
{
    if (observed.size() != probabilities.size() || observed.size() < 2)
        throw std::invalid_argument("chi-square test needs matching count and probability vectors");
    const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
    std::vector<double> obs, expct;
    double o = 0.0, e = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        o += observed[k];
        e += probabilities[k] * total;
        if (e >= min_expected) {
            obs.push_back(o);
            expct.push_back(e);
            o = e = 0.0;
        }
    }
    if (e > 0.0 || o > 0.0) {
        if (expct.empty()) {
            obs.push_back(o);
            expct.push_back(e);
        } else {
            obs.back() += o;
            expct.back() += e;
        }
    }
    if (expct.size() < 2)
        throw std::invalid_argument("chi-square test has fewer than two usable cells");
    double stat = 0.0;
    for (std::size_t k = 0; k < obs.size(); ++k) {
        if (expct[k] <= 0.0) {
            if (obs[k] > 0.0)
                return {std::numeric_limits<double>::infinity(), chi_square_critical(obs.size() - 1, level), obs.size() - 1};
            continue;
        }
        stat += (obs[k] - expct[k]) * (obs[k] - expct[k]) / expct[k];
    }
    std::size_t dof = obs.size() - 1;
    return {stat, chi_square_critical(dof, level), dof};
}

ChiSquareResult chi_square_homogeneity(const std::vector<double>& a, const std::vector<double>& b, double level)
{
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("homogeneity test needs two equal-length count vectors");
    const double na = std::accumulate(a.begin(), a.end(), 0.0);
    const double nb = std::accumulate(b.begin(), b.end(), 0.0);
    const double n = na + nb;
    std::vector<double> ca, cb;
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sa += a[k];
        sb += b[k];
        double col = sa + sb;
        if (std::min(col * na / n, col * nb / n) >= 5.0) {
            ca.push_back(sa);
            cb.push_back(sb);
            sa = sb = 0.0;
        }
    }
    if (!ca.empty()) {
        ca.back() += sa;
        cb.back() += sb;
    }
    if (ca.size() < 2)
        throw std::invalid_argument("homogeneity test has fewer than two usable cells");
    double stat = 0.0;
    for (std::size_t k = 0; k < ca.size(); ++k) {
        double col = ca[k] + cb[k];
        double ea = col * na / n, eb = col * nb / n;
        stat += (ca[k] - ea) * (ca[k] - ea) / ea + (cb[k] - eb) * (cb[k] - eb) / eb;
    }
    std::size_t dof = ca.size() - 1;
    return {stat, chi_square_critical(dof, level), dof};
}

double binomial_se(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

double mean(const std::vector<double>& x)
{
    if (x.empty())
        throw std::invalid_argument("mean of an empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double median(std::vector<double> x)
{
    if (x.empty())
        throw std::invalid_argument("median of an empty sample");
    auto mid = x.begin() + static_cast<std::ptrdiff_t>(x.size() / 2);
    std::nth_element(x.begin(), mid, x.end());
    if (x.size() % 2 == 1)
        return *mid;
    double hi = *mid;
    double lo = *std::max_element(x.begin(), mid);
    return 0.5 * (lo + hi);
}

}  // namespace trapwalk
