#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace trapwalk {

struct KsResult {
    double statistic = 0.0;
    double bound = 0.0;  // DKW band at the requested level
    std::size_t samples = 0;
    bool passes(double slack = 0.0) const { return statistic <= bound + slack; }
};

constexpr double kDefaultLevel = 0.01;

// One-sample Kolmogorov-Smirnov statistic with the DKW bound sqrt(ln(2/δ)/(2N)).
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf, double delta = kDefaultLevel);

// Two-sample statistic with the matching DKW-type bound sqrt(ln(2/δ)/2 · (n+m)/(nm)).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double delta = kDefaultLevel);

double dkw_bound(std::size_t samples, double delta = kDefaultLevel);

struct ChiSquareResult {
    double statistic = 0.0;
    double critical = 0.0;
    std::size_t dof = 0;
    bool passes() const { return statistic <= critical; }
};

// Pearson goodness of fit for counts against cell probabilities. Cells with
// expected count below `min_expected` are pooled into their neighbour.
ChiSquareResult chi_square_test(const std::vector<double>& observed, const std::vector<double>& probabilities,
                                double level = kDefaultLevel, double min_expected = 5.0);

// Two-sample homogeneity test on a contingency table of two count vectors.
ChiSquareResult chi_square_homogeneity(const std::vector<double>& a, const std::vector<double>& b, double level = kDefaultLevel);

double binomial_se(double p, std::size_t n);
double mean(const std::vector<double>& x);
double median(std::vector<double> x);

}  // namespace trapwalk
