#pragma once

// Small statistics toolbox: two-sample Kolmogorov-Smirnov with the asymptotic
// Kolmogorov p-value, and the handful of sample moments the harness needs.

#include <cstddef>
#include <span>

namespace fracsum::stats {

/// Survival function Q(lambda) = P(K > lambda) of the Kolmogorov distribution,
/// series-evaluated on both branches to < 1e-10 absolute. Q(lambda <= 0) = 1.
double kolmogorov_sf(double lambda);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample KS test with asymptotic p-value; both samples need >= 50 points.
/// Ties are handled by advancing both empirical CDFs through equal values
/// before comparing.
KsResult ks_two_sample(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> x);
/// Unbiased sample variance (two-pass).
double variance(std::span<const double> x);
double median(std::span<const double> x);
double correlation(std::span<const double> x, std::span<const double> y);
/// p-th sample moment about the mean.
double central_moment(std::span<const double> x, int p);

}  // namespace fracsum::stats
