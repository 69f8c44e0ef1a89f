#include "fracsum/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fracsum/errors.hpp"

namespace fracsum::stats {

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double q;
    if (lambda < 1.18) {
        // Jacobi-theta form, fast for small lambda:
        // P(K <= x) = sqrt(2 pi)/x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2)).
        const double f = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double cdf = 0.0;
        for (int k = 1; k <= 100; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * f);
            cdf += term;
            if (term < 1e-12 * cdf) break;
        }
        cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
        q = 1.0 - cdf;
    } else {
        // Alternating tail series, fast for large lambda.
        q = 0.0;
        double sign = 1.0;
        for (int j = 1; j <= 100; ++j) {
            const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
            q += term;
            if (std::abs(term) < 1e-12) break;
            sign = -sign;
        }
        q *= 2.0;
    }
    return std::clamp(q, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 50 || y.size() < 50)
        throw CoverageError("ks_two_sample: both samples need at least 50 points");
    std::vector<double> a(x.begin(), x.end());
    std::vector<double> b(y.begin(), y.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        const double gap =
            std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb);
        d = std::max(d, gap);
    }
    KsResult res;
    res.statistic = d;
    const double en = std::sqrt(na * nb / (na + nb));
    res.p_value = kolmogorov_sf(d * en);
    return res;
}

double mean(std::span<const double> x) {
    if (x.empty()) throw CoverageError("mean: empty sample");
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw CoverageError("variance: need at least two points");
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size() - 1);
}

double median(std::span<const double> x) {
    if (x.empty()) throw CoverageError("median: empty sample");
    std::vector<double> a(x.begin(), x.end());
    std::sort(a.begin(), a.end());
    const std::size_t mid = a.size() / 2;
    if (a.size() % 2 == 1) return a[mid];
    return 0.5 * (a[mid - 1] + a[mid]);
}

double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw CoverageError("correlation: length mismatch");
    if (x.size() < 2) throw CoverageError("correlation: need at least two points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw DegenerateError("correlation: a sample is constant");
    return sxy / std::sqrt(sxx * syy);
}

double central_moment(std::span<const double> x, int p) {
    if (x.empty()) throw CoverageError("central_moment: empty sample");
    if (p < 1) throw DomainError("central_moment: order must be >= 1");
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += std::pow(v - m, p);
    return acc / static_cast<double>(x.size());
}

}  // namespace fracsum::stats
