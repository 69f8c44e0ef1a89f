#include "fracsum/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "fracsum/errors.hpp"
#include "fracsum/parallel.hpp"

namespace fracsum {

Kernel::Kernel(std::vector<double> coeffs, long k_min, double hurst, double tail_bound)
    : coeffs_(std::move(coeffs)), k_min_(k_min), hurst_(hurst), tail_bound_(tail_bound) {
    if (coeffs_.empty()) throw DomainError("Kernel: coefficient list must be non-empty");
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Kernel: hurst must lie in (0,1)");
    if (!(tail_bound >= 0.0)) throw DomainError("Kernel: tail bound must be non-negative");
    bool any = false;
    for (double a : coeffs_) {
        if (!std::isfinite(a)) throw DomainError("Kernel: coefficients must be finite");
        if (a != 0.0) any = true;
        sum_sq_ += a * a;
    }
    if (!any) throw DegenerateError("Kernel: all coefficients vanish");
    prefix_.resize(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) prefix_[i + 1] = prefix_[i] + coeffs_[i];
}

double Kernel::at(long k) const noexcept {
    if (k < k_min_ || k > k_max()) return 0.0;
    return coeffs_[static_cast<std::size_t>(k - k_min_)];
}

double Kernel::prefix(long m) const noexcept {
    if (m < k_min_) return 0.0;
    if (m >= k_max()) return prefix_.back();
    return prefix_[static_cast<std::size_t>(m - k_min_ + 1)];
}

double Kernel::window_sum(long lo, long hi) const noexcept {
    if (hi < lo) return 0.0;
    return prefix(hi) - prefix(lo - 1);
}

Kernel make_iid_kernel(double hurst) {
    return Kernel({1.0}, 0, hurst);
}

namespace {

std::vector<double> fractional_coeffs(double hurst, std::size_t K) {
    const double d = hurst - 0.5;
    std::vector<double> psi(K + 1);
    psi[0] = 1.0;
    for (std::size_t k = 1; k <= K; ++k)
        psi[k] = psi[k - 1] * (static_cast<double>(k) - 1.0 + d) / static_cast<double>(k);
    return psi;
}

}  // namespace

Kernel make_fractional_kernel(double hurst, std::size_t K) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw DomainError("make_fractional_kernel: hurst must lie in (0,1)");
    if (hurst == 0.5) return Kernel({1.0}, 0, hurst);  // d = 0: kernel collapses to a delta
    return Kernel(fractional_coeffs(hurst, K), 0, hurst, fractional_tail_ratio(hurst, K));
}

Kernel make_fractional_kernel(double hurst, std::size_t K, double max_tail_ratio) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw DomainError("make_fractional_kernel: hurst must lie in (0,1)");
    if (hurst == 0.5) return Kernel({1.0}, 0, hurst);
    const double tail = fractional_tail_ratio(hurst, K);
    if (tail > max_tail_ratio)
        throw TruncationError("make_fractional_kernel: tail ratio " + std::to_string(tail) +
                              " at K=" + std::to_string(K) + " exceeds allowed " +
                              std::to_string(max_tail_ratio));
    return Kernel(fractional_coeffs(hurst, K), 0, hurst, tail);
}

Kernel make_two_sided(double hurst, std::size_t K) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("make_two_sided: hurst must lie in (0,1)");
    const std::vector<double> psi = fractional_coeffs(hurst, K);
    const double root_half = std::sqrt(0.5);
    std::vector<double> coeffs(2 * K + 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const long k = static_cast<long>(i) - static_cast<long>(K);
        coeffs[i] = psi[static_cast<std::size_t>(std::labs(k))] * root_half;
    }
    const double tail = hurst == 0.5 ? 0.0 : fractional_tail_ratio(hurst, K);
    return Kernel(std::move(coeffs), -static_cast<long>(K), hurst, tail);
}

double fractional_tail_ratio(double hurst, std::size_t K) {
    const double d = hurst - 0.5;
    if (d == 0.0) return 0.0;
    const std::vector<double> psi = fractional_coeffs(hurst, K);
    double mass = 0.0;
    for (double p : psi) mass += p * p;
    // psi_k ~ k^{d-1}/Gamma(d), so the tail of psi^2 integrates to
    // ~ psi_K^2 * K / (1 - 2d).
    const double tail = psi[K] * psi[K] * static_cast<double>(K) / (1.0 - 2.0 * d);
    return tail / (mass + tail);
}

std::size_t default_truncation_K(double hurst, double ratio, std::size_t cap) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw DomainError("default_truncation_K: hurst must lie in (0,1)");
    if (!(ratio > 0.0)) throw DomainError("default_truncation_K: ratio must be positive");
    if (hurst == 0.5) return 1;
    std::size_t K = 64;
    while (K < cap && fractional_tail_ratio(hurst, K) > ratio) K *= 2;
    return std::min(K, cap);
}

double var_partial_sum(const Kernel& k, std::size_t n, int workers) {
    if (n == 0) return 0.0;  // S_0 is the empty sum
    // S_n = sum_i xi_i * W(i) with W(i) = a_{1-i} + ... + a_{n-i}; the weight
    // is non-zero only for i in [1 - k_max, n - k_min].
    const long lo = 1 - k.k_max();
    const long hi = static_cast<long>(n) - k.k_min();
    const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
    return par::block_sum(count, workers, [&](std::size_t idx) {
        const long i = lo + static_cast<long>(idx);
        const double w = k.prefix(static_cast<long>(n) - i) - k.prefix(-i);
        return w * w;
    });
}

double var_partial_sum_serial(const Kernel& k, std::size_t n) {
    if (n == 0) return 0.0;
    const long lo = 1 - k.k_max();
    const long hi = static_cast<long>(n) - k.k_min();
    double acc = 0.0;
    for (long i = lo; i <= hi; ++i) {
        const double w = k.prefix(static_cast<long>(n) - i) - k.prefix(-i);
        acc += w * w;
    }
    return acc;
}

double h_of(const Kernel& k, std::size_t n, int workers) {
    const double v = var_partial_sum(k, n, workers);
    if (!(v > 0.0)) throw DegenerateError("h_of: Var(S_n) vanished");
    return std::sqrt(v) / std::pow(static_cast<double>(n), k.target_hurst());
}

double estimate_hurst_slope(const Kernel& k, std::span<const std::size_t> n_values, int workers) {
    if (n_values.size() < 3)
        throw CoverageError("estimate_hurst_slope: need at least three sample sizes");
    for (std::size_t n : n_values)
        if (n < 2) throw CoverageError("estimate_hurst_slope: sample sizes must be >= 2");
    const std::size_t m = n_values.size();
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        lx[i] = std::log(static_cast<double>(n_values[i]));
        ly[i] = std::log(var_partial_sum(k, n_values[i], workers));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw CoverageError("estimate_hurst_slope: sample sizes must differ");
    // log Var(S_n) ≈ 2H log n + const, so halve the slope.
    return 0.5 * sxy / sxx;
}

}  // namespace fracsum
