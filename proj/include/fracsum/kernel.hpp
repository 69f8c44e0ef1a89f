#pragma once

// Moving-average kernels a_k with finite support [k_min, k_max] and the exact
// variance of their partial sums. The normaliser h(n) = sqrt(Var S_n) / n^H is
// defined from the kernel itself, so every identity downstream is exact by
// construction rather than asymptotic.

#include <cstddef>
#include <span>
#include <vector>

namespace fracsum {

class Kernel {
public:
    /// coeffs[i] is a_{k_min + i}. hurst must lie in (0,1). tail_bound records
    /// the relative L2 mass beyond the truncation for diagnostics (0 if exact).
    Kernel(std::vector<double> coeffs, long k_min, double hurst, double tail_bound = 0.0);

    long k_min() const noexcept { return k_min_; }
    long k_max() const noexcept { return k_min_ + static_cast<long>(coeffs_.size()) - 1; }
    double target_hurst() const noexcept { return hurst_; }
    double truncation_tail_bound() const noexcept { return tail_bound_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }

    /// a_k, zero outside the support.
    double at(long k) const noexcept;

    double sum_sq() const noexcept { return sum_sq_; }

    /// a_lo + ... + a_hi (inclusive, clipped to the support).
    double window_sum(long lo, long hi) const noexcept;

    /// prefix(m) = sum of a_k for k <= m; window_sum in O(1).
    double prefix(long m) const noexcept;

private:
    std::vector<double> coeffs_;
    std::vector<double> prefix_;
    long k_min_ = 0;
    double hurst_ = 0.5;
    double tail_bound_ = 0.0;
    double sum_sq_ = 0.0;
};

/// a_0 = 1: i.i.d. partial sums, H = 1/2.
Kernel make_iid_kernel(double hurst = 0.5);

/// Fractional-difference kernel of order d = H - 1/2 truncated at lag K:
/// psi_0 = 1, psi_k = psi_{k-1} (k - 1 + d) / k.
Kernel make_fractional_kernel(double hurst, std::size_t K);

/// Same, but throws TruncationError when the tail ratio at K exceeds
/// max_tail_ratio.
Kernel make_fractional_kernel(double hurst, std::size_t K, double max_tail_ratio);

/// Symmetrised variant supported on [-K, K] (a_{|k|} / sqrt(2)); exercises
/// k_min < 0 code paths.
Kernel make_two_sided(double hurst, std::size_t K);

/// Relative L2 tail mass of the fractional kernel past lag K (estimate).
double fractional_tail_ratio(double hurst, std::size_t K);

/// Smallest K whose tail ratio meets `ratio`, capped. Returns the cap when the
/// target is out of reach (long-memory tails decay too slowly to chase 1e-6).
std::size_t default_truncation_K(double hurst, double ratio = 1e-6,
                                 std::size_t cap = std::size_t{1} << 18);

/// Exact Var(S_n) = sum over i of (prefix(n - i) - prefix(-i))^2.
double var_partial_sum(const Kernel& k, std::size_t n, int workers = 1);
double var_partial_sum_serial(const Kernel& k, std::size_t n);

/// h(n) = sqrt(Var S_n) / n^H, the slowly varying part of the sd scale.
double h_of(const Kernel& k, std::size_t n, int workers = 1);

/// Least-squares slope of log Var(S_n) against log n, halved:
/// the empirical Hurst exponent of the kernel. Needs >= 3 sizes, each >= 2.
double estimate_hurst_slope(const Kernel& k, std::span<const std::size_t> n_values,
                            int workers = 1);

}  // namespace fracsum
