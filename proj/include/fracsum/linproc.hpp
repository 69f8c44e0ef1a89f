#pragma once

// The driving linear process X_j = sum_k a_{j-k} xi_k, its partial sums S_n
// and normalised path s_n(t), the memory-weighted sums v_k, the walk R_n and
// its normalised path r_n(t), plus the exact (sampling-free) variance of R_n.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracsum/fbm.hpp"
#include "fracsum/fft.hpp"
#include "fracsum/kernel.hpp"
#include "fracsum/regvar.hpp"
#include "fracsum/rng.hpp"

namespace fracsum {

class InnovationModel {
public:
    enum class Law { gaussian, rademacher, student_t };

    static InnovationModel gaussian();
    static InnovationModel rademacher();
    /// Student t rescaled to unit variance; df must exceed 2.
    static InnovationModel student_t(double df);

    Law law() const noexcept { return law_; }
    double df() const noexcept { return df_; }

    /// Declared finite-moment order: +inf for gaussian/rademacher, just under
    /// df for student_t (all moments of order < df are finite, df itself not).
    double moment_order_alpha() const noexcept;

    double draw(rng::Xoshiro256pp& rng) const;

    std::string name() const;

private:
    InnovationModel(Law law, double df) : law_(law), df_(df) {}
    Law law_ = Law::gaussian;
    double df_ = 0.0;
};

/// Real array indexed by consecutive integers starting at `first`.
struct IndexedArray {
    long first = 0;
    std::vector<double> values;

    long last() const noexcept { return first + static_cast<long>(values.size()) - 1; }
    double at(long j) const { return values[static_cast<std::size_t>(j - first)]; }
};

/// i.i.d. draws xi_j for j in [first, last].
IndexedArray sample_innovations(const InnovationModel& model, long first, long last,
                                rng::Xoshiro256pp& rng);

/// X_j = sum_k a_{j-k} xi_k for j in [j_first, j_last]. The innovations must
/// cover the kernel window around the requested range; missing coverage is an
/// error, never silent zero-padding. `plan` optionally supplies a prebuilt FFT
/// convolver for the kernel at this innovation length.
IndexedArray sample_linear_process(const Kernel& k, const IndexedArray& xi, long j_first,
                                   long j_last, const fft::RealConv* plan = nullptr);

/// s_n(i/n) = S_i / sqrt(Var S_n); X must be defined on 1..n.
GaussPath s_n_path(const IndexedArray& X, const Kernel& k, std::size_t n);

/// v_0 = 0, v_k = sum_{i=0}^{k-1} X_{k-i} dM(i). `plan` optionally supplies a
/// prebuilt convolver for dM(0..n-1) at signal length n.
std::vector<double> v_sequence(const IndexedArray& X, const MemoryFunction& M, std::size_t n,
                               const fft::RealConv* plan = nullptr);

/// R_i = v_0 + ... + v_i; r_n(i/n) = R_i / (h(n) n^H M(n)). Recomputes R
/// through the reordered form sum_j S_{i-j} dM(j) and errors out if the two
/// disagree beyond accumulation rounding. X is the process v was built from.
GaussPath r_n_path(std::span<const double> v, const IndexedArray& X, const Kernel& k,
                   const MemoryFunction& M, std::size_t n, const fft::RealConv* plan = nullptr);

/// Var(R_n) without sampling: R_n = sum_m c_m xi_m with
/// c_m = sum_{j=0}^{n} dM(j) (a_{1-m} + ... + a_{n-j-m}); returns sum c_m^2.
double exact_var_R(const Kernel& k, const MemoryFunction& M, std::size_t n, int workers = 1);

struct WalkSample {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    GaussPath s;             // s_n at t_i = i/n
    GaussPath r;             // r_n at t_i = i/n
    std::vector<double> S;   // raw partial sums S_0..S_n
    std::vector<double> R;   // raw walk R_0..R_n
};

/// One full trial: innovations over the covering window, X, S, v, R and the
/// two normalised paths. Optional plans accelerate the two convolutions.
WalkSample sample_walk(const Kernel& k, const MemoryFunction& M, const InnovationModel& innov,
                       std::size_t n, rng::Xoshiro256pp& rng,
                       const fft::RealConv* xplan = nullptr,
                       const fft::RealConv* vplan = nullptr);

}  // namespace fracsum
