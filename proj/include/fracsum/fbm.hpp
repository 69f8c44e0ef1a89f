#pragma once

// Fractional Brownian motion on the uniform grid t_i = i/n: exact covariance,
// a Cholesky sampler (reference, n <= 4096) and a circulant-embedding sampler
// (fast path for large n). Both draw from caller-supplied random streams so
// Monte Carlo results are independent of trial scheduling.

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "fracsum/rng.hpp"

namespace fracsum {

struct TimeGrid {
    std::size_t n = 1;  // number of steps; grid points are i/n for i = 0..n

    double point(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(n); }
};

enum class PathKind { fbm, z_process, s_n, r_n };

struct GaussPath {
    TimeGrid grid;
    std::vector<double> values;  // length n + 1, values[0] == 0
    double hurst = 0.5;
    PathKind kind = PathKind::fbm;
};

/// Covariance of fBm: (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
double fbm_cov(double t, double s, double H);

enum class FbmMethod { cholesky, circulant };

/// Precomputes the sampling operator for one (grid, H, method); sample() is
/// const and thread-safe.
class FbmSampler {
public:
    FbmSampler(TimeGrid grid, double hurst, FbmMethod method, int workers = 1);
    ~FbmSampler();
    FbmSampler(const FbmSampler&) = delete;
    FbmSampler& operator=(const FbmSampler&) = delete;

    GaussPath sample(rng::Xoshiro256pp& rng) const;

    FbmMethod method() const noexcept { return method_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    double hurst() const noexcept { return hurst_; }

    /// Circulant method: smallest embedding eigenvalue over the largest, a
    /// diagnostic for how close the embedding came to failing.
    std::optional<double> min_eigenvalue_ratio() const noexcept { return min_eig_ratio_; }

private:
    void build_cholesky(int workers);
    void build_circulant();

    TimeGrid grid_;
    double hurst_ = 0.5;
    FbmMethod method_ = FbmMethod::cholesky;
    std::vector<double> chol_;        // lower triangle, row-major packed
    std::vector<double> amp_;         // circulant spectral amplitudes
    std::unique_ptr<class CirculantPlan> plan_;
    std::optional<double> min_eig_ratio_;
};

/// One-shot convenience wrapper around FbmSampler.
GaussPath sample_fbm(TimeGrid grid, double hurst, rng::Xoshiro256pp& rng,
                     FbmMethod method = FbmMethod::cholesky);

}  // namespace fracsum
