#include "fracsum/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "fracsum/errors.hpp"
#include "fracsum/fft.hpp"
#include "fracsum/parallel.hpp"

namespace fracsum {

namespace {

double pow2h(double x, double H) {
    if (x == 0.0) return 0.0;
    if (H == 0.5) return x;
    return std::pow(x, 2.0 * H);
}

}  // namespace

double fbm_cov(double t, double s, double H) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError("fbm_cov: H must lie in (0,1)");
    if (!(t >= 0.0 && s >= 0.0)) throw DomainError("fbm_cov: arguments must be non-negative");
    return 0.5 * (pow2h(t, H) + pow2h(s, H) - pow2h(std::abs(t - s), H));
}

// Holds the forward FFT plan for the circulant sampler.
class CirculantPlan {
public:
    explicit CirculantPlan(std::size_t n) : fft(n) {}
    fft::ComplexFft fft;
};

FbmSampler::FbmSampler(TimeGrid grid, double hurst, FbmMethod method, int workers)
    : grid_(grid), hurst_(hurst), method_(method) {
    if (grid_.n < 1) throw DomainError("FbmSampler: grid must have at least one step");
    if (!(hurst_ > 0.0 && hurst_ < 1.0)) throw DomainError("FbmSampler: H must lie in (0,1)");
    if (method_ == FbmMethod::cholesky) {
        if (grid_.n > 4096)
            throw DomainError("FbmSampler: cholesky limited to n <= 4096; use circulant");
        build_cholesky(workers);
    } else {
        build_circulant();
    }
}

FbmSampler::~FbmSampler() = default;

void FbmSampler::build_cholesky(int workers) {
    const std::size_t n = grid_.n;
    std::vector<double> cov(n * n);
    par::parallel_for(n, workers, [&](std::size_t i) {
        const double ti = grid_.point(i + 1);
        for (std::size_t j = 0; j <= i; ++j)
            cov[i * n + j] = fbm_cov(ti, grid_.point(j + 1), hurst_);
    });

    // Left-looking Cholesky; the column solve parallelises over rows without
    // changing any arithmetic, so results match the serial factorisation.
    auto factor = [&](std::vector<double>& a) -> bool {
        for (std::size_t j = 0; j < n; ++j) {
            double diag = a[j * n + j];
            for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
            if (!(diag > 0.0)) return false;
            const double root = std::sqrt(diag);
            a[j * n + j] = root;
            par::parallel_for(n - j - 1, workers, [&](std::size_t off) {
                const std::size_t i = j + 1 + off;
                double v = a[i * n + j];
                for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
                a[i * n + j] = v / root;
            });
        }
        return true;
    };

    std::vector<double> work = cov;
    if (!factor(work)) {
        // One retry with a tiny diagonal jitter; rounding in t^{2H} can push a
        // late pivot a hair below zero for H near 1.
        double maxdiag = 0.0;
        for (std::size_t i = 0; i < n; ++i) maxdiag = std::max(maxdiag, cov[i * n + i]);
        work = cov;
        for (std::size_t i = 0; i < n; ++i) work[i * n + i] += 1e-10 * maxdiag;
        if (!factor(work)) {
            double pivot = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double diag = work[j * n + j];
                for (std::size_t k = 0; k < j; ++k) diag -= work[j * n + k] * work[j * n + k];
                if (!(diag > 0.0)) {
                    pivot = diag;
                    break;
                }
            }
            throw NumericalError("FbmSampler: covariance not positive definite, pivot " +
                                 std::to_string(pivot));
        }
    }
    chol_ = std::move(work);
}

void FbmSampler::build_circulant() {
    const std::size_t m = grid_.n;
    // Circulant embedding of the fGn autocovariance
    // gamma_k = ((k+1)^{2H} - 2 k^{2H} + |k-1|^{2H}) / 2 at unit spacing;
    // the grid scale enters through self-similarity at sample time.
    auto gamma = [&](std::size_t k) {
        const double kk = static_cast<double>(k);
        return 0.5 * (pow2h(kk + 1.0, hurst_) - 2.0 * pow2h(kk, hurst_) +
                      pow2h(kk >= 1.0 ? kk - 1.0 : 1.0 - kk, hurst_));
    };
    const std::size_t two_m = 2 * m;
    std::vector<std::complex<double>> c(two_m);
    for (std::size_t k = 0; k <= m; ++k) c[k] = gamma(k);
    for (std::size_t k = 1; k < m; ++k) c[two_m - k] = gamma(k);

    fft::ComplexFft plan(two_m);
    plan.forward(c.data());

    double max_eig = 0.0, min_eig = 0.0;
    for (std::size_t k = 0; k < two_m; ++k) {
        const double lam = c[k].real();
        max_eig = std::max(max_eig, lam);
        min_eig = k == 0 ? lam : std::min(min_eig, lam);
    }
    min_eig_ratio_ = min_eig / max_eig;
    if (min_eig < -1e-8 * max_eig)
        throw EmbeddingError("FbmSampler: circulant embedding not non-negative definite",
                             min_eig / max_eig);

    // Real modes (k = 0, m) get sqrt(lambda / 2m); conjugate pairs split their
    // variance between real and imaginary parts: sqrt(lambda / 4m).
    amp_.resize(two_m);
    const double inv2m = 1.0 / static_cast<double>(two_m);
    for (std::size_t k = 0; k < two_m; ++k) {
        const double lam = std::max(c[k].real(), 0.0);
        amp_[k] = (k == 0 || k == m) ? std::sqrt(lam * inv2m) : std::sqrt(lam * inv2m * 0.5);
    }

    plan_ = std::make_unique<CirculantPlan>(two_m);
}

GaussPath FbmSampler::sample(rng::Xoshiro256pp& rng) const {
    const std::size_t n = grid_.n;
    GaussPath path;
    path.grid = grid_;
    path.hurst = hurst_;
    path.kind = PathKind::fbm;
    path.values.assign(n + 1, 0.0);

    if (method_ == FbmMethod::cholesky) {
        std::vector<double> z(n);
        for (auto& g : z) g = rng.gaussian();
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (std::size_t k = 0; k <= i; ++k) v += chol_[i * n + k] * z[k];
            path.values[i + 1] = v;
        }
        return path;
    }

    const std::size_t m = n;
    const std::size_t two_m = 2 * m;
    std::vector<std::complex<double>> e(two_m);
    // Draw order is fixed: the two real modes first, then the conjugate pairs
    // in index order, so a given stream always yields the same path.
    e[0] = amp_[0] * rng.gaussian();
    e[m] = amp_[m] * rng.gaussian();
    for (std::size_t k = 1; k < m; ++k) {
        const double ga = rng.gaussian();
        const double gb = rng.gaussian();
        e[k] = std::complex<double>(ga, gb) * amp_[k];
        e[two_m - k] = std::conj(e[k]);
    }
    plan_->fft.forward(e.data());

    // Real parts are unit-spacing fGn; rescale by self-similarity to spacing
    // 1/n and accumulate.
    const double scale = std::pow(static_cast<double>(m), -hurst_);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        acc += e[j].real();
        path.values[j + 1] = acc * scale;
    }
    return path;
}

GaussPath sample_fbm(TimeGrid grid, double hurst, rng::Xoshiro256pp& rng, FbmMethod method) {
    FbmSampler sampler(grid, hurst, method);
    return sampler.sample(rng);
}

}  // namespace fracsum
