#include "fracsum/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace fracsum::fft {

namespace {

// FFTW plan creation is not thread-safe; execution via the new-array API is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuf {
    double* p = nullptr;
    explicit FftwBuf(std::size_t n) : p(fftw_alloc_real(n)) {
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuf() { fftw_free(p); }
    FftwBuf(const FftwBuf&) = delete;
    FftwBuf& operator=(const FftwBuf&) = delete;
};

struct FftwCBuf {
    fftw_complex* p = nullptr;
    explicit FftwCBuf(std::size_t n) : p(fftw_alloc_complex(n)) {
        if (!p) throw std::bad_alloc();
    }
    ~FftwCBuf() { fftw_free(p); }
    FftwCBuf(const FftwCBuf&) = delete;
    FftwCBuf& operator=(const FftwCBuf&) = delete;
};

}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    return out;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    const double cost = static_cast<double>(a.size()) * static_cast<double>(b.size());
    if (cost <= 1e8) return convolve_direct(a, b);
    RealConv conv(a, b.size());
    return conv.apply(b);
}

RealConv::RealConv(std::span<const double> kernel, std::size_t signal_len)
    : klen_(kernel.size()), xlen_(signal_len) {
    if (klen_ == 0 || xlen_ == 0) throw std::invalid_argument("RealConv: empty kernel or signal");
    nfft_ = next_pow2(klen_ + xlen_ - 1);
    const std::size_t nc = nfft_ / 2 + 1;

    FftwBuf in(nfft_);
    FftwCBuf out(nc);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(nfft_), in.p, out.p, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(nfft_), out.p, in.p, FFTW_ESTIMATE);
    }
    if (!fwd_ || !inv_) throw std::runtime_error("RealConv: FFTW plan creation failed");

    std::memset(in.p, 0, sizeof(double) * nfft_);
    std::memcpy(in.p, kernel.data(), sizeof(double) * klen_);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), in.p, out.p);
    kspec_.resize(nc);
    for (std::size_t i = 0; i < nc; ++i) kspec_[i] = {out.p[i][0], out.p[i][1]};
}

RealConv::~RealConv() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

std::vector<double> RealConv::apply(std::span<const double> x) const {
    if (x.size() != xlen_) throw std::invalid_argument("RealConv::apply: wrong signal length");
    const std::size_t nc = nfft_ / 2 + 1;
    FftwBuf real(nfft_);
    FftwCBuf spec(nc);

    std::memset(real.p, 0, sizeof(double) * nfft_);
    std::memcpy(real.p, x.data(), sizeof(double) * xlen_);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), real.p, spec.p);

    const double scale = 1.0 / static_cast<double>(nfft_);
    for (std::size_t i = 0; i < nc; ++i) {
        const std::complex<double> prod =
            std::complex<double>(spec.p[i][0], spec.p[i][1]) * kspec_[i] * scale;
        spec.p[i][0] = prod.real();
        spec.p[i][1] = prod.imag();
    }
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inv_), spec.p, real.p);

    std::vector<double> out(klen_ + xlen_ - 1);
    std::memcpy(out.data(), real.p, sizeof(double) * out.size());
    return out;
}

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
    if (n_ == 0) throw std::invalid_argument("ComplexFft: size must be positive");
    std::vector<std::complex<double>> scratch(n_);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(plan_mutex());
    // FFTW_UNALIGNED: executed on caller-owned std::vector storage later.
    plan_ = fftw_plan_dft_1d(static_cast<int>(n_), ptr, ptr, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) throw std::runtime_error("ComplexFft: FFTW plan creation failed");
}

ComplexFft::~ComplexFft() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (plan_) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void ComplexFft::forward(std::complex<double>* data) const {
    auto* ptr = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_), ptr, ptr);
}

}  // namespace fracsum::fft
