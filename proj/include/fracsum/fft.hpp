#pragma once

// Linear convolution (direct and FFT-backed) plus the complex transform used by
// the circulant fBm sampler. FFTW plans are created once per object under a
// global mutex and executed with the new-array interface, so a plan can be
// shared by concurrent Monte Carlo trials.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracsum::fft {

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

/// Full linear convolution, schoolbook. Result length |a| + |b| - 1.
std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b);

/// Full linear convolution. Uses the direct method while |a|*|b| <= 1e8
/// multiply-adds and the FFT route beyond that.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

/// Reusable FFT convolver for one fixed kernel and signal length. apply() is
/// const and thread-safe: each call owns its scratch buffers.
class RealConv {
public:
    RealConv(std::span<const double> kernel, std::size_t signal_len);
    RealConv(const RealConv&) = delete;
    RealConv& operator=(const RealConv&) = delete;
    ~RealConv();

    /// Linear convolution of x (length signal_len) with the stored kernel;
    /// result length signal_len + kernel_len - 1.
    std::vector<double> apply(std::span<const double> x) const;

    std::size_t kernel_len() const noexcept { return klen_; }
    std::size_t signal_len() const noexcept { return xlen_; }

private:
    std::size_t klen_ = 0;
    std::size_t xlen_ = 0;
    std::size_t nfft_ = 0;
    std::vector<std::complex<double>> kspec_;
    void* fwd_ = nullptr;  // fftw_plan, kept opaque here
    void* inv_ = nullptr;
};

/// In-place forward complex DFT of fixed size (unnormalised, FFTW sign -1).
class ComplexFft {
public:
    explicit ComplexFft(std::size_t n);
    ComplexFft(const ComplexFft&) = delete;
    ComplexFft& operator=(const ComplexFft&) = delete;
    ~ComplexFft();

    void forward(std::complex<double>* data) const;

    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_ = 0;
    void* plan_ = nullptr;
};

}  // namespace fracsum::fft
