#pragma once

// Deterministic random streams: splitmix64 seeding and xoshiro256++ generation.
// Hand-rolled so that sequences are bit-identical across platforms and standard
// library versions (<random> distributions are implementation-defined). Every
// Monte Carlo trial draws from its own stream derived from (master seed, test
// label, trial index), which makes results independent of scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace fracsum::rng {

struct SplitMix64 {
    std::uint64_t state = 0;

    constexpr std::uint64_t next() noexcept {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

/// FNV-1a hash, used to fold stream labels into seeds.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Seed of the stream identified by (master, label, index). Each component
/// passes through a full splitmix64 round so neighbouring indices do not yield
/// correlated generator states.
constexpr std::uint64_t derive_stream(std::uint64_t master, std::string_view label,
                                      std::uint64_t index) noexcept {
    SplitMix64 sm{master};
    sm.state = sm.next() ^ fnv1a(label);
    sm.state = sm.next() ^ (index * 0x9e3779b97f4a7c15ull + 1);
    return sm.next();
}

class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) noexcept {
        SplitMix64 sm{seed};
        for (auto& word : s_) word = sm.next();
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0,1) with 53-bit resolution.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0,1); rejects the zero draw so log() stays finite.
    double uniform_pos() noexcept {
        double u;
        do {
            u = uniform01();
        } while (u == 0.0);
        return u;
    }

    /// Standard normal via the Marsaglia polar method; caches the spare deviate.
    double gaussian() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, q;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            q = u * u + v * v;
        } while (q >= 1.0 || q == 0.0);
        const double f = std::sqrt(-2.0 * std::log(q) / q);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Gamma(shape, 1) for shape >= 1 (Marsaglia–Tsang squeeze method).
    double gamma(double shape) noexcept {
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = gaussian();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline Xoshiro256pp make_stream(std::uint64_t master, std::string_view label,
                                std::uint64_t index) noexcept {
    return Xoshiro256pp(derive_stream(master, label, index));
}

}  // namespace fracsum::rng
