#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fracsum/fft.hpp"
#include "fracsum/parallel.hpp"
#include "fracsum/rng.hpp"

using namespace fracsum;

TEST_CASE("next_pow2", "[fft]") {
    REQUIRE(fft::next_pow2(1) == 1);
    REQUIRE(fft::next_pow2(2) == 2);
    REQUIRE(fft::next_pow2(3) == 4);
    REQUIRE(fft::next_pow2(1024) == 1024);
    REQUIRE(fft::next_pow2(1025) == 2048);
}

TEST_CASE("direct convolution on a worked example", "[fft]") {
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{3.0, 4.0, 5.0};
    const std::vector<double> c = fft::convolve_direct(a, b);
    REQUIRE(c.size() == 4);
    REQUIRE(c[0] == 3.0);
    REQUIRE(c[1] == 10.0);
    REQUIRE(c[2] == 13.0);
    REQUIRE(c[3] == 10.0);
}

TEST_CASE("FFT convolution matches the direct method", "[fft]") {
    auto g = rng::make_stream(5, "conv", 0);
    for (const auto [na, nb] : {std::pair<std::size_t, std::size_t>{1, 7},
                                {7, 1},
                                {33, 129},
                                {1000, 317}}) {
        std::vector<double> a(na), b(nb);
        for (double& v : a) v = g.gaussian();
        for (double& v : b) v = g.gaussian();
        const auto direct = fft::convolve_direct(a, b);
        const fft::RealConv plan(a, nb);
        const auto viafft = plan.apply(b);
        REQUIRE(viafft.size() == direct.size());
        double scale = 1.0;
        for (double v : direct) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < direct.size(); ++i)
            REQUIRE(std::abs(viafft[i] - direct[i]) <= 1e-10 * scale);
        // convolve() dispatches internally; result must agree as well.
        const auto dispatched = fft::convolve(a, b);
        for (std::size_t i = 0; i < direct.size(); ++i)
            REQUIRE(std::abs(dispatched[i] - direct[i]) <= 1e-10 * scale);
    }
}

TEST_CASE("shared RealConv plan is safe under concurrent apply", "[fft]") {
    auto g = rng::make_stream(6, "convmt", 0);
    std::vector<double> ker(65), sig(512);
    for (double& v : ker) v = g.gaussian();
    for (double& v : sig) v = g.gaussian();
    const fft::RealConv plan(ker, sig.size());
    const auto serial = plan.apply(sig);

    const std::size_t reps = 16;
    std::vector<std::vector<double>> out(reps);
    par::parallel_for(reps, 4, [&](std::size_t r) { out[r] = plan.apply(sig); });
    for (const auto& o : out) REQUIRE(o == serial);  // bitwise: same plan, same input
}

TEST_CASE("ComplexFft matches a hand-rolled DFT", "[fft]") {
    const std::size_t n = 16;
    auto g = rng::make_stream(7, "dft", 0);
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {g.gaussian(), g.gaussian()};

    std::vector<std::complex<double>> ref(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * std::numbers::pi * double(k) * double(j) / double(n);
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        ref[k] = acc;
    }

    const fft::ComplexFft plan(n);
    plan.forward(x.data());
    for (std::size_t k = 0; k < n; ++k) {
        REQUIRE(std::abs(x[k].real() - ref[k].real()) < 1e-10);
        REQUIRE(std::abs(x[k].imag() - ref[k].imag()) < 1e-10);
    }
}

TEST_CASE("RealConv rejects bad shapes", "[fft]") {
    REQUIRE_THROWS_AS(fft::RealConv(std::vector<double>{}, 4), std::invalid_argument);
    const fft::RealConv plan(std::vector<double>{1.0, 2.0}, 8);
    REQUIRE_THROWS_AS(plan.apply(std::vector<double>(7, 0.0)), std::invalid_argument);
}
