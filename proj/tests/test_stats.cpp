#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fracsum/errors.hpp"
#include "fracsum/rng.hpp"
#include "fracsum/stats.hpp"

using namespace fracsum;

TEST_CASE("kolmogorov survival function", "[stats]") {
    // frozen against an independent evaluation of 2 sum (-1)^{j-1} e^{-2 j^2 x^2}
    const double table[][2] = {
        {0.3, 0.999990694198665},  {0.5, 0.963945243664875}, {0.8, 0.544142411574198},
        {1.0, 0.269999671677355},  {1.18, 0.123453809429766}, {1.36, 0.049485876755378},
        {2.0, 0.000670925255780},
    };
    for (const auto& row : table) {
        INFO("lambda = " << row[0]);
        REQUIRE(std::abs(stats::kolmogorov_sf(row[0]) - row[1]) < 1e-10);
    }
    REQUIRE(stats::kolmogorov_sf(0.0) == 1.0);
    REQUIRE(stats::kolmogorov_sf(-2.0) == 1.0);
    REQUIRE(stats::kolmogorov_sf(5.0) < 1e-20);
}

TEST_CASE("two-sample KS basics", "[stats]") {
    std::vector<double> x(100);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(i % 7);  // plenty of ties
    const auto same = stats::ks_two_sample(x, x);
    REQUIRE(same.statistic == 0.0);
    REQUIRE(same.p_value == 1.0);

    const std::vector<double> lo(50, 1.0), hi(50, 2.0);
    const auto split = stats::ks_two_sample(lo, hi);
    REQUIRE(split.statistic == 1.0);
    REQUIRE(split.p_value < 1e-6);

    REQUIRE_THROWS_AS(stats::ks_two_sample(std::vector<double>(49, 0.0), x), CoverageError);
    REQUIRE_THROWS_AS(stats::ks_two_sample(x, std::vector<double>(10, 0.0)), CoverageError);
}

TEST_CASE("KS detects a unit shift", "[stats]") {
    const std::size_t N = 10000;
    auto rng = rng::make_stream(3, "stats-shift", 0);
    std::vector<double> x(N), y(N);
    for (std::size_t i = 0; i < N; ++i) {
        x[i] = rng.gaussian();
        y[i] = x[i] + 1.0;
    }
    REQUIRE(stats::ks_two_sample(x, y).p_value < 1e-6);
}

TEST_CASE("KS p-values are calibrated under the null", "[stats]") {
    const std::size_t N = 10000, pairs = 200;
    std::size_t below = 0;
    for (std::size_t r = 0; r < pairs; ++r) {
        auto rng = rng::make_stream(2718, "stats-null", r);
        std::vector<double> x(N), y(N);
        for (auto& v : x) v = rng.gaussian();
        for (auto& v : y) v = rng.gaussian();
        if (stats::ks_two_sample(x, y).p_value < 0.05) ++below;
    }
    const double frac = double(below) / double(pairs);
    INFO("fraction below 0.05: " << frac);
    REQUIRE(frac == Catch::Approx(0.05).margin(0.03));
}

TEST_CASE("descriptive statistics", "[stats]") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    REQUIRE(stats::mean(v) == Catch::Approx(2.5));
    REQUIRE(stats::variance(v) == Catch::Approx(5.0 / 3.0));
    REQUIRE(stats::median(v) == Catch::Approx(2.5));
    REQUIRE(stats::median(std::vector<double>{3.0, 1.0, 2.0}) == 2.0);
    REQUIRE(stats::central_moment(v, 1) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(stats::central_moment(v, 2) == Catch::Approx(1.25));
    REQUIRE(stats::central_moment(v, 4) == Catch::Approx(2.5625));

    std::vector<double> w{3.0, 5.0, 7.0, 9.0};  // w = 2v + 1
    REQUIRE(stats::correlation(v, w) == Catch::Approx(1.0));
    for (auto& t : w) t = -t;
    REQUIRE(stats::correlation(v, w) == Catch::Approx(-1.0));

    REQUIRE_THROWS_AS(stats::mean(std::vector<double>{}), CoverageError);
    REQUIRE_THROWS_AS(stats::variance(std::vector<double>{1.0}), CoverageError);
    REQUIRE_THROWS_AS(stats::correlation(v, std::vector<double>{1.0, 2.0}), CoverageError);
    REQUIRE_THROWS_AS(stats::correlation(v, std::vector<double>(4, 2.0)), DegenerateError);
    REQUIRE_THROWS_AS(stats::central_moment(v, 0), DomainError);
}
