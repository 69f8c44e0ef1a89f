#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <vector>

#include "fracsum/parallel.hpp"
#include "fracsum/rng.hpp"

using namespace fracsum;

TEST_CASE("parallel_for touches every index exactly once", "[parallel]") {
    const std::size_t N = 10000;
    std::vector<std::atomic<int>> hits(N);
    for (auto& h : hits) h.store(0);
    par::parallel_for(N, 4, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (std::size_t i = 0; i < N; ++i) REQUIRE(hits[i].load() == 1);
}

TEST_CASE("block_sum equals the serial sum within one block", "[parallel]") {
    // Up to kSumBlock terms the fold order is literally left-to-right, so the
    // result must be bitwise equal to the plain loop.
    auto g = rng::make_stream(1, "bsum", 0);
    std::vector<double> x(par::kSumBlock);
    for (double& v : x) v = g.gaussian();
    REQUIRE(par::block_sum(x, 1) == par::sum_serial(x));
    REQUIRE(par::block_sum(x, 4) == par::sum_serial(x));
}

TEST_CASE("block_sum is worker-count independent", "[parallel]") {
    auto g = rng::make_stream(2, "bsum", 0);
    const std::size_t N = 3 * par::kSumBlock + 173;  // several blocks + remainder
    std::vector<double> x(N);
    for (double& v : x) v = g.gaussian() * 1e6;  // magnify rounding sensitivity
    const double w1 = par::block_sum(x, 1);
    const double w2 = par::block_sum(x, 2);
    const double w4 = par::block_sum(x, 4);
    REQUIRE(w1 == w2);  // bitwise, not approximately
    REQUIRE(w1 == w4);
    // And the blocked result still agrees with the flat sum numerically.
    REQUIRE(w1 == Catch::Approx(par::sum_serial(x)).epsilon(1e-12));
}

TEST_CASE("block_sum handles empty and tiny inputs", "[parallel]") {
    REQUIRE(par::block_sum(0, 4, [](std::size_t) { return 1.0; }) == 0.0);
    REQUIRE(par::block_sum(1, 4, [](std::size_t) { return 2.5; }) == 2.5);
    REQUIRE(par::block_sum(5, 1, [](std::size_t i) { return double(i); }) == 10.0);
}

TEST_CASE("resolve_workers maps non-positive requests to all cores", "[parallel]") {
    REQUIRE(par::resolve_workers(3) == 3);
    REQUIRE(par::resolve_workers(1) == 1);
    REQUIRE(par::resolve_workers(0) == par::max_workers());
    REQUIRE(par::resolve_workers(-1) == par::max_workers());
    REQUIRE(par::max_workers() >= 1);
}
