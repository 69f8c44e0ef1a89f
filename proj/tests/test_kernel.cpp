#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fracsum/errors.hpp"
#include "fracsum/kernel.hpp"

using namespace fracsum;

TEST_CASE("fractional kernel coefficients follow the recurrence", "[kernel]") {
    const Kernel iid = make_fractional_kernel(0.5, 100);
    REQUIRE(iid.coeffs().size() == 1);
    REQUIRE(iid.at(0) == 1.0);

    const Kernel pos = make_fractional_kernel(0.7, 8);  // d = 0.2
    REQUIRE(pos.at(0) == Catch::Approx(1.0));
    REQUIRE(pos.at(1) == Catch::Approx(0.2));
    REQUIRE(pos.at(2) == Catch::Approx(0.12));

    const Kernel neg = make_fractional_kernel(0.3, 8);  // d = -0.2
    REQUIRE(neg.at(0) == Catch::Approx(1.0));
    REQUIRE(neg.at(1) == Catch::Approx(-0.2));
    REQUIRE(neg.at(2) == Catch::Approx(-0.08));

    REQUIRE_THROWS_AS(make_fractional_kernel(1.0, 8), DomainError);
    REQUIRE_THROWS_AS(make_fractional_kernel(0.0, 8), DomainError);
}

TEST_CASE("truncation rule", "[kernel]") {
    // H = 0.7 tails decay like k^{-0.8} in square, far too slowly for 1e-6 at
    // small K; a loose 1e-2 budget is satisfied already at K = 64.
    REQUIRE_THROWS_AS(make_fractional_kernel(0.7, 64, 1e-6), TruncationError);
    REQUIRE_NOTHROW(make_fractional_kernel(0.7, 64, 1e-2));
    REQUIRE(fractional_tail_ratio(0.7, 64) < 1e-2);
    REQUIRE(fractional_tail_ratio(0.7, 64) > 1e-6);
    REQUIRE(fractional_tail_ratio(0.5, 4) == 0.0);

    // The default rule walks K up and is capped: H = 0.7 needs K ~ 1e8 for
    // 1e-6, so the cap is returned; milder memory resolves below it.
    REQUIRE(default_truncation_K(0.7) == (std::size_t{1} << 18));
    const std::size_t k55 = default_truncation_K(0.55);
    REQUIRE(k55 < (std::size_t{1} << 18));
    REQUIRE(fractional_tail_ratio(0.55, k55) <= 1e-6);
}

TEST_CASE("kernel accessors, prefix sums, window sums", "[kernel]") {
    const Kernel k(std::vector<double>{0.5, -0.25, 0.125}, -1, 0.5);
    REQUIRE(k.k_min() == -1);
    REQUIRE(k.k_max() == 1);
    REQUIRE(k.at(-1) == 0.5);
    REQUIRE(k.at(0) == -0.25);
    REQUIRE(k.at(1) == 0.125);
    REQUIRE(k.at(2) == 0.0);
    REQUIRE(k.at(-2) == 0.0);
    REQUIRE(k.sum_sq() == Catch::Approx(0.25 + 0.0625 + 0.015625));
    REQUIRE(k.prefix(-2) == 0.0);
    REQUIRE(k.prefix(0) == Catch::Approx(0.25));
    REQUIRE(k.prefix(10) == Catch::Approx(0.375));
    REQUIRE(k.window_sum(0, 1) == Catch::Approx(-0.125));
    REQUIRE(k.window_sum(5, 3) == 0.0);

    REQUIRE_THROWS_AS(Kernel(std::vector<double>{}, 0, 0.5), DomainError);
    REQUIRE_THROWS_AS(Kernel(std::vector<double>{0.0, 0.0}, 0, 0.5), DegenerateError);
    REQUIRE_THROWS_AS(Kernel(std::vector<double>{1.0}, 0, 1.5), DomainError);
}

TEST_CASE("variance of partial sums on worked examples", "[kernel]") {
    REQUIRE(var_partial_sum(make_iid_kernel(), 10) == Catch::Approx(10.0));
    REQUIRE(var_partial_sum(make_iid_kernel(), 0) == 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    const Kernel ma(std::vector<double>{r, r}, 0, 0.5);
    REQUIRE(var_partial_sum(ma, 2) == Catch::Approx(3.0));  // 2 + 1/2 + 1/2

    // the blocked path is bitwise worker-count independent; the plain serial
    // loop associates differently, so it only agrees to rounding
    const Kernel fr = make_fractional_kernel(0.7, 4096);
    const double blocked = var_partial_sum(fr, 1024, 1);
    REQUIRE(var_partial_sum(fr, 1024, 4) == blocked);
    REQUIRE(var_partial_sum(fr, 1024, 3) == blocked);
    REQUIRE(var_partial_sum_serial(fr, 1024) == Catch::Approx(blocked).epsilon(1e-12));
}

TEST_CASE("variance is invariant under window shifts", "[kernel]") {
    const std::vector<double> c{0.3, -0.1, 0.7, 0.2};
    const Kernel a(c, 0, 0.5);
    const Kernel b(c, -7, 0.5);
    const Kernel d(c, 13, 0.5);
    for (const std::size_t n : {1u, 2u, 5u, 64u}) {
        const double va = var_partial_sum(a, n);
        REQUIRE(var_partial_sum(b, n) == Catch::Approx(va).epsilon(1e-14));
        REQUIRE(var_partial_sum(d, n) == Catch::Approx(va).epsilon(1e-14));
    }
}

TEST_CASE("h_of normalization", "[kernel]") {
    REQUIRE(h_of(make_iid_kernel(0.5), 100) == Catch::Approx(1.0));
    // declaring the wrong H shows up as a drifting h: sqrt(100)/100^0.7
    REQUIRE(h_of(make_iid_kernel(0.7), 100) == Catch::Approx(std::pow(10.0, -0.4)));
    const Kernel fr = make_fractional_kernel(0.7, 512);
    REQUIRE(h_of(fr, 1) == Catch::Approx(std::sqrt(fr.sum_sq())));
    // identity Var(S_n) = h(n)^2 n^{2H} holds exactly by construction
    for (const std::size_t n : {2u, 17u, 256u}) {
        const double h = h_of(fr, n);
        REQUIRE(h * h * std::pow(double(n), 1.4) ==
                Catch::Approx(var_partial_sum(fr, n)).epsilon(1e-12));
    }
}

TEST_CASE("h varies slowly for the fractional kernel", "[kernel]") {
    const Kernel fr = make_fractional_kernel(0.7, std::size_t{1} << 14);
    double lo = 1e300, hi = 0.0;
    for (std::size_t n = 16; n <= (std::size_t{1} << 16); n *= 2) {
        const double h = h_of(fr, n);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    REQUIRE(hi / lo <= 2.0);
}

TEST_CASE("hurst slope recovers H", "[kernel]") {
    const std::vector<std::size_t> small{4, 16, 64};
    REQUIRE(estimate_hurst_slope(make_iid_kernel(), small) == Catch::Approx(0.5).margin(1e-12));

    // telescoping kernel: Var(S_n) = 2 for every n, slope 0
    const Kernel diff(std::vector<double>{1.0, -1.0}, 0, 0.5);
    REQUIRE(estimate_hurst_slope(diff, small) == Catch::Approx(0.0).margin(1e-12));

    std::vector<std::size_t> ns;
    for (std::size_t n = 64; n <= 4096; n *= 2) ns.push_back(n);
    const Kernel fr = make_fractional_kernel(0.7, std::size_t{1} << 16);
    REQUIRE(estimate_hurst_slope(fr, ns) == Catch::Approx(0.7).margin(0.05));

    REQUIRE_THROWS_AS(estimate_hurst_slope(make_iid_kernel(), std::vector<std::size_t>{4, 16}),
                      CoverageError);
    REQUIRE_THROWS_AS(estimate_hurst_slope(make_iid_kernel(), std::vector<std::size_t>{1, 4, 16}),
                      CoverageError);
}

TEST_CASE("two-sided kernel", "[kernel]") {
    const Kernel ts = make_two_sided(0.7, 16);
    REQUIRE(ts.k_min() == -16);
    REQUIRE(ts.k_max() == 16);
    REQUIRE(ts.at(-3) == Catch::Approx(ts.at(3)));
    // every weight is scaled by 1/sqrt(2) and the centre appears once, so the
    // L2 mass is sum psi^2 minus half the centre
    const Kernel os = make_fractional_kernel(0.7, 16);
    REQUIRE(ts.sum_sq() ==
            Catch::Approx(os.sum_sq() - 0.5 * os.at(0) * os.at(0)).epsilon(1e-12));
    REQUIRE(var_partial_sum(ts, 64) > 0.0);
}

TEST_CASE("window sums satisfy the moving-block bound", "[kernel]") {
    // |a_{k+1} + ... + a_{k+n}| <= sqrt(4 sqrt(V) sum a^2 (1 + 1/(2 sqrt(V))))
    const Kernel fr = make_fractional_kernel(0.7, 1 << 12);
    for (std::size_t n = 1; n <= (std::size_t{1} << 12); n *= 4) {
        const double V = var_partial_sum(fr, n);
        const double bound =
            std::sqrt(4.0 * std::sqrt(V) * fr.sum_sq() * (1.0 + 1.0 / (2.0 * std::sqrt(V))));
        const long lo = fr.k_min() - static_cast<long>(n);
        for (long k = lo; k <= fr.k_max(); ++k) {
            const double w = fr.window_sum(k + 1, k + static_cast<long>(n));
            REQUIRE(std::abs(w) <= bound + 1e-12);
        }
    }
}

TEST_CASE("normalized block variances reduce to variance ratios", "[kernel]") {
    // sum_k (A_{k,n}(t) - A_{k,n}(0))^2 = Var(S_m)/Var(S_n) for m = [nt]:
    // both sides are the same finite sum, so they agree to rounding.
    const Kernel fr = make_fractional_kernel(0.7, 2048);
    const std::size_t n = 512;
    const double Vn = var_partial_sum(fr, n);
    for (const std::size_t m : {0u, 37u, 256u, 512u}) {
        const long lo = 1 - fr.k_max();
        const long hi = static_cast<long>(m) - fr.k_min();
        double lhs = 0.0;
        for (long k = lo; k <= hi; ++k) {
            const double w = fr.prefix(static_cast<long>(m) - k) - fr.prefix(-k);
            lhs += w * w;
        }
        lhs /= Vn;
        const double rhs = var_partial_sum(fr, m) / Vn;
        REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-10).margin(1e-12));
    }
}

TEST_CASE("crude variance bound", "[kernel]") {
    const Kernel fr = make_fractional_kernel(0.7, 1024);
    for (std::size_t n = 1; n <= 1024; n *= 4)
        REQUIRE(var_partial_sum(fr, n) <=
                double(n) * double(n) * fr.sum_sq() * (1.0 + 1e-12));
}
