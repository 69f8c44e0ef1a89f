#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "fracsum/errors.hpp"
#include "fracsum/limit.hpp"
#include "fracsum/report.hpp"
#include "fracsum/verify.hpp"

using namespace fracsum;

namespace {

ExperimentConfig small_cfg() {
    ExperimentConfig cfg;
    cfg.n_values = {5, 17, 63};
    cfg.trials = 200;
    cfg.eval_times = {0.5, 1.0};
    cfg.cramer_wold = {{1.0}};
    cfg.fbm_grid = 1024;
    return cfg;
}

const ReportLine* find_line(const TestReport& rep, const std::string& label) {
    for (const auto& ln : rep.lines)
        if (ln.label == label) return &ln;
    return nullptr;
}

// The echo faithfully records the configured worker count, so comparing runs
// that differ only in workers means comparing everything but the echo.
std::string json_sans_echo(TestReport rep) {
    rep.config_echo.clear();
    return report::to_json({&rep, 1});
}

}  // namespace

TEST_CASE("config validation", "[verify]") {
    REQUIRE_NOTHROW(validate(ExperimentConfig{}, Purpose::verify));

    auto expect_bad = [](auto&& mutate) {
        ExperimentConfig cfg;
        mutate(cfg);
        REQUIRE_THROWS_AS(validate(cfg, Purpose::verify), ConfigError);
    };
    expect_bad([](auto& c) { c.kernel.hurst = 0.0; });
    expect_bad([](auto& c) { c.kernel.hurst = 1.0; });
    expect_bad([](auto& c) { c.kernel.type = KernelSpec::Type::explicit_coeffs; });
    expect_bad([](auto& c) { c.n_values = {}; });
    expect_bad([](auto& c) { c.n_values = {16, 16}; });
    expect_bad([](auto& c) { c.n_values = {0, 4}; });
    expect_bad([](auto& c) { c.trials = 50; });
    expect_bad([](auto& c) { c.eval_times = {0.5, 0.25}; });
    expect_bad([](auto& c) { c.eval_times = {0.5, 1.5}; });
    expect_bad([](auto& c) { c.cramer_wold = {}; });
    expect_bad([](auto& c) { c.cramer_wold = {{0.0, 0.0}}; });
    expect_bad([](auto& c) { c.cramer_wold = {{1.0, 1.0, 1.0, 1.0}}; });
    expect_bad([](auto& c) { c.significance = 0.0; });
    expect_bad([](auto& c) { c.seed_replicates = 3; });
    expect_bad([](auto& c) { c.quad_points = 32; });
    expect_bad([](auto& c) { c.fbm_grid = 64; });
    expect_bad([](auto& c) { c.cov_tolerance = 0.0; });
    expect_bad([](auto& c) { c.var_ratio_band = -0.1; });
    expect_bad([](auto& c) { c.delta_values = {0.25, 2.0}; });
    expect_bad([](auto& c) { c.epsilon_values = {}; });

    // a simulation run tolerates small trial counts, a verification does not
    ExperimentConfig sim;
    sim.trials = 10;
    sim.seed_replicates = 1;
    REQUIRE_NOTHROW(validate(sim, Purpose::simulate));
    REQUIRE_THROWS_AS(validate(sim, Purpose::verify), ConfigError);

    // truncation rule: H=0.7 cannot reach the default tail budget at K=64
    ExperimentConfig tr;
    tr.kernel.type = KernelSpec::Type::fractional;
    tr.kernel.hurst = 0.7;
    tr.kernel.truncation = 64;
    REQUIRE_THROWS_AS(validate(tr, Purpose::verify), ConfigError);
    tr.kernel.allow_truncation_override = true;
    REQUIRE_NOTHROW(validate(tr, Purpose::verify));

    // the moment condition names its numbers
    ExperimentConfig mc;
    mc.kernel.type = KernelSpec::Type::fractional;
    mc.kernel.hurst = 0.3;
    mc.innovation.law = InnovationModel::Law::student_t;
    mc.innovation.df = 3.0;
    REQUIRE_THROWS_WITH(validate(mc, Purpose::verify),
                        Catch::Matchers::ContainsSubstring("moment condition alpha*H>1 violated"));
}

TEST_CASE("spec builders", "[verify]") {
    KernelSpec ks;
    ks.hurst = 0.6;
    const Kernel iid = build_kernel(ks);
    REQUIRE(iid.coeffs().size() == 1);
    REQUIRE(iid.target_hurst() == 0.6);

    ks.type = KernelSpec::Type::fractional;
    ks.hurst = 0.7;
    ks.truncation = 8;
    ks.allow_truncation_override = true;
    const Kernel fr = build_kernel(ks);
    REQUIRE(fr.coeffs().size() == 9);
    REQUIRE(fr.at(1) == Catch::Approx(0.2));

    ks.two_sided = true;
    REQUIRE(build_kernel(ks).k_min() == -8);

    KernelSpec ex;
    ex.type = KernelSpec::Type::explicit_coeffs;
    ex.coeffs = {1.0, 2.0};
    ex.k_min = -1;
    ex.hurst = 0.5;
    const Kernel ek = build_kernel(ex);
    REQUIRE(ek.at(-1) == 1.0);
    REQUIRE(ek.at(0) == 2.0);

    MemorySpec ms;  // constant, nu = 1 -> M(t) = t
    ms.nu = 2.0;
    REQUIRE(build_memory(ms)(3.0) == Catch::Approx(9.0));
    ms.form = SlowlyVarying::Form::bounded_rational;
    ms.nu = 0.0;
    REQUIRE(build_memory(ms)(0.0) == Catch::Approx(1.0));
    ms.form = SlowlyVarying::Form::log_shift;
    ms.nu = 1.0;
    REQUIRE(build_memory(ms)(0.0) == 0.0);
    ms.form = SlowlyVarying::Form::tabulated;
    ms.table_t = {0.0, 2.0};
    ms.table_v = {1.0, 3.0};
    REQUIRE(build_memory(ms)(1.0) == Catch::Approx(2.0));

    InnovationSpec is;
    REQUIRE(build_innovation(is).law() == InnovationModel::Law::gaussian);
    is.law = InnovationModel::Law::student_t;
    is.df = 7.0;
    REQUIRE(build_innovation(is).df() == 7.0);
}

TEST_CASE("covariance convergence on the iid kernel", "[verify]") {
    ExperimentConfig cfg = small_cfg();
    const TestReport rep = test_cov_convergence(cfg);
    REQUIRE(rep.name == "cov_convergence");
    REQUIRE(rep.verdict == Verdict::pass);
    REQUIRE(!rep.config_echo.empty());

    // (t,t) at t=1 is the normalization itself: gap 0 at every n
    const auto* diag = find_line(rep, "cov(1,1)/final_gap");
    REQUIRE(diag != nullptr);
    REQUIRE(diag->value == 0.0);
    REQUIRE(diag->ok);

    // (1/2, 1) for odd n: E s_n(1/2)s_n(1) = [n/2]/n, gap 1/(2n) <= 1/n
    const auto* gap = find_line(rep, "cov(0.5,1)/n63/gap");
    REQUIRE(gap != nullptr);
    REQUIRE(gap->value == Catch::Approx(0.5 - 31.0 / 63.0));
    REQUIRE(gap->value <= 1.0 / 63.0);

    // deterministic: identical numbers regardless of workers
    ExperimentConfig par = cfg;
    par.workers = 4;
    const TestReport rep2 = test_cov_convergence(par);
    REQUIRE(json_sans_echo(rep) == json_sans_echo(rep2));
}

TEST_CASE("variance ratio closed form", "[verify]") {
    ExperimentConfig cfg = small_cfg();
    cfg.n_values = {4, 64, 100, 1024};

    const auto rows = var_ratio_table(cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        const double n = double(row.n);
        REQUIRE(row.sigma2 == Catch::Approx(1.0 / 3.0));
        REQUIRE(row.var_R_exact ==
                Catch::Approx(n * (n + 1.0) * (2.0 * n + 1.0) / 6.0).epsilon(1e-12));
        REQUIRE(row.normalizer == Catch::Approx(n * n * n).epsilon(1e-12));
        REQUIRE(row.ratio ==
                Catch::Approx((1.0 + 1.0 / n) * (1.0 + 0.5 / n)).epsilon(1e-12));
    }
    REQUIRE(rows[2].ratio == Catch::Approx(1.0151).margin(5e-5));  // n = 100

    const TestReport rep = test_var_ratio(cfg);
    REQUIRE(rep.verdict == Verdict::pass);
    const auto* final_dev = find_line(rep, "var_ratio/final_abs_dev");
    REQUIRE(final_dev != nullptr);
    // (1 + 1/n)(1 + 1/(2n)) - 1 = 3/(2n) + 1/(2n^2)
    REQUIRE(final_dev->value ==
            Catch::Approx(1.5 / 1024.0 + 0.5 / (1024.0 * 1024.0)).epsilon(1e-9));
    REQUIRE(final_dev->ok);
}

TEST_CASE("modulus report", "[verify]") {
    ExperimentConfig cfg = small_cfg();
    cfg.n_values = {256};
    const double deltas[] = {1.0, 0.25, 1.0 / 16.0, 1.0 / 64.0};
    const TestReport rep = test_modulus(cfg, deltas);
    REQUIRE(rep.verdict == Verdict::pass);
    // 2 epsilons x 4 deltas, plus the final assertion for the target epsilon
    REQUIRE(rep.lines.size() == 9);
    const auto* final1 = find_line(rep, "modulus/eps1/smallest_delta");
    REQUIRE(final1 != nullptr);
    REQUIRE(final1->value < 0.05);
    REQUIRE(find_line(rep, "modulus/eps0.5/delta0.25") != nullptr);

    ExperimentConfig par = cfg;
    par.workers = 3;
    const TestReport rep2 = test_modulus(par, deltas);
    REQUIRE(json_sans_echo(rep) == json_sans_echo(rep2));

    const double bad[] = {1.5};
    REQUIRE_THROWS_AS(test_modulus(cfg, bad), DomainError);
    REQUIRE_THROWS_AS(test_modulus(cfg, std::span<const double>{}), DomainError);
}

TEST_CASE("moment bound report", "[verify]") {
    ExperimentConfig cfg = small_cfg();
    cfg.kernel.type = KernelSpec::Type::fractional;
    cfg.kernel.hurst = 0.7;
    cfg.kernel.truncation = 256;
    cfg.kernel.allow_truncation_override = true;
    cfg.n_values = {64, 256};
    cfg.eval_times = {0.25, 0.5, 1.0};
    cfg.cramer_wold = {{1.0}};

    // alpha = 2 involves no sampling and is bit-stable
    const TestReport a = test_moment_bound(cfg, 2.0);
    const TestReport b = test_moment_bound(cfg, 2.0);
    REQUIRE(a.verdict == Verdict::pass);
    REQUIRE(report::to_json({&a, 1}) == report::to_json({&b, 1}));
    const auto* stable = find_line(a, "moment_bound/max_over_min");
    REQUIRE(stable != nullptr);
    REQUIRE(stable->value <= 2.0);

    // alpha = 4 via Monte Carlo
    cfg.trials = 500;
    const TestReport mc = test_moment_bound(cfg, 4.0);
    REQUIRE(mc.verdict == Verdict::pass);

    // hypothesis violations
    ExperimentConfig low = cfg;
    low.kernel.hurst = 0.4;  // 2 * 0.4 <= 1
    REQUIRE_THROWS_AS(test_moment_bound(low, 2.0), DomainError);
    ExperimentConfig thin = cfg;
    thin.innovation.law = InnovationModel::Law::student_t;
    thin.innovation.df = 5.0;
    REQUIRE_THROWS_AS(test_moment_bound(thin, 6.0), DomainError);
}

TEST_CASE("fdd proposition smoke", "[verify]") {
    ExperimentConfig cfg = small_cfg();
    cfg.n_values = {128};
    cfg.eval_times = {1.0};

    const TestReport rep = test_fdd(cfg, FddTarget::proposition_s_to_fbm);
    REQUIRE(rep.name == "fdd_proposition_s_to_fbm");
    REQUIRE(rep.verdict == Verdict::pass);
    const auto* med = find_line(rep, "fdd/c0/median_p");
    REQUIRE(med != nullptr);
    REQUIRE(med->value > cfg.significance);
    const auto* cons = find_line(rep, "fdd/var_consistency_t1");
    REQUIRE(cons != nullptr);
    REQUIRE(cons->ok);

    ExperimentConfig par = cfg;
    par.workers = 4;
    const TestReport rep2 = test_fdd(par, FddTarget::proposition_s_to_fbm);
    REQUIRE(json_sans_echo(rep) == json_sans_echo(rep2));
}

TEST_CASE("fdd walk-to-Z smoke", "[verify]") {
    ExperimentConfig cfg = small_cfg();
    cfg.n_values = {256};
    cfg.eval_times = {1.0};
    cfg.trials = 300;
    // left variance is exactly n(n+1)(2n+1)/(6 n^3) -> 1/3 = Var Z_{1,1/2}(1)
    const TestReport rep = test_fdd(cfg, FddTarget::theorem_r_to_Z);
    REQUIRE(rep.verdict == Verdict::pass);
}

TEST_CASE("fdd branch guards", "[verify]") {
    ExperimentConfig nu0 = small_cfg();
    nu0.memory.form = SlowlyVarying::Form::bounded_rational;
    nu0.memory.nu = 0.0;
    REQUIRE_THROWS_AS(test_fdd(nu0, FddTarget::theorem_r_to_Z), WrongBranchError);

    ExperimentConfig nu1 = small_cfg();  // nu = 1 by default
    REQUIRE_THROWS_AS(test_fdd(nu1, FddTarget::theorem_r_to_scaled_fbm), WrongBranchError);
    REQUIRE_THROWS_AS(test_nu0_proxy(nu1), WrongBranchError);
}

TEST_CASE("nu0 proxy report", "[verify]") {
    ExperimentConfig cfg = small_cfg();
    cfg.memory.form = SlowlyVarying::Form::bounded_rational;  // factor 1/2
    cfg.memory.nu = 0.0;
    cfg.n_values = {64, 256};
    cfg.trials = 400;

    const TestReport rep = test_nu0_proxy(cfg);
    REQUIRE(rep.verdict == Verdict::pass);
    const auto* m64 = find_line(rep, "nu0/n64/t1");
    const auto* m256 = find_line(rep, "nu0/n256/t1");
    REQUIRE(m64 != nullptr);
    REQUIRE(m256 != nullptr);
    REQUIRE(m256->value <= m64->value);
    const auto* corr = find_line(rep, "nu0/corr_r_s_t1");
    REQUIRE(corr != nullptr);
    REQUIRE(corr->value >= 0.95);

    ExperimentConfig par = cfg;
    par.workers = 2;
    const TestReport rep2 = test_nu0_proxy(par);
    REQUIRE(json_sans_echo(rep) == json_sans_echo(rep2));
}
