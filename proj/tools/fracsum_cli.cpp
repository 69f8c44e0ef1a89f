#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracsum/config.hpp"
#include "fracsum/errors.hpp"
#include "fracsum/fbm.hpp"
#include "fracsum/fft.hpp"
#include "fracsum/linproc.hpp"
#include "fracsum/parallel.hpp"
#include "fracsum/report.hpp"
#include "fracsum/rng.hpp"
#include "fracsum/verify.hpp"
#include "fracsum/version.hpp"

namespace fs = std::filesystem;
using namespace fracsum;

namespace {

class StageClock {
public:
    void record(const std::string& stage, double ms) { timings_[stage] = ms; }

    template <typename F>
    auto time(const std::string& stage, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            finish(stage, t0);
        } else {
            auto out = f();
            finish(stage, t0);
            return out;
        }
    }

    const std::map<std::string, double>& timings() const { return timings_; }

private:
    template <typename T>
    void finish(const std::string& stage, T t0) {
        const auto t1 = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        timings_[stage] = ms;
        std::cerr << "[stage] " << stage << ": " << ms << " ms\n";
    }

    std::map<std::string, double> timings_;
};

// Manifest is written before long work starts (timings empty) and rewritten
// with the stage timings once the run completes. Data artifacts never carry
// timings, so reruns of the same config are byte-identical.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& config_path, const std::string& resolved_config,
                    const StageClock* clock) {
    nlohmann::ordered_json m;
    m["tool"] = "fracsum";
    m["version"] = version;
    m["command"] = command;
    m["config_path"] = config_path;
    m["output_dir"] = out_dir.string();
    m["config"] = resolved_config;
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    if (clock != nullptr)
        for (const auto& [stage, ms] : clock->timings()) t[stage] = ms;
    m["timings_ms"] = std::move(t);
    report::write_file((out_dir / "manifest.json").string(), m.dump(2) + "\n");
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
};

ExperimentConfig load_config(const CommonOpts& opts, Purpose purpose) {
    ExperimentConfig cfg = parse_config_file(opts.config_path);
    if (opts.seed_set) cfg.master_seed = opts.seed;
    if (opts.workers > 0) cfg.workers = opts.workers;
    validate(cfg, purpose);
    return cfg;
}

int run_simulate(const CommonOpts& opts) {
    StageClock clock;
    const ExperimentConfig cfg = clock.time("validate", [&] {
        return load_config(opts, Purpose::simulate);
    });
    fs::create_directories(opts.out_dir);
    const std::string resolved = serialize_config(cfg);
    write_manifest(opts.out_dir, "simulate", opts.config_path, resolved, nullptr);

    const Kernel k = build_kernel(cfg.kernel);
    const MemoryFunction M = build_memory(cfg.memory);
    const InnovationModel innov = build_innovation(cfg.innovation);
    const std::size_t T = cfg.trials;

    std::ostringstream csv;
    csv << "trial,t,s_n,r_n\n";
    clock.time("sample_paths", [&] {
        for (const std::size_t n : cfg.n_values) {
            std::unique_ptr<fft::RealConv> xplan, vplan;
            const std::size_t xi_len = static_cast<std::size_t>(
                (static_cast<long>(n) - k.k_min()) - (1 - k.k_max()) + 1);
            if (k.coeffs().size() > 256)
                xplan = std::make_unique<fft::RealConv>(k.coeffs(), xi_len);
            if (n >= 256) vplan = std::make_unique<fft::RealConv>(M.increments(n), n);

            const std::size_t stride = n + 1;
            std::vector<double> sbuf(T * stride), rbuf(T * stride);
            const std::string label = "simulate/n" + std::to_string(n);
            par::parallel_for(T, cfg.workers, [&](std::size_t trial) {
                auto rng = rng::make_stream(cfg.master_seed, label, trial);
                const WalkSample w =
                    sample_walk(k, M, innov, n, rng, xplan.get(), vplan.get());
                std::copy(w.s.values.begin(), w.s.values.end(),
                          sbuf.begin() + static_cast<long>(trial * stride));
                std::copy(w.r.values.begin(), w.r.values.end(),
                          rbuf.begin() + static_cast<long>(trial * stride));
            });
            for (std::size_t trial = 0; trial < T; ++trial) {
                for (std::size_t i = 0; i <= n; ++i) {
                    csv << trial << ',' << report::fmt17g(static_cast<double>(i) / n) << ','
                        << report::fmt17g(sbuf[trial * stride + i]) << ','
                        << report::fmt17g(rbuf[trial * stride + i]) << '\n';
                }
            }
        }
    });
    clock.time("write_outputs", [&] {
        report::write_file((fs::path(opts.out_dir) / "paths.csv").string(), csv.str());
    });
    write_manifest(opts.out_dir, "simulate", opts.config_path, resolved, &clock);
    return 0;
}

int run_verify(const CommonOpts& opts, const std::string& suite) {
    StageClock clock;
    const ExperimentConfig cfg = clock.time("validate", [&] {
        return load_config(opts, Purpose::verify);
    });
    const double nu = cfg.memory.nu;
    if (suite == "theorem_nu_pos" && !(nu > 0.0))
        throw ConfigError("suite theorem_nu_pos requires nu > 0 (config has nu = " +
                          std::to_string(nu) + ")");
    if (suite == "theorem_nu_zero" && nu != 0.0)
        throw ConfigError("suite theorem_nu_zero requires nu = 0 (config has nu = " +
                          std::to_string(nu) + ")");

    fs::create_directories(opts.out_dir);
    const std::string resolved = serialize_config(cfg);
    write_manifest(opts.out_dir, "verify", opts.config_path, resolved, nullptr);

    const double H = cfg.kernel.hurst;
    const double alpha = 2.0 * H > 1.0 ? 2.0 : 4.0;

    std::vector<std::pair<std::string, std::function<TestReport()>>> plan;
    const bool prop = suite == "proposition" || suite == "all";
    const bool npos = suite == "theorem_nu_pos" || (suite == "all" && nu > 0.0);
    const bool nzero = suite == "theorem_nu_zero" || (suite == "all" && nu == 0.0);
    const bool corr = suite == "corollary" || suite == "all";
    if (prop) {
        plan.emplace_back("cov_convergence", [&] { return test_cov_convergence(cfg); });
        plan.emplace_back("fdd_proposition",
                          [&] { return test_fdd(cfg, FddTarget::proposition_s_to_fbm); });
        plan.emplace_back("modulus", [&] { return test_modulus(cfg, cfg.delta_values); });
        plan.emplace_back("moment_bound", [&] { return test_moment_bound(cfg, alpha); });
    }
    if (npos)
        plan.emplace_back("fdd_theorem_nu_pos",
                          [&] { return test_fdd(cfg, FddTarget::theorem_r_to_Z); });
    if (nzero) {
        plan.emplace_back("nu0_proxy", [&] { return test_nu0_proxy(cfg); });
        plan.emplace_back("fdd_theorem_nu_zero",
                          [&] { return test_fdd(cfg, FddTarget::theorem_r_to_scaled_fbm); });
    }
    const bool want_ratio = npos || corr;

    std::vector<TestReport> reports;
    for (const auto& [name, fn] : plan) reports.push_back(clock.time(name, fn));

    std::vector<VarRatioRow> rows;
    if (want_ratio) {
        reports.push_back(clock.time("var_ratio", [&] { return test_var_ratio(cfg); }));
        rows = var_ratio_table(cfg);
    }

    clock.time("write_outputs", [&] {
        report::write_file((fs::path(opts.out_dir) / "report.json").string(),
                           report::to_json(reports));
        const std::string text = report::to_text(reports);
        report::write_file((fs::path(opts.out_dir) / "report.txt").string(), text);
        if (want_ratio)
            report::write_file((fs::path(opts.out_dir) / "var_ratio.csv").string(),
                               report::var_ratio_csv(rows));
        std::cout << text;
    });
    write_manifest(opts.out_dir, "verify", opts.config_path, resolved, &clock);

    switch (report::overall_verdict(reports)) {
        case Verdict::pass: return 0;
        case Verdict::inconclusive: return 3;
        case Verdict::fail: return 1;
    }
    return 1;
}

int run_fbm(std::size_t n, double hurst, std::size_t trials, const std::string& method,
            std::uint64_t seed, const std::string& out_dir, int workers) {
    StageClock clock;
    if (n < 1) throw ConfigError("fbm: n must be >= 1");
    if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("fbm: hurst must lie in (0,1)");
    if (trials < 1) throw ConfigError("fbm: trials must be >= 1");
    const FbmMethod m =
        method == "cholesky" ? FbmMethod::cholesky : FbmMethod::circulant;

    fs::create_directories(out_dir);
    std::ostringstream echo;
    echo << "n = " << n << "\nhurst = " << report::fmt17g(hurst) << "\ntrials = " << trials
         << "\nmethod = " << method << "\nseed = " << seed << "\n";
    write_manifest(out_dir, "fbm", "(flags)", echo.str(), nullptr);

    const TimeGrid grid{n};
    const FbmSampler sampler(grid, hurst, m, workers > 0 ? workers : 1);
    const std::size_t stride = n + 1;
    std::vector<double> buf(trials * stride);
    clock.time("sample_fbm", [&] {
        par::parallel_for(trials, workers > 0 ? workers : 1, [&](std::size_t trial) {
            auto rng = rng::make_stream(seed, "fbm", trial);
            const GaussPath p = sampler.sample(rng);
            std::copy(p.values.begin(), p.values.end(),
                      buf.begin() + static_cast<long>(trial * stride));
        });
    });

    std::ostringstream csv;
    csv << "trial,t,value\n";
    for (std::size_t trial = 0; trial < trials; ++trial)
        for (std::size_t i = 0; i <= n; ++i)
            csv << trial << ',' << report::fmt17g(grid.point(i)) << ','
                << report::fmt17g(buf[trial * stride + i]) << '\n';
    clock.time("write_outputs", [&] {
        report::write_file((fs::path(out_dir) / "fbm.csv").string(), csv.str());
    });
    write_manifest(out_dir, "fbm", "(flags)", echo.str(), &clock);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracsum: simulate partial-sum processes with regularly varying memory and "
                 "verify their Gaussian limits"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(0, 1);

    CommonOpts sim_opts, ver_opts;
    std::string suite = "all";

    CLI::App* sim = app.add_subcommand("simulate", "sample s_n/r_n paths into paths.csv");
    sim->add_option("--config", sim_opts.config_path, "experiment config file")->required();
    sim->add_option("--out", sim_opts.out_dir, "output directory");
    sim->add_option("--seed", sim_opts.seed, "override master seed")
        ->each([&](const std::string&) { sim_opts.seed_set = true; });
    sim->add_option("--workers", sim_opts.workers, "worker threads (values never depend on it)");

    CLI::App* ver = app.add_subcommand("verify", "run a verification suite, write reports");
    ver->add_option("--config", ver_opts.config_path, "experiment config file")->required();
    ver->add_option("--out", ver_opts.out_dir, "output directory");
    ver->add_option("--seed", ver_opts.seed, "override master seed")
        ->each([&](const std::string&) { ver_opts.seed_set = true; });
    ver->add_option("--workers", ver_opts.workers, "worker threads (values never depend on it)");
    ver->add_option("--suite", suite, "test suite")
        ->check(CLI::IsMember(
            {"proposition", "theorem_nu_pos", "theorem_nu_zero", "corollary", "all"}));

    std::size_t fbm_n = 256, fbm_trials = 100;
    double fbm_h = 0.5;
    std::uint64_t fbm_seed = 1;
    std::string fbm_method = "circulant", fbm_out = ".";
    int fbm_workers = 1;
    CLI::App* fbm = app.add_subcommand("fbm", "sample standalone fractional Brownian paths");
    fbm->add_option("--n", fbm_n, "grid size (path has n+1 points)")->required();
    fbm->add_option("--hurst", fbm_h, "Hurst index in (0,1)")->required();
    fbm->add_option("--trials", fbm_trials, "number of paths");
    fbm->add_option("--method", fbm_method, "sampling method")
        ->check(CLI::IsMember({"cholesky", "circulant"}));
    fbm->add_option("--seed", fbm_seed, "master seed");
    fbm->add_option("--out", fbm_out, "output directory");
    fbm->add_option("--workers", fbm_workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage problems are config errors for CI purposes
    }

    try {
        if (sim->parsed()) return run_simulate(sim_opts);
        if (ver->parsed()) return run_verify(ver_opts, suite);
        if (fbm->parsed())
            return run_fbm(fbm_n, fbm_h, fbm_trials, fbm_method, fbm_seed, fbm_out,
                           fbm_workers);
        std::cout << app.help();
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const EmbeddingError& e) {
        std::cerr << "error: " << e.what()
                  << "\nhint: retry with --method cholesky (exact for any grid the "
                     "O(n^2)/O(n^3) costs allow)\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
