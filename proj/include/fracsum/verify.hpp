#pragma once

// Verification harness: experiment configuration, deterministic checks
// (covariance convergence, variance ratios, second-moment bounds) and Monte
// Carlo checks (finite-dimensional distributions, modulus of continuity, the
// nu = 0 proxy). All randomness derives from the master seed alone, so every
// report carries identical verdicts, lines and notes whatever the worker
// count; only the config echo reflects the workers field as configured.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracsum/kernel.hpp"
#include "fracsum/linproc.hpp"
#include "fracsum/regvar.hpp"

namespace fracsum {

struct KernelSpec {
    enum class Type { iid, fractional, explicit_coeffs };
    Type type = Type::iid;
    double hurst = 0.5;
    std::size_t truncation = 0;  // fractional only; 0 = pick by the tail rule
    bool allow_truncation_override = false;
    bool two_sided = false;
    std::vector<double> coeffs;  // explicit_coeffs only
    long k_min = 0;              // explicit_coeffs only
};

struct MemorySpec {
    double nu = 1.0;
    SlowlyVarying::Form form = SlowlyVarying::Form::constant;
    double c = 1.0;      // constant form
    double c_inf = 2.0;  // bounded_rational form
    double b = 1.0;      // bounded_rational form
    std::vector<double> table_t;  // tabulated form
    std::vector<double> table_v;
};

struct InnovationSpec {
    InnovationModel::Law law = InnovationModel::Law::gaussian;
    double df = 5.0;  // student_t only
};

struct ExperimentConfig {
    KernelSpec kernel;
    MemorySpec memory;
    InnovationSpec innovation;
    std::vector<std::size_t> n_values{256, 1024, 4096};
    std::size_t trials = 2000;
    std::vector<double> eval_times{0.25, 0.5, 1.0};
    std::vector<std::vector<double>> cramer_wold{{1.0}, {1.0, -1.0}, {1.0, 1.0, 1.0}};
    std::uint64_t master_seed = 1;
    double significance = 0.01;
    std::size_t seed_replicates = 5;
    std::size_t quad_points = 1024;  // var_Z_one tensor quadrature
    std::size_t fbm_grid = 4096;     // grid for limit-side fBm / Z paths
    int workers = 1;                 // <= 0 means all available
    double cov_tolerance = 0.02;
    double var_ratio_band = 0.10;
    std::vector<double> delta_values{1.0, 0.25, 1.0 / 16.0, 1.0 / 64.0};
    std::vector<double> epsilon_values{0.5, 1.0};
};

/// What the config is about to drive; verification demands more (trial floor,
/// seed replicates) than plain simulation.
enum class Purpose { simulate, verify };

/// Full validation: parameter domains, the moment condition alpha*H > 1, the
/// kernel truncation rule. Throws ConfigError (or a more specific Error from
/// the builders) on violation.
void validate(const ExperimentConfig& cfg, Purpose purpose);

Kernel build_kernel(const KernelSpec& spec);
MemoryFunction build_memory(const MemorySpec& spec);
InnovationModel build_innovation(const InnovationSpec& spec);

enum class Verdict { pass, fail, inconclusive };
std::string verdict_name(Verdict v);

/// One labelled scalar with an optional assertion: when asserted, ok states
/// whether value met threshold (the direction is the test's business).
struct ReportLine {
    std::string label;
    double value = 0.0;
    double threshold = 0.0;
    bool ok = true;
};

struct TestReport {
    std::string name;
    Verdict verdict = Verdict::pass;
    std::vector<ReportLine> lines;
    std::uint64_t master_seed = 0;
    std::string note;
    std::string config_echo;
};

enum class FddTarget { proposition_s_to_fbm, theorem_r_to_Z, theorem_r_to_scaled_fbm };
std::string fdd_target_name(FddTarget target);

/// Deterministic: E s_n(t)s_n(tau) from kernel coefficients for every n and
/// time pair, asserting approach (monotone up to a small slack) to the fBm
/// covariance with the final gap below cov_tolerance.
TestReport test_cov_convergence(const ExperimentConfig& cfg);

/// Monte Carlo: Cramér–Wold combinations of the path at the largest n against
/// the limit law; pass if the median KS p-value over seed replicates exceeds
/// the significance for every coefficient vector.
TestReport test_fdd(const ExperimentConfig& cfg, FddTarget target);

struct VarRatioRow {
    std::size_t n = 0;
    double var_R_exact = 0.0;
    double normalizer = 0.0;
    double sigma2 = 0.0;
    double ratio = 0.0;
};

/// Deterministic rows behind test_var_ratio (also exported as CSV by the CLI).
std::vector<VarRatioRow> var_ratio_table(const ExperimentConfig& cfg);

/// Deterministic: exact_var_R against sigma^2 M^2(n) h^2(n) n^{2H}; pass if
/// the final ratio sits within the band and |ratio - 1| is non-increasing over
/// the last three n.
TestReport test_var_ratio(const ExperimentConfig& cfg);

/// Monte Carlo: modulus of continuity of s_n at the largest n; pass if the
/// exceedance estimate decreases in delta and drops below 0.05 at the smallest
/// delta for epsilon = 1.
TestReport test_modulus(const ExperimentConfig& cfg, std::span<const double> delta_values);

/// Empirical constant in the alpha-moment increment bound; alpha = 2 is fully
/// deterministic, other orders use Monte Carlo. Pass if the constant is stable
/// (max/min over n within 2x) and below a smoke bound.
TestReport test_moment_bound(const ExperimentConfig& cfg, double alpha);

/// nu = 0 branch: d_n(t) = r_n(t) - factor * s_n(t) should shrink; pass if its
/// mean square decreases across n_values at every eval time and
/// corr(r_n(1), s_n(1)) >= 0.95 at the largest n.
TestReport test_nu0_proxy(const ExperimentConfig& cfg);

}  // namespace fracsum
