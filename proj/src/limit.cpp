#include "fracsum/limit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracsum/errors.hpp"
#include "fracsum/parallel.hpp"

namespace fracsum {

namespace {

// Linear interpolation of a path given on t_i = i/m at t in [0,1].
double interp_path(const GaussPath& b, double t) {
    const double m = static_cast<double>(b.grid.n);
    double pos = t * m;
    if (pos <= 0.0) return 0.0;
    if (pos >= m) return b.values.back();
    const auto lo = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(lo);
    return b.values[lo] + w * (b.values[lo + 1] - b.values[lo]);
}

void check_spec(const ZProcessSpec& spec) {
    if (!(spec.nu > 0.0))
        throw WrongBranchError("sample_Z: nu must be positive (nu = 0 uses limit_factor_nu0)");
    if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) throw DomainError("sample_Z: H must lie in (0,1)");
    if (spec.m < 256) throw DomainError("sample_Z: quadrature grid must have at least 256 cells");
}

}  // namespace

std::vector<double> sample_Z(const GaussPath& b, const ZProcessSpec& spec,
                             std::span<const double> eval_points) {
    check_spec(spec);
    if (b.hurst != spec.hurst)
        throw ConfigError("sample_Z: path H does not match spec H");
    if (b.grid.n != spec.m)
        throw ConfigError("sample_Z: path grid does not match spec quadrature grid");
    for (double t : eval_points)
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("sample_Z: eval points must lie in [0,1]");

    const double inv_nu = 1.0 / spec.nu;
    const std::size_t m = spec.m;
    std::vector<double> out(eval_points.size(), 0.0);
    for (std::size_t e = 0; e < eval_points.size(); ++e) {
        const double t = eval_points[e];
        if (t == 0.0) continue;
        // int_0^{t^nu} B_H(t - u^{1/nu}) du, midpoint on m subintervals.
        const double upper = std::pow(t, spec.nu);
        const double du = upper / static_cast<double>(m);
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double u = (static_cast<double>(i) + 0.5) * du;
            const double arg = t - std::pow(u, inv_nu);
            acc += interp_path(b, std::max(arg, 0.0));
        }
        out[e] = acc * du;
    }
    return out;
}

double var_Z_one_quad(double nu, double H, std::size_t quad_n, int workers) {
    if (!(nu > 0.0))
        throw WrongBranchError("var_Z_one_quad: nu must be positive");
    if (!(H > 0.0 && H < 1.0)) throw DomainError("var_Z_one_quad: H must lie in (0,1)");
    if (quad_n < 64) throw DomainError("var_Z_one_quad: quad_n must be >= 64");

    // After u = s^nu in both variables the integrand is
    // fbm_cov(1 - u^{1/nu}, 1 - w^{1/nu}, H) on the unit square.
    const std::size_t q = quad_n;
    const double inv_q = 1.0 / static_cast<double>(q);
    const double inv_nu = 1.0 / nu;
    std::vector<double> arg(q), arg2h(q);
    for (std::size_t i = 0; i < q; ++i) {
        const double u = (static_cast<double>(i) + 0.5) * inv_q;
        const double a = 1.0 - std::pow(u, inv_nu);
        arg[i] = a;
        arg2h[i] = a == 0.0 ? 0.0 : std::pow(a, 2.0 * H);
    }
    const double total = par::block_sum(q, workers, [&](std::size_t i) {
        double row = 0.0;
        for (std::size_t j = 0; j < q; ++j) {
            const double d = std::abs(arg[i] - arg[j]);
            const double cross = d == 0.0 ? 0.0 : std::pow(d, 2.0 * H);
            row += 0.5 * (arg2h[i] + arg2h[j] - cross);
        }
        return row;
    });
    const double value = total * inv_q * inv_q;
    if (!std::isfinite(value))
        throw NumericalError("var_Z_one_quad: quadrature produced a non-finite value");
    return value;
}

double var_Z_one_exact_nu1(double H) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError("var_Z_one_exact_nu1: H must lie in (0,1)");
    // Var int_0^1 B_H = 2 int int_{s<u} cov = 1/(2H+1) - 1/((2H+1)(2H+2))
    //                 = 1 / (2(H+1)).
    return 1.0 / (2.0 * (H + 1.0));
}

double var_Z_one(double nu, double H, std::size_t quad_n, int workers) {
    if (nu == 1.0) return var_Z_one_exact_nu1(H);
    return var_Z_one_quad(nu, H, quad_n, workers);
}

double var_Z_one_cached(const std::string& cache_path, double nu, double H, std::size_t quad_n,
                        int workers) {
    {
        std::ifstream in(cache_path);
        if (in) {
            std::string line;
            std::getline(in, line);  // header
            while (std::getline(in, line)) {
                std::istringstream row(line);
                std::string cell;
                double cnu = 0.0, ch = 0.0, cval = 0.0;
                std::size_t cq = 0;
                if (!std::getline(row, cell, ',')) continue;
                cnu = std::stod(cell);
                if (!std::getline(row, cell, ',')) continue;
                ch = std::stod(cell);
                if (!std::getline(row, cell, ',')) continue;
                cq = static_cast<std::size_t>(std::stoull(cell));
                if (!std::getline(row, cell, ',')) continue;
                cval = std::stod(cell);
                if (cnu == nu && ch == H && cq == quad_n) return cval;
            }
        }
    }
    const double value = var_Z_one(nu, H, quad_n, workers);
    const bool fresh = !std::ifstream(cache_path).good();
    std::ofstream out(cache_path, std::ios::app);
    if (out) {
        if (fresh) out << "nu,H,quad_n,value\n";
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%.17g\n", nu, H, quad_n, value);
        out << buf;
    }
    return value;
}

double limit_factor_nu0(const MemoryFunction& M) {
    if (M.nu() != 0.0)
        throw WrongBranchError("limit_factor_nu0: memory function has nu > 0");
    const double minf = M.factor().limit_at_inf();
    if (std::isinf(minf)) return 1.0;
    if (!(minf > 0.0)) throw DegenerateError("limit_factor_nu0: M(+inf) must be positive");
    return 1.0 - M(0.0) / minf;
}

}  // namespace fracsum
