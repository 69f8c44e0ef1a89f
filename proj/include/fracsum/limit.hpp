#pragma once

// The limit process Z_{nu,H}(t) = nu * int_0^t B_H(t-s) s^{nu-1} ds, its
// variance at t = 1 by deterministic tensor quadrature, and the nu = 0 limit
// factor 1 - M(0)/M(inf).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fracsum/fbm.hpp"
#include "fracsum/regvar.hpp"

namespace fracsum {

struct ZProcessSpec {
    double nu = 1.0;     // must be > 0; nu == 0 is limit_factor_nu0's branch
    double hurst = 0.5;  // must match the fBm path's H
    std::size_t m = 4096;  // quadrature grid, >= 256
};

/// Z at the requested eval points, computed from one fBm path on grid m. The
/// substitution u = s^nu turns the integral into int_0^{t^nu} B_H(t - u^{1/nu}) du,
/// which is bounded for nu < 1; midpoint rule with the path linearly
/// interpolated between grid points. Z(0) = 0 exactly.
std::vector<double> sample_Z(const GaussPath& b, const ZProcessSpec& spec,
                             std::span<const double> eval_points);

/// Var(Z_{nu,H}(1)) by a tensor midpoint rule on quad_n^2 cells, after the
/// same substitution in both integration variables.
double var_Z_one_quad(double nu, double H, std::size_t quad_n, int workers = 1);

/// Closed form for nu = 1: Var(Z_{1,H}(1)) = 1 / (2(H+1)).
double var_Z_one_exact_nu1(double H);

/// Var(Z_{nu,H}(1)): dispatches to the nu = 1 closed form when it applies and
/// to var_Z_one_quad otherwise.
double var_Z_one(double nu, double H, std::size_t quad_n, int workers = 1);

/// Same, backed by a CSV cache (header "nu,H,quad_n,value"; exact key match).
double var_Z_one_cached(const std::string& cache_path, double nu, double H, std::size_t quad_n,
                        int workers = 1);

/// Theorem's nu = 0 branch: 1 - M(0)/M(+inf), with value 1 when the limit is
/// infinite. Requires a memory function with nu == 0.
double limit_factor_nu0(const MemoryFunction& M);

}  // namespace fracsum
