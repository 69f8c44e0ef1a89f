#pragma once

// Slowly varying functions and regularly varying memory functions
// M(t) = l(t) * t^nu. The memory function drives the weighted partial sums
// R_n and their scaling limit.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fracsum {

/// A positive, non-decreasing (or eventually constant) slowly varying factor.
/// Construct through the factories; they validate parameters.
class SlowlyVarying {
public:
    enum class Form { constant, log_shift, bounded_rational, tabulated };

    /// l(t) = c, c > 0.
    static SlowlyVarying constant(double c);
    /// l(t) = log(e + t); unbounded, l(0) = 1.
    static SlowlyVarying log_shift();
    /// l(t) = c_inf - b / (1 + t); requires c_inf > 0, b >= 0, c_inf - b >= 0.
    static SlowlyVarying bounded_rational(double c_inf, double b);
    /// Piecewise-linear through (t_i, v_i); constant past the last knot.
    /// Knots must strictly increase starting at 0; values non-negative and
    /// non-decreasing.
    static SlowlyVarying tabulated(std::span<const double> t, std::span<const double> v);

    double operator()(double t) const;

    Form form() const noexcept { return form_; }
    std::string name() const;

    /// True when the factor cannot distinguish scales (constant everywhere).
    bool is_constant() const noexcept;

    /// Limit at +infinity; +inf for the unbounded form.
    double limit_at_inf() const;

private:
    SlowlyVarying() = default;

    Form form_ = Form::constant;
    double c_ = 1.0;
    double c_inf_ = 1.0;
    double b_ = 0.0;
    std::vector<double> knots_t_;
    std::vector<double> knots_v_;
};

/// max over k = 1..n of g(k) k^eps / (g(n) n^eps); for slowly varying g and
/// eps > 0 this stabilises as n grows (the ratio test used by the suite).
double sv_max_ratio(const SlowlyVarying& g, double eps, std::size_t n);
double sv_max_ratio(const std::function<double(double)>& g, double eps, std::size_t n);

/// M(t) = l(t) * t^nu with nu >= 0. nu == 0 requires a non-constant factor
/// (otherwise the weighted sums degenerate); the factories throw DomainError.
class MemoryFunction {
public:
    MemoryFunction(SlowlyVarying l, double nu);

    /// M(t); uses the convention 0^0 = 1, so M(0) = l(0) when nu == 0 and 0
    /// otherwise.
    double operator()(double t) const;

    /// Increment M(i+1) - M(i) for integer i >= 0.
    double increment(std::size_t i) const;

    /// First n increments dM(0..n-1).
    std::vector<double> increments(std::size_t n) const;

    double nu() const noexcept { return nu_; }
    const SlowlyVarying& factor() const noexcept { return l_; }
    std::string name() const;

private:
    SlowlyVarying l_;
    double nu_ = 1.0;
};

/// M(+inf): +inf whenever nu > 0 or the factor diverges, otherwise lim l(t).
double memory_at_infinity(const MemoryFunction& M);

}  // namespace fracsum
