#include "fracsum/regvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracsum/errors.hpp"

namespace fracsum {

SlowlyVarying SlowlyVarying::constant(double c) {
    if (!(c > 0.0)) throw DomainError("SlowlyVarying::constant: c must be positive");
    SlowlyVarying l;
    l.form_ = Form::constant;
    l.c_ = c;
    return l;
}

SlowlyVarying SlowlyVarying::log_shift() {
    SlowlyVarying l;
    l.form_ = Form::log_shift;
    return l;
}

SlowlyVarying SlowlyVarying::bounded_rational(double c_inf, double b) {
    if (!(c_inf > 0.0)) throw DomainError("SlowlyVarying::bounded_rational: c_inf must be positive");
    if (!(b >= 0.0)) throw DomainError("SlowlyVarying::bounded_rational: b must be non-negative");
    if (!(c_inf - b >= 0.0))
        throw DomainError("SlowlyVarying::bounded_rational: c_inf - b must be non-negative");
    SlowlyVarying l;
    l.form_ = Form::bounded_rational;
    l.c_inf_ = c_inf;
    l.b_ = b;
    return l;
}

SlowlyVarying SlowlyVarying::tabulated(std::span<const double> t, std::span<const double> v) {
    if (t.size() != v.size() || t.size() < 2)
        throw DomainError("SlowlyVarying::tabulated: need matching knot/value arrays, >= 2 entries");
    if (t[0] != 0.0) throw DomainError("SlowlyVarying::tabulated: knots must start at 0");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1]))
            throw DomainError("SlowlyVarying::tabulated: knots must strictly increase");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 0.0))
            throw DomainError("SlowlyVarying::tabulated: values must be non-negative");
        if (i > 0 && !(v[i] >= v[i - 1]))
            throw DomainError("SlowlyVarying::tabulated: values must be non-decreasing");
    }
    SlowlyVarying l;
    l.form_ = Form::tabulated;
    l.knots_t_.assign(t.begin(), t.end());
    l.knots_v_.assign(v.begin(), v.end());
    return l;
}

double SlowlyVarying::operator()(double t) const {
    if (!(t >= 0.0)) throw DomainError("SlowlyVarying: argument must be non-negative");
    switch (form_) {
        case Form::constant:
            return c_;
        case Form::log_shift:
            return std::log(std::numbers::e + t);
        case Form::bounded_rational:
            return c_inf_ - b_ / (1.0 + t);
        case Form::tabulated: {
            if (t >= knots_t_.back()) return knots_v_.back();
            const auto it = std::upper_bound(knots_t_.begin(), knots_t_.end(), t);
            const std::size_t hi = static_cast<std::size_t>(it - knots_t_.begin());
            const std::size_t lo = hi - 1;
            const double w = (t - knots_t_[lo]) / (knots_t_[hi] - knots_t_[lo]);
            return knots_v_[lo] + w * (knots_v_[hi] - knots_v_[lo]);
        }
    }
    throw NumericalError("SlowlyVarying: unknown form");
}

std::string SlowlyVarying::name() const {
    switch (form_) {
        case Form::constant: return "constant";
        case Form::log_shift: return "log_shift";
        case Form::bounded_rational: return "bounded_rational";
        case Form::tabulated: return "tabulated";
    }
    return "unknown";
}

bool SlowlyVarying::is_constant() const noexcept {
    switch (form_) {
        case Form::constant:
            return true;
        case Form::log_shift:
            return false;
        case Form::bounded_rational:
            return b_ == 0.0;
        case Form::tabulated:
            return std::all_of(knots_v_.begin(), knots_v_.end(),
                               [&](double v) { return v == knots_v_.front(); });
    }
    return false;
}

double SlowlyVarying::limit_at_inf() const {
    switch (form_) {
        case Form::constant: return c_;
        case Form::log_shift: return std::numeric_limits<double>::infinity();
        case Form::bounded_rational: return c_inf_;
        case Form::tabulated: return knots_v_.back();
    }
    throw NumericalError("SlowlyVarying: unknown form");
}

double sv_max_ratio(const SlowlyVarying& g, double eps, std::size_t n) {
    return sv_max_ratio([&g](double t) { return g(t); }, eps, n);
}

double sv_max_ratio(const std::function<double(double)>& g, double eps, std::size_t n) {
    if (n == 0) throw DomainError("sv_max_ratio: n must be positive");
    if (!(eps > 0.0)) throw DomainError("sv_max_ratio: eps must be positive");
    const double denom = g(static_cast<double>(n)) * std::pow(static_cast<double>(n), eps);
    if (!(denom > 0.0)) throw DegenerateError("sv_max_ratio: denominator vanished");
    double best = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        best = std::max(best, g(kk) * std::pow(kk, eps) / denom);
    }
    return best;
}

MemoryFunction::MemoryFunction(SlowlyVarying l, double nu) : l_(std::move(l)), nu_(nu) {
    if (!(nu >= 0.0)) throw DomainError("MemoryFunction: nu must be non-negative");
    if (nu == 0.0 && l_.is_constant())
        throw DomainError("MemoryFunction: nu == 0 requires a non-constant slowly varying factor");
}

double MemoryFunction::operator()(double t) const {
    if (!(t >= 0.0)) throw DomainError("MemoryFunction: argument must be non-negative");
    const double lv = l_(t);
    if (nu_ == 0.0) return lv;       // t^0 == 1, including at t = 0
    if (t == 0.0) return 0.0;
    if (nu_ == 1.0) return lv * t;   // exact products for the common exponents
    if (nu_ == 2.0) return lv * t * t;
    return lv * std::pow(t, nu_);
}

double MemoryFunction::increment(std::size_t i) const {
    const double a = static_cast<double>(i);
    return (*this)(a + 1.0) - (*this)(a);
}

std::vector<double> MemoryFunction::increments(std::size_t n) const {
    std::vector<double> dm(n);
    for (std::size_t i = 0; i < n; ++i) dm[i] = increment(i);
    return dm;
}

std::string MemoryFunction::name() const {
    return l_.name() + "*t^" + std::to_string(nu_);
}

double memory_at_infinity(const MemoryFunction& M) {
    if (M.nu() > 0.0) return std::numeric_limits<double>::infinity();
    return M.factor().limit_at_inf();
}

}  // namespace fracsum
