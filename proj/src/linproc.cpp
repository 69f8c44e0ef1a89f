#include "fracsum/linproc.hpp"

#include <algorithm>
#include <cmath>

#include "fracsum/errors.hpp"
#include "fracsum/parallel.hpp"

namespace fracsum {

InnovationModel InnovationModel::gaussian() { return {Law::gaussian, 0.0}; }

InnovationModel InnovationModel::rademacher() { return {Law::rademacher, 0.0}; }

InnovationModel InnovationModel::student_t(double df) {
    if (!(df > 2.0)) throw DomainError("InnovationModel: student_t needs df > 2");
    return {Law::student_t, df};
}

double InnovationModel::moment_order_alpha() const noexcept {
    switch (law_) {
        case Law::gaussian:
        case Law::rademacher:
            return std::numeric_limits<double>::infinity();
        case Law::student_t:
            // Moments of order >= df diverge; stay strictly below and never
            // report less than the guaranteed second moment.
            return std::max(2.0, df_ - 0.1);
    }
    return 2.0;
}

double InnovationModel::draw(rng::Xoshiro256pp& rng) const {
    switch (law_) {
        case Law::gaussian:
            return rng.gaussian();
        case Law::rademacher:
            return (rng.next() >> 63) ? 1.0 : -1.0;
        case Law::student_t: {
            // t(df) = Z / sqrt(chi2_df / df), rescaled by sqrt((df-2)/df) so
            // the variance is exactly 1.
            const double z = rng.gaussian();
            const double chi2 = 2.0 * rng.gamma(df_ / 2.0);
            return z / std::sqrt(chi2 / df_) * std::sqrt((df_ - 2.0) / df_);
        }
    }
    return 0.0;
}

std::string InnovationModel::name() const {
    switch (law_) {
        case Law::gaussian: return "gaussian";
        case Law::rademacher: return "rademacher";
        case Law::student_t: return "student_t(" + std::to_string(df_) + ")";
    }
    return "unknown";
}

IndexedArray sample_innovations(const InnovationModel& model, long first, long last,
                                rng::Xoshiro256pp& rng) {
    if (last < first) throw DomainError("sample_innovations: empty index range");
    IndexedArray xi;
    xi.first = first;
    xi.values.resize(static_cast<std::size_t>(last - first + 1));
    for (auto& v : xi.values) v = model.draw(rng);
    return xi;
}

IndexedArray sample_linear_process(const Kernel& k, const IndexedArray& xi, long j_first,
                                   long j_last, const fft::RealConv* plan) {
    if (j_last < j_first) throw DomainError("sample_linear_process: empty index range");
    // X_j draws on xi_{j - k_max} .. xi_{j - k_min}.
    const long need_first = j_first - k.k_max();
    const long need_last = j_last - k.k_min();
    if (xi.first > need_first || xi.last() < need_last)
        throw CoverageError("sample_linear_process: innovations cover [" +
                            std::to_string(xi.first) + "," + std::to_string(xi.last()) +
                            "] but [" + std::to_string(need_first) + "," +
                            std::to_string(need_last) + "] is required");

    IndexedArray X;
    X.first = j_first;
    const std::size_t count = static_cast<std::size_t>(j_last - j_first + 1);
    X.values.resize(count);

    if (plan != nullptr) {
        if (plan->signal_len() != xi.values.size() || plan->kernel_len() != k.coeffs().size())
            throw DomainError("sample_linear_process: plan shape mismatch");
        // conv[p] = sum_i coeffs[i] xi.values[p-i]; X_j sits at
        // p = (j - k_min) - xi.first.
        const std::vector<double> conv = plan->apply(xi.values);
        for (std::size_t idx = 0; idx < count; ++idx) {
            const long j = j_first + static_cast<long>(idx);
            X.values[idx] = conv[static_cast<std::size_t>(j - k.k_min() - xi.first)];
        }
        return X;
    }

    const std::span<const double> a = k.coeffs();
    for (std::size_t idx = 0; idx < count; ++idx) {
        const long j = j_first + static_cast<long>(idx);
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const long kk = k.k_min() + static_cast<long>(i);  // a_kk multiplies xi_{j-kk}
            acc += a[i] * xi.at(j - kk);
        }
        X.values[idx] = acc;
    }
    return X;
}

GaussPath s_n_path(const IndexedArray& X, const Kernel& k, std::size_t n) {
    if (n == 0) throw DomainError("s_n_path: n must be positive");
    if (X.first > 1 || X.last() < static_cast<long>(n))
        throw CoverageError("s_n_path: X must be defined on 1..n");
    const double v = var_partial_sum(k, n);
    if (!(v > 0.0)) throw DegenerateError("s_n_path: Var(S_n) vanished");
    const double scale = 1.0 / std::sqrt(v);

    GaussPath path;
    path.grid = TimeGrid{n};
    path.hurst = k.target_hurst();
    path.kind = PathKind::s_n;
    path.values.assign(n + 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        acc += X.at(static_cast<long>(i));
        path.values[i] = acc * scale;
    }
    return path;
}

std::vector<double> v_sequence(const IndexedArray& X, const MemoryFunction& M, std::size_t n,
                               const fft::RealConv* plan) {
    if (n == 0) throw DomainError("v_sequence: n must be positive");
    if (X.first > 1 || X.last() < static_cast<long>(n))
        throw CoverageError("v_sequence: X must be defined on 1..n");

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = X.at(static_cast<long>(i) + 1);

    // v_k = sum_{i=0}^{k-1} X_{k-i} dM(i) is the full convolution of
    // (X_1..X_n) with (dM(0)..dM(n-1)) read at position k-1.
    std::vector<double> conv;
    if (plan != nullptr) {
        if (plan->signal_len() != n || plan->kernel_len() != n)
            throw DomainError("v_sequence: plan shape mismatch");
        conv = plan->apply(x);
    } else {
        conv = fft::convolve(M.increments(n), x);
    }

    std::vector<double> v(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) v[k] = conv[k - 1];
    return v;
}

GaussPath r_n_path(std::span<const double> v, const IndexedArray& X, const Kernel& k,
                   const MemoryFunction& M, std::size_t n, const fft::RealConv* plan) {
    if (n == 0) throw DomainError("r_n_path: n must be positive");
    if (v.size() != n + 1) throw DomainError("r_n_path: v must have length n + 1");
    if (X.first > 1 || X.last() < static_cast<long>(n))
        throw CoverageError("r_n_path: X must be defined on 1..n");
    const double Mn = M(static_cast<double>(n));
    if (Mn == 0.0) throw DegenerateError("r_n_path: M(n) = 0");

    std::vector<double> R(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) R[i] = R[i - 1] + v[i];

    // Cross-check via the reordered summation R_i = sum_j S_{i-j} dM(j).
    // With S the running sum of X, that is the same convolution shape as
    // v_sequence, so the same plan applies.
    std::vector<double> S(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += X.at(static_cast<long>(i) + 1);
        S[i] = acc;
    }
    std::vector<double> conv;
    if (plan != nullptr) {
        if (plan->signal_len() != n || plan->kernel_len() != n)
            throw DomainError("r_n_path: plan shape mismatch");
        conv = plan->apply(S);
    } else {
        conv = fft::convolve(M.increments(n), S);
    }
    double rmax = 0.0;
    for (double r : R) rmax = std::max(rmax, std::abs(r));
    const double tol = 1e-10 * std::max(1.0, rmax);
    for (std::size_t i = 1; i <= n; ++i) {
        if (std::abs(R[i] - conv[i - 1]) > tol)
            throw NumericalError("r_n_path: reordered summation mismatch at i=" +
                                 std::to_string(i));
    }

    const double scale =
        1.0 / (h_of(k, n) * std::pow(static_cast<double>(n), k.target_hurst()) * Mn);
    GaussPath path;
    path.grid = TimeGrid{n};
    path.hurst = k.target_hurst();
    path.kind = PathKind::r_n;
    path.values.assign(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) path.values[i] = R[i] * scale;
    return path;
}

double exact_var_R(const Kernel& k, const MemoryFunction& M, std::size_t n, int workers) {
    if (n == 0) throw DomainError("exact_var_R: n must be positive");
    // c_m = sum_{j=0}^{n} dM(j) window_sum(1-m, n-j-m)
    //     = sum_{q=1}^{n} (M(n-q+1) - M(0)) a_{q-m}   (telescoping over j).
    // That is a correlation of b_q = M(n-q+1) - M(0) with the kernel, i.e. a
    // convolution with the reversed coefficients.
    const std::size_t K = k.coeffs().size();
    const double M0 = M(0.0);
    const long m_lo = 1 - k.k_max();
    const long m_hi = static_cast<long>(n) - k.k_min();
    const std::size_t count = static_cast<std::size_t>(m_hi - m_lo + 1);

    std::vector<double> b(n);  // b[q-1] = M(n-q+1) - M(0) for q = 1..n
    for (std::size_t q = 1; q <= n; ++q)
        b[q - 1] = M(static_cast<double>(n) - static_cast<double>(q) + 1.0) - M0;

    if (static_cast<double>(K) * static_cast<double>(n) <= 1e8) {
        return par::block_sum(count, workers, [&](std::size_t idx) {
            const long m = m_lo + static_cast<long>(idx);
            const long q_lo = std::max<long>(1, m + k.k_min());
            const long q_hi = std::min<long>(static_cast<long>(n), m + k.k_max());
            double c = 0.0;
            for (long q = q_lo; q <= q_hi; ++q)
                c += b[static_cast<std::size_t>(q - 1)] * k.at(q - m);
            return c * c;
        });
    }
    // rev[i] = a_{k_max - i}, so b_q a_{q-m} pairs rev-index k_max - q + m
    // with b-index q - 1; their sum is constant in q, hence
    // c_m = conv[k_max + m - 1].
    std::vector<double> rev(k.coeffs().rbegin(), k.coeffs().rend());
    const std::vector<double> conv = fft::convolve(rev, b);
    return par::block_sum(count, workers, [&](std::size_t idx) {
        const long m = m_lo + static_cast<long>(idx);
        const double c = conv[static_cast<std::size_t>(k.k_max() + m - 1)];
        return c * c;
    });
}

WalkSample sample_walk(const Kernel& k, const MemoryFunction& M, const InnovationModel& innov,
                       std::size_t n, rng::Xoshiro256pp& rng, const fft::RealConv* xplan,
                       const fft::RealConv* vplan) {
    WalkSample w;
    w.n = n;
    const long xi_first = 1 - k.k_max();
    const long xi_last = static_cast<long>(n) - k.k_min();
    const IndexedArray xi = sample_innovations(innov, xi_first, xi_last, rng);
    const IndexedArray X = sample_linear_process(k, xi, 1, static_cast<long>(n), xplan);

    w.s = s_n_path(X, k, n);
    const std::vector<double> v = v_sequence(X, M, n, vplan);
    w.r = r_n_path(v, X, k, M, n, vplan);

    w.S.assign(n + 1, 0.0);
    w.R.assign(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        w.S[i] = w.S[i - 1] + X.at(static_cast<long>(i));
        w.R[i] = w.R[i - 1] + v[i];
    }
    return w;
}

}  // namespace fracsum
