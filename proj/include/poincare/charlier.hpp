#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "poincare/errors.hpp"

namespace poincare {

// Monic Poisson-Charlier polynomial of degree n for parameter lambda,
// built from the three-term recurrence
//   c_0 = 1,  c_1(x) = x - lambda,
//   c_{k+1}(x) = (x - k - lambda) c_k(x) - k lambda c_{k-1}(x).
// Under this construction the finite-difference identity
// Dc_n = n c_{n-1} and the orthogonality norm n! lambda^n hold; both are
// checked numerically by the check_* operations below rather than assumed.
struct CharlierPoly {
    long degree = 0;
    double lambda = 0.0;
    std::vector<double> coeffs;   // ascending powers; coeffs[degree] = 1
};

inline CharlierPoly charlier(long n, double lambda) {
    if (n < 0 || n > 30 || !(lambda > 0.0 && lambda <= 30.0))
        throw BadParameter("charlier: need 0 <= n <= 30 and lambda in (0,30]");
    std::vector<double> prev{1.0};                 // c_0
    if (n == 0)
        return CharlierPoly{0, lambda, prev};
    std::vector<double> cur{-lambda, 1.0};         // c_1
    for (long k = 1; k < n; ++k) {
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i + 1] += cur[i];                                   // x * c_k
            next[i] -= (static_cast<double>(k) + lambda) * cur[i];   // -(k+lambda) c_k
        }
        for (std::size_t i = 0; i < prev.size(); ++i)
            next[i] -= static_cast<double>(k) * lambda * prev[i];    // -k lambda c_{k-1}
        prev = std::move(cur);
        cur = std::move(next);
    }
    return CharlierPoly{n, lambda, cur};
}

// Horner evaluation of the stored coefficients.
inline double charlier_eval(const CharlierPoly& p, double x) {
    double v = 0.0;
    for (std::size_t i = p.coeffs.size(); i-- > 0;)
        v = v * x + p.coeffs[i];
    return v;
}

namespace detail {

// Value-space recurrence; much better conditioned than Horner on the
// expanded coefficients at the degrees and arguments the checks cover.
inline double charlier_value(long n, double lambda, double x) {
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = x - lambda;
    for (long k = 1; k < n; ++k) {
        const double next = (x - static_cast<double>(k) - lambda) * cur
                          - static_cast<double>(k) * lambda * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace detail

// Max over x in [0, xmax] of |c_n(x+1) - c_n(x) - n c_{n-1}(x)| / (1 + |c_n(x)|).
inline double check_delta_identity(long n, double lambda, long xmax) {
    if (n < 1)
        throw BadParameter("check_delta_identity: need n >= 1");
    double worst = 0.0;
    for (long x = 0; x <= xmax; ++x) {
        const double xd = static_cast<double>(x);
        const double cn = detail::charlier_value(n, lambda, xd);
        const double cn1 = detail::charlier_value(n, lambda, xd + 1.0);
        const double cm = detail::charlier_value(n - 1, lambda, xd);
        const double resid = std::abs(cn1 - cn - static_cast<double>(n) * cm)
                           / (1.0 + std::abs(cn));
        worst = std::max(worst, resid);
    }
    return worst;
}

// sum_x Pi_lambda(x) c_n(x) c_m(x) over a truncated range; equals
// n! lambda^n when n = m and 0 otherwise, up to the truncation tail.
inline double check_orthogonality(long n, long m, double lambda, double tail_eps) {
    if (n < 0 || m < 0 || !(lambda > 0.0) || !(tail_eps > 0.0))
        throw BadParameter("check_orthogonality: bad arguments");
    double target_scale = 1.0;
    for (long k = 1; k <= n; ++k)
        target_scale *= static_cast<double>(k) * lambda;   // n! lambda^n
    target_scale = std::max(1.0, std::abs(target_scale));

    // The weighted terms keep contributing well past the bare Poisson tail
    // because the integrand carries a degree-(n+m) polynomial; terms also
    // pass through zero at the polynomial roots, so the cutoff test only
    // applies beyond the root region.
    const long horizon = static_cast<long>(std::ceil(4.0 * lambda + 8.0 * static_cast<double>(n + m))) + 60;
    const long roots_end = static_cast<long>(std::ceil(2.0 * lambda + 2.0 * static_cast<double>(n + m))) + 8;
    double sum = 0.0;
    for (long x = 0; x <= 16 * horizon; ++x) {
        const double xd = static_cast<double>(x);
        const double logw = -lambda + xd * std::log(lambda) - std::lgamma(xd + 1.0);
        const double term = std::exp(logw) * detail::charlier_value(n, lambda, xd)
                                           * detail::charlier_value(m, lambda, xd);
        sum += term;
        if (x > roots_end && std::abs(term) < tail_eps * target_scale && x >= horizon)
            break;
    }
    return sum;
}

} // namespace poincare
