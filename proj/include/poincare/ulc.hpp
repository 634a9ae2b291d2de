#pragma once

#include <cstdint>
#include <optional>

#include "poincare/pmf.hpp"

namespace poincare {

struct UlcClass {
    bool is_ulc_inf = false;
    std::optional<long> min_ulc_degree;   // smallest n with the degree-n property
    bool support_is_interval = false;
};

namespace detail {

// "nonincreasing" with a relative guard so exactly-constant ratios (Poisson,
// binomial) survive rounding.
constexpr double kMonotoneSlack = 1e-12;

// rho(x+1) <= rho(x), cross-multiplied: (x+1) P(x+1) P(x-1) <= x P(x)^2.
inline bool score_ratio_nonincreasing(const Pmf& p) {
    for (std::size_t x = 1; x + 1 <= p.max_index(); ++x) {
        const double lhs = static_cast<double>(x + 1) * p[x + 1] * p[x - 1];
        const double rhs = static_cast<double>(x) * p[x] * p[x];
        if (lhs > rhs * (1.0 + kMonotoneSlack))
            return false;
    }
    return true;
}

// rho_n(x+1) <= rho_n(x), cross-multiplied with the (n-x+1) factors.
inline bool score_ratio_n_nonincreasing(const Pmf& p, long n) {
    for (std::size_t x = 1; x + 1 <= p.max_index(); ++x) {
        const double nf = static_cast<double>(n - static_cast<long>(x));
        const double lhs = static_cast<double>(x + 1) * p[x + 1] * p[x - 1] * (nf + 1.0);
        const double rhs = static_cast<double>(x) * p[x] * p[x] * nf;
        if (lhs > rhs * (1.0 + kMonotoneSlack))
            return false;
    }
    return true;
}

} // namespace detail

// Classifies p into the ultra log-concave hierarchy: degree-n membership
// (P(x)/binom(n,x) log-concave) and the degree-infinity class (P(x) x!
// log-concave), both tested through score-ratio monotonicity.  Membership is
// monotone in n, so the minimal degree is found by binary search over
// [N, max(4N, 1024)]; a degree past the cap is reported as absent.
inline UlcClass classify_ulc(const Pmf& p) {
    UlcClass c;
    c.support_is_interval = p.support_is_interval();
    if (!c.support_is_interval)
        return c;
    if (p.is_point_mass()) {
        c.is_ulc_inf = true;
        c.min_ulc_degree = static_cast<long>(p.max_index());
        return c;
    }
    c.is_ulc_inf = detail::score_ratio_nonincreasing(p);

    const long n_min = static_cast<long>(p.max_index());
    const long cap = std::max(4 * n_min, 1024L);
    if (detail::score_ratio_n_nonincreasing(p, cap)) {
        long lo = n_min, hi = cap;  // hi satisfies the property
        while (lo < hi) {
            const long mid = lo + (hi - lo) / 2;
            if (detail::score_ratio_n_nonincreasing(p, mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        c.min_ulc_degree = lo;
    }
    return c;
}

} // namespace poincare
