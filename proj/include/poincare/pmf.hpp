#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "poincare/errors.hpp"

namespace poincare {

// A probability mass function on {0, ..., N}.
//
// Invariants: every entry >= 0, entries sum to 1 in working precision,
// probs[N] > 0 (trailing zeros trimmed).  Interior zeros are allowed;
// they mark disconnected support.  Immutable after construction.
class Pmf {
public:
    static Pmf from_weights(std::vector<double> entries, double sum_tol) {
        if (entries.empty())
            throw EmptySupport("pmf: no entries");
        for (double v : entries)
            if (v < 0.0)
                throw NegativeMass("pmf: negative entry");
        while (entries.size() > 1 && entries.back() == 0.0)
            entries.pop_back();
        const double sum = std::accumulate(entries.begin(), entries.end(), 0.0);
        if (sum <= 0.0)
            throw EmptySupport("pmf: all entries zero");
        if (sum_tol > 0.0 && std::abs(sum - 1.0) > sum_tol)
            throw NotNormalized("pmf: entries sum to " + std::to_string(sum));
        for (double& v : entries)
            v /= sum;
        return Pmf(std::move(entries));
    }

    // Normalizes without a sum check; for internally constructed weights.
    static Pmf from_unnormalized(std::vector<double> entries) {
        return from_weights(std::move(entries), 0.0);
    }

    std::size_t max_index() const { return probs_.size() - 1; }   // N
    std::size_t size() const { return probs_.size(); }            // N + 1

    // P(x); zero outside {0, ..., N}.
    double operator[](std::size_t x) const {
        return x < probs_.size() ? probs_[x] : 0.0;
    }

    const std::vector<double>& probs() const { return probs_; }

    // cdf F(x) = sum_{y<=x} P(y), clamped into [0, 1].
    std::vector<double> cdf() const {
        std::vector<double> f(probs_.size());
        double acc = 0.0;
        for (std::size_t x = 0; x < probs_.size(); ++x) {
            acc += probs_[x];
            f[x] = std::min(acc, 1.0);
        }
        return f;
    }

    // tail(x) = sum_{y>x} P(y), accumulated backward.  1 - F(x) computed
    // forward loses all relative accuracy once the tail drops below machine
    // epsilon; the suffix sum keeps it.
    std::vector<double> tail() const {
        std::vector<double> t(probs_.size());
        double acc = 0.0;
        for (std::size_t x = probs_.size(); x-- > 1;) {
            acc += probs_[x];
            t[x - 1] = acc;
        }
        t[probs_.size() - 1] = 0.0;
        return t;
    }

    std::size_t support_min() const {
        std::size_t a = 0;
        while (probs_[a] == 0.0) ++a;
        return a;
    }

    bool support_is_interval() const {
        for (std::size_t x = support_min(); x < probs_.size(); ++x)
            if (probs_[x] == 0.0)
                return false;
        return true;
    }

    // First interior zero-mass index, or size() if the support is connected.
    std::size_t first_gap() const {
        for (std::size_t x = support_min(); x < probs_.size(); ++x)
            if (probs_[x] == 0.0)
                return x;
        return probs_.size();
    }

    bool is_point_mass() const { return support_min() == max_index(); }

private:
    explicit Pmf(std::vector<double> p) : probs_(std::move(p)) {}
    std::vector<double> probs_;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double second_moment = 0.0;
};

inline Pmf make_pmf(const std::vector<double>& entries) {
    return Pmf::from_weights(entries, 1e-6);
}

// Truncated Poisson mass function with mean lambda.  The truncation point is
// the smallest N whose certified tail bound Pi(N+1)/(1 - lambda/(N+2)) drops
// below tail_eps; the result is renormalized.
inline Pmf pmf_poisson(double lambda, double tail_eps) {
    if (!(lambda > 0.0) || !(tail_eps > 0.0 && tail_eps < 1.0))
        throw BadParameter("pmf_poisson: need lambda > 0 and tail_eps in (0,1)");
    std::vector<double> probs;
    double term = std::exp(-lambda);   // Pi(0)
    probs.push_back(term);
    for (std::size_t x = 0;; ++x) {
        const double next = term * lambda / static_cast<double>(x + 1); // Pi(x+1)
        const double ratio = lambda / static_cast<double>(x + 2);
        if (ratio < 1.0 && next / (1.0 - ratio) <= tail_eps)
            break;
        probs.push_back(next);
        term = next;
        if (probs.size() > 100'000'000)
            throw BadParameter("pmf_poisson: truncation did not terminate");
    }
    return Pmf::from_unnormalized(std::move(probs));
}

inline Pmf pmf_binomial(long n, double p) {
    if (n < 1 || n > 100'000 || !(p > 0.0 && p < 1.0))
        throw BadParameter("pmf_binomial: need 1 <= n <= 1e5 and p in (0,1)");
    std::vector<double> probs(static_cast<std::size_t>(n) + 1);
    const double lp = std::log(p), lq = std::log1p(-p);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    for (long x = 0; x <= n; ++x) {
        const double lg = lgn - std::lgamma(static_cast<double>(x) + 1.0)
                              - std::lgamma(static_cast<double>(n - x) + 1.0);
        probs[static_cast<std::size_t>(x)] =
            std::exp(lg + static_cast<double>(x) * lp + static_cast<double>(n - x) * lq);
    }
    return Pmf::from_unnormalized(std::move(probs));
}

inline Pmf convolve(const Pmf& a, const Pmf& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t x = 0; x < a.size(); ++x) {
        if (a[x] == 0.0) continue;
        for (std::size_t y = 0; y < b.size(); ++y)
            out[x + y] += a[x] * b[y];
    }
    return Pmf::from_unnormalized(std::move(out));
}

inline Pmf pmf_bernoulli_sum(const std::vector<double>& ps) {
    if (ps.empty())
        throw BadParameter("pmf_bernoulli_sum: need at least one parameter");
    for (double p : ps)
        if (!(p > 0.0 && p < 1.0))
            throw BadParameter("pmf_bernoulli_sum: parameters must lie in (0,1)");
    Pmf acc = Pmf::from_unnormalized({1.0 - ps[0], ps[0]});
    for (std::size_t i = 1; i < ps.size(); ++i)
        acc = convolve(acc, Pmf::from_unnormalized({1.0 - ps[i], ps[i]}));
    return acc;
}

// Pointwise convex combination alpha*a + (1-alpha)*b.
inline Pmf mixture(double alpha, const Pmf& a, const Pmf& b) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw BadParameter("mixture: alpha must lie in (0,1]");
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] = alpha * a[x] + (1.0 - alpha) * b[x];
    return Pmf::from_unnormalized(std::move(out));
}

inline Moments moments(const Pmf& p) {
    Moments m;
    for (std::size_t x = 0; x < p.size(); ++x) {
        const double xd = static_cast<double>(x);
        m.mean += xd * p[x];
        m.second_moment += xd * xd * p[x];
    }
    m.variance = std::max(0.0, m.second_moment - m.mean * m.mean);
    return m;
}

// Score ratio rho(x) = x P(x) / P(x-1); rho(0) = 0 by convention, and the
// ratio vanishes above the support.
inline double score_ratio_inf(const Pmf& p, std::size_t x) {
    if (x == 0) return 0.0;
    if (x > p.max_index()) return 0.0;
    const double denom = p[x - 1];
    if (denom == 0.0)
        throw DividedByZeroMass("score_ratio_inf: P(x-1) = 0 at x = " + std::to_string(x));
    return static_cast<double>(x) * p[x] / denom;
}

// Degree-n score ratio rho_n(x) = x P(x) / ((n-x+1) P(x-1)); same conventions.
inline double score_ratio_n(const Pmf& p, long n, std::size_t x) {
    if (static_cast<long>(p.max_index()) > n)
        throw DegreeTooSmall("score_ratio_n: support exceeds degree n");
    if (x == 0) return 0.0;
    if (x > p.max_index()) return 0.0;
    const double denom = p[x - 1];
    if (denom == 0.0)
        throw DividedByZeroMass("score_ratio_n: P(x-1) = 0 at x = " + std::to_string(x));
    return static_cast<double>(x) * p[x]
         / (static_cast<double>(n - static_cast<long>(x) + 1) * denom);
}

} // namespace poincare
