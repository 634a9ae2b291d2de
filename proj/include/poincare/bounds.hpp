#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "poincare/errors.hpp"
#include "poincare/pmf.hpp"
#include "poincare/spectral.hpp"
#include "poincare/ulc.hpp"

namespace poincare {

// ---------------------------------------------------------------------------
// Moment bounds for the ultra log-concave classes.
//
// Both come from the crossing-constant quadratic C^2 - C(2EX + 1 - EX/n)
// + EX^2 <= 0; the degree-n form keeps the full discriminant, the plain
// form drops the (EX)^2/n terms (their sum is negative).
// ---------------------------------------------------------------------------

inline double bound_ulc_inf(const Moments& m) {
    const double disc = 0.25 + m.mean - m.variance;
    if (disc < 0.0)
        throw NegativeDiscriminant("bound_ulc_inf: E X - Var X < -1/4");
    return m.mean + 0.5 + std::sqrt(disc);
}

inline double bound_ulc_n(const Moments& m, long n) {
    if (n < 1)
        throw BadParameter("bound_ulc_n: need n >= 1");
    const double nd = static_cast<double>(n);
    const double disc = 0.25 + m.mean - m.variance - m.mean / (2.0 * nd);
    if (disc < 0.0)
        throw NegativeDiscriminant("bound_ulc_n: negative discriminant");
    return m.mean + 0.5 - m.mean / (2.0 * nd) + std::sqrt(disc);
}

// Full-discriminant variant; always <= bound_ulc_n on the same input.
inline double bound_ulc_n_refined(const Moments& m, long n) {
    if (n < 1)
        throw BadParameter("bound_ulc_n_refined: need n >= 1");
    const double nd = static_cast<double>(n);
    const double e = m.mean;
    const double disc = 0.25 + e - m.variance - e / (2.0 * nd)
                      - e * e / nd + e * e / (4.0 * nd * nd);
    if (disc < 0.0)
        throw NegativeDiscriminant("bound_ulc_n_refined: negative discriminant");
    return e + 0.5 - e / (2.0 * nd) + std::sqrt(disc);
}

// Moment constraint satisfied by the ultra log-concave classes:
// E X - Var X >= (E X)^2 / n, and >= 0 for the degree-infinity class.
inline bool moment_feasible(const Moments& m, std::optional<long> n = std::nullopt) {
    const double slack = 1e-10;
    const double gap = m.mean - m.variance;
    if (n.has_value())
        return gap >= m.mean * m.mean / static_cast<double>(*n) - slack;
    return gap >= -slack;
}

// ---------------------------------------------------------------------------
// Certificates.
// ---------------------------------------------------------------------------

enum class CertificateKind { TailCondition, CrossingInf, CrossingDegreeN };

// A checkable witness for an upper bound on the spectral-gap constant.
// Instances are only built after their defining inequalities were verified
// on the pmf they certify.
struct Certificate {
    CertificateKind kind = CertificateKind::CrossingInf;
    double x0 = 0.0;        // TailCondition center
    double c = 0.0;         // TailCondition constant
    double alpha = 1.0;     // TailCondition mixture weight
    double C = 0.0;         // CrossingInf constant
    double D = 0.0;         // CrossingDegreeN ratio level, in (0,1)
    long n = 0;             // CrossingDegreeN degree
    double implied_bound = 0.0;   // c/alpha, C, or D*n
};

namespace detail {

constexpr double kCrossingSlack = 1e-12;

inline bool ge_with_slack(double lhs, double rhs) {
    return lhs >= rhs - kCrossingSlack * std::max(std::abs(lhs), std::abs(rhs));
}
inline bool le_with_slack(double lhs, double rhs) {
    return lhs <= rhs + kCrossingSlack * std::max(std::abs(lhs), std::abs(rhs));
}

// Crossing condition at level C, multiplicative form: x P(x) >= C P(x-1)
// for x < C, and <= for x >= C.  P(-1) = 0, so x = 0 is vacuous.
inline bool crossing_inf_feasible(const Pmf& p, double C) {
    for (std::size_t x = 1; x <= p.max_index() + 1; ++x) {
        const double lhs = static_cast<double>(x) * p[x];
        const double rhs = C * p[x - 1];
        if (static_cast<double>(x) < C) {
            if (!ge_with_slack(lhs, rhs)) return false;
        } else {
            if (!le_with_slack(lhs, rhs)) return false;
        }
    }
    return true;
}

// Degree-n crossing at ratio level D/(1-D) with threshold D*n.
inline bool crossing_n_feasible(const Pmf& p, long n, double D) {
    const double nd = static_cast<double>(n);
    for (std::size_t x = 1; x <= p.max_index() + 1; ++x) {
        const double lhs = static_cast<double>(x) * p[x] * (1.0 - D);
        const double rhs = D * (nd - static_cast<double>(x) + 1.0) * p[x - 1];
        if (static_cast<double>(x) < D * nd) {
            if (!ge_with_slack(lhs, rhs)) return false;
        } else {
            if (!le_with_slack(lhs, rhs)) return false;
        }
    }
    return true;
}

// Minimal feasible level over a candidate set whose gaps contain no
// breakpoints, refined by bisection against the previous (infeasible)
// candidate.  The feasible set is an interval, so bisection is exact up to
// the refinement width.
template <typename Feasible>
std::optional<double> minimal_feasible(std::vector<double> candidates,
                                       Feasible feasible, double refine_width) {
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    double prev = 0.0;
    for (double c : candidates) {
        if (c <= 0.0) continue;
        if (!feasible(c)) {
            prev = c;
            continue;
        }
        double lo = prev, hi = c;
        while (hi - lo > refine_width) {
            const double mid = lo + (hi - lo) / 2.0;
            if (feasible(mid)) hi = mid;
            else lo = mid;
        }
        return hi;
    }
    return std::nullopt;
}

} // namespace detail

// Smallest C > 0 at which the score ratio crosses from above C to below C,
// certifying an upper bound of C.  Candidates are the finite score-ratio
// values and the integer thresholds; absent when no level is feasible.
inline std::optional<Certificate> crossing_constant_inf(const Pmf& p) {
    std::vector<double> cands;
    for (std::size_t x = 1; x <= p.max_index(); ++x)
        if (p[x - 1] > 0.0)
            cands.push_back(static_cast<double>(x) * p[x] / p[x - 1]);
    for (std::size_t x = 1; x <= p.max_index() + 1; ++x)
        cands.push_back(static_cast<double>(x));
    auto level = detail::minimal_feasible(
        std::move(cands), [&](double c) { return detail::crossing_inf_feasible(p, c); },
        1e-10);
    if (!level)
        return std::nullopt;
    Certificate cert;
    cert.kind = CertificateKind::CrossingInf;
    cert.C = *level;
    cert.implied_bound = *level;
    return cert;
}

// Degree-n analogue: smallest D in (0,1) with the degree-n score ratio
// above D/(1-D) before D*n and below it after, certifying a bound of D*n.
inline std::optional<Certificate> crossing_constant_n(const Pmf& p, long n) {
    if (static_cast<long>(p.max_index()) > n)
        throw DegreeTooSmall("crossing_constant_n: support exceeds degree n");
    const double nd = static_cast<double>(n);
    std::vector<double> cands;
    for (std::size_t x = 1; x <= p.max_index(); ++x) {
        if (p[x - 1] <= 0.0) continue;
        const double r = static_cast<double>(x) * p[x]
                       / ((nd - static_cast<double>(x) + 1.0) * p[x - 1]);
        const double d = r / (1.0 + r);
        if (d > 0.0 && d < 1.0) cands.push_back(d);
    }
    for (std::size_t x = 1; x <= p.max_index() + 1; ++x) {
        const double d = static_cast<double>(x) / nd;
        if (d > 0.0 && d < 1.0) cands.push_back(d);
    }
    auto level = detail::minimal_feasible(
        std::move(cands), [&](double d) { return detail::crossing_n_feasible(p, n, d); },
        1e-12);
    if (!level)
        return std::nullopt;
    Certificate cert;
    cert.kind = CertificateKind::CrossingDegreeN;
    cert.D = *level;
    cert.n = n;
    cert.implied_bound = *level * nd;
    return cert;
}

// ---------------------------------------------------------------------------
// Klaasen kernel.
// ---------------------------------------------------------------------------

// chi(x,y) = 1{floor(x0) <= y < x} - 1{x <= y < floor(x0)}
//          - (x0 - floor(x0)) 1{y = floor(x0)}
inline double klaasen_kernel(long x, long y, double x0) {
    const long fl = static_cast<long>(std::floor(x0));
    double v = 0.0;
    if (fl <= y && y < x) v += 1.0;
    if (x <= y && y < fl) v -= 1.0;
    if (y == fl) v -= (x0 - static_cast<double>(fl));
    return v;
}

// sum_y chi(x,y) h(y), by the three-case closed form.  With h = Dg this
// telescopes to g(x) - g*, and with h = 1 it equals x - x0 exactly.
inline double kernel_apply(double x0, long x, const std::vector<double>& h) {
    const long fl = static_cast<long>(std::floor(x0));
    const double frac_term = (static_cast<double>(fl) - x0)
                           * (fl >= 0 && fl < static_cast<long>(h.size()) ? h[static_cast<std::size_t>(fl)] : 0.0);
    if (static_cast<double>(x) > x0) {
        double s = 0.0;
        for (long y = fl; y < x; ++y)
            s += h[static_cast<std::size_t>(y)];
        return s + frac_term;
    }
    if (static_cast<double>(x) < x0) {
        double s = 0.0;
        for (long y = x; y < fl; ++y)
            s += h[static_cast<std::size_t>(y)];
        return -s + frac_term;
    }
    return frac_term;   // x == x0 (integer center)
}

// Tail-condition verifier: with P_X = alpha P_1 + (1-alpha) P_2 implied
// (checked as P_X - alpha P_1 >= 0 entrywise), the certified bound is
// c/alpha when
//   sum_{x>y} (x-x0) P_X(x) <= c P_1(y)   for y >= x0,
//  -sum_{x<=y}(x-x0) P_X(x) <= c P_1(y)   for y <  x0.
inline bool verify_tail_certificate(const Pmf& px, const Pmf& p1, double alpha,
                                    double x0, double c) {
    if (!(c > 0.0) || !(alpha > 0.0 && alpha <= 1.0))
        throw BadParameter("verify_tail_certificate: need c > 0 and alpha in (0,1]");
    const std::size_t len = std::max(px.size(), p1.size());
    for (std::size_t x = 0; x < len; ++x)
        if (px[x] - alpha * p1[x] < -1e-12)
            throw BadDecomposition("verify_tail_certificate: P_X - alpha P_1 has a negative entry");

    const double slack = 1e-12;
    // suffix(y) = sum_{x > y} (x - x0) P_X(x)
    std::vector<double> suffix(px.size() + 1, 0.0);
    for (std::size_t x = px.size(); x-- > 0;)
        suffix[x] = suffix[x + 1] + (static_cast<double>(x) - x0) * px[x];
    const long y_hi = static_cast<long>(len) - 1;
    for (long y = 0; y <= y_hi; ++y) {
        const double p1y = p1[static_cast<std::size_t>(y)];
        if (static_cast<double>(y) >= x0) {
            const double lhs = suffix[std::min(static_cast<std::size_t>(y) + 1, px.size())];
            if (lhs > c * p1y + slack) return false;
        } else {
            // -sum_{x<=y}(x-x0)P(x) = suffix(y) - suffix(-1)... computed directly
            const double lhs = suffix[std::min(static_cast<std::size_t>(y) + 1, px.size())] - suffix[0];
            if (lhs > c * p1y + slack) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Sandwich bounds.
// ---------------------------------------------------------------------------

struct BobkovGotze {
    double C = 0.0;                     // sup_x F(x)(1-F(x))/P(x) over support
    std::optional<double> upper;        // C / P(0), absent when P(0) = 0
};

inline BobkovGotze bobkov_gotze(const Pmf& p) {
    BobkovGotze out;
    const std::vector<double> f = p.cdf();
    const std::vector<double> t = p.tail();
    for (std::size_t x = 0; x < p.max_index(); ++x) {
        if (p[x] <= 0.0) continue;
        out.C = std::max(out.C, f[x] * t[x] / p[x]);
    }
    if (p[0] > 0.0)
        out.upper = out.C / p[0];
    return out;
}

inline double variance_lower(const Pmf& p) {
    return moments(p).variance;
}

// Subadditivity under independent sums: the certified bound for a
// convolution is the sum of the component bounds.
inline double convolution_bound(const std::vector<double>& component_bounds) {
    double s = 0.0;
    for (double b : component_bounds) {
        if (b < 0.0)
            throw BadParameter("convolution_bound: negative component");
        s += b;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Assembled report.
// ---------------------------------------------------------------------------

struct Verdict {
    std::string name;
    bool pass = false;
};

struct BoundReport {
    ExactGap exact;
    Moments mom;
    UlcClass ulc;
    double lower_variance = 0.0;
    double bg_C = 0.0;
    std::optional<double> bg_upper;
    std::optional<double> thm_inf;
    std::optional<double> thm_n;
    std::optional<double> thm_n_refined;
    std::optional<Certificate> crossing_inf;
    std::optional<Certificate> crossing_n;
    std::optional<double> convolution_note;
    std::vector<Verdict> verdicts;

    bool all_verdicts_pass() const {
        for (const Verdict& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

namespace detail {

constexpr double kVerdictSlack = 1e-8;

inline void push_verdict(std::vector<Verdict>& vs, const std::string& name, bool pass) {
    vs.push_back(Verdict{name, pass});
}

} // namespace detail

// Runs every applicable bound and certificate and cross-checks them against
// the exact value.  Bound infeasibility is recorded as absence, never
// raised.  The moment bounds are computed whenever their discriminants
// allow, but they only count as upper bounds (and enter the verdicts) when
// the classifier grants the matching class.
inline BoundReport full_report(const Pmf& p,
                               std::optional<double> convolution_note = std::nullopt) {
    BoundReport r;
    r.exact = poincare_exact(p);
    r.mom = moments(p);
    r.ulc = classify_ulc(p);
    r.lower_variance = r.mom.variance;
    const BobkovGotze bg = bobkov_gotze(p);
    r.bg_C = bg.C;
    r.bg_upper = bg.upper;
    r.convolution_note = convolution_note;

    try {
        r.thm_inf = bound_ulc_inf(r.mom);
    } catch (const NegativeDiscriminant&) {}
    std::optional<long> degree;
    if (r.ulc.min_ulc_degree.has_value()) {
        degree = std::max<long>(*r.ulc.min_ulc_degree, 1);
        try {
            r.thm_n = bound_ulc_n(r.mom, *degree);
            r.thm_n_refined = bound_ulc_n_refined(r.mom, *degree);
        } catch (const NegativeDiscriminant&) {}
    }

    r.crossing_inf = crossing_constant_inf(p);
    if (degree.has_value())
        r.crossing_n = crossing_constant_n(p, *degree);

    auto& vs = r.verdicts;
    const double slack = detail::kVerdictSlack;
    const bool finite = r.exact.kind == GapKind::Finite;
    const bool infinite = r.exact.kind == GapKind::Infinite;
    const double ev = finite ? *r.exact.value : 0.0;

    if (finite || infinite) {
        detail::push_verdict(vs, "variance_le_exact", infinite || r.lower_variance <= ev + slack);
        detail::push_verdict(vs, "bg_lower_le_exact", infinite || r.bg_C <= ev + slack);
    }
    if (finite && r.bg_upper.has_value() && r.ulc.support_is_interval)
        detail::push_verdict(vs, "exact_le_bg_upper", ev <= *r.bg_upper + slack);
    // A crossing certificate on an infinite-constant pmf would be unsound;
    // on a degenerate pmf it is vacuous.
    if (r.crossing_inf.has_value())
        detail::push_verdict(vs, "exact_le_crossing_inf",
                             !infinite && (!finite || ev <= r.crossing_inf->implied_bound + slack));
    if (r.crossing_n.has_value())
        detail::push_verdict(vs, "exact_le_crossing_n",
                             !infinite && (!finite || ev <= r.crossing_n->implied_bound + slack));
    if (finite && r.thm_inf.has_value() && r.ulc.is_ulc_inf)
        detail::push_verdict(vs, "exact_le_thm_inf", ev <= *r.thm_inf + slack);
    if (finite && r.thm_n.has_value())
        detail::push_verdict(vs, "exact_le_thm_n", ev <= *r.thm_n + slack);
    if (r.crossing_n.has_value() && r.thm_n_refined.has_value())
        detail::push_verdict(vs, "crossing_n_le_thm_refined",
                             r.crossing_n->implied_bound <= *r.thm_n_refined + slack);
    if (r.thm_n.has_value() && r.thm_n_refined.has_value())
        detail::push_verdict(vs, "thm_refined_le_thm_n", *r.thm_n_refined <= *r.thm_n + slack);
    if (r.thm_n.has_value() && r.thm_inf.has_value())
        detail::push_verdict(vs, "thm_n_le_thm_inf", *r.thm_n <= *r.thm_inf + slack);
    if (finite && r.convolution_note.has_value())
        detail::push_verdict(vs, "exact_le_convolution_note",
                             ev <= *r.convolution_note + slack);
    if (degree.has_value())
        detail::push_verdict(vs, "moment_constraint", moment_feasible(r.mom, degree));
    else if (r.ulc.is_ulc_inf)
        detail::push_verdict(vs, "moment_constraint", moment_feasible(r.mom));

    return r;
}

} // namespace poincare
