#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "poincare/bounds.hpp"
#include "poincare/charlier.hpp"
#include "poincare/pmf.hpp"
#include "poincare/spectral.hpp"
#include "poincare/ulc.hpp"

namespace poincare {

// ---------------------------------------------------------------------------
// Deterministic instance generators.
// ---------------------------------------------------------------------------

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t trial) {
    // splitmix64 of the packed identifiers, so streams are decorrelated.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream * 1'000'003ULL + trial + 1ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return std::mt19937_64(z);
}

// Strictly positive weights on {0,...,N}: connected support containing 0.
inline Pmf random_connected_pmf(std::mt19937_64& rng, std::size_t max_n) {
    std::uniform_int_distribution<std::size_t> size_dist(1, max_n);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::vector<double> entries(size_dist(rng) + 1);
    for (double& e : entries) e = w(rng);
    return Pmf::from_unnormalized(std::move(entries));
}

// Connected pmf with one interior index zeroed out: disconnected support.
inline Pmf random_gapped_pmf(std::mt19937_64& rng, std::size_t max_n) {
    std::uniform_int_distribution<std::size_t> size_dist(2, std::max<std::size_t>(2, max_n));
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::vector<double> entries(size_dist(rng) + 1);
    for (double& e : entries) e = w(rng);
    std::uniform_int_distribution<std::size_t> gap_dist(1, entries.size() - 2);
    entries[gap_dist(rng)] = 0.0;
    return Pmf::from_unnormalized(std::move(entries));
}

inline std::vector<double> random_bernoulli_ps(std::mt19937_64& rng,
                                               std::size_t max_count) {
    std::uniform_int_distribution<std::size_t> count_dist(1, max_count);
    std::uniform_real_distribution<double> pd(0.05, 0.95);
    std::vector<double> ps(count_dist(rng));
    for (double& p : ps) p = pd(rng);
    return ps;
}

// ---------------------------------------------------------------------------
// Independent maximization of the variance/Dirichlet quotient.
//
// Coordinate ascent with exact one-dimensional updates: with all other
// values fixed, numerator and denominator are quadratics in g(t), so the
// stationary points of their ratio solve a quadratic equation.  Random
// restarts guard against stalling in a lower eigenspace.  This route touches
// only the direct sums of the definition, never the kernel eigensolver.
// ---------------------------------------------------------------------------

struct RayleighSearch {
    double value = 0.0;
    std::vector<double> g;
};

inline RayleighSearch maximize_rayleigh(const Pmf& p, std::uint64_t seed,
                                        int restarts = 8, int max_sweeps = 400) {
    RayleighSearch best;
    best.value = -1.0;
    std::mt19937_64 rng(seed ^ 0xabcdef1234567890ULL);
    std::uniform_real_distribution<double> init(-1.0, 1.0);

    for (int r = 0; r < restarts; ++r) {
        std::vector<double> g(p.size() + 1);
        for (double& v : g) v = init(rng);
        double q_old = -1.0;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            for (std::size_t t = 0; t < g.size(); ++t) {
                const double save = g[t];
                auto eval = [&](double s) {
                    g[t] = s;
                    return std::pair<double, double>(centered_second_moment(p, g),
                                                     dirichlet_form(p, g));
                };
                const auto [a_m, b_m] = eval(-1.0);
                const auto [a_0, b_0] = eval(0.0);
                const auto [a_p, b_p] = eval(1.0);
                const double a2 = (a_p + a_m) / 2.0 - a_0, a1 = (a_p - a_m) / 2.0, a0 = a_0;
                const double b2 = (b_p + b_m) / 2.0 - b_0, b1 = (b_p - b_m) / 2.0, b0 = b_0;
                const double qa = a2 * b1 - a1 * b2;
                const double qb = 2.0 * (a2 * b0 - a0 * b2);
                const double qc = a1 * b0 - a0 * b1;

                double best_s = save;
                double best_q = -1.0;
                auto consider = [&](double s) {
                    if (!std::isfinite(s)) return;
                    const double den = (b2 * s + b1) * s + b0;
                    if (den <= 1e-300) return;
                    const double num = (a2 * s + a1) * s + a0;
                    const double q = num / den;
                    if (q > best_q) { best_q = q; best_s = s; }
                };
                consider(save);
                if (std::abs(qa) > 1e-300) {
                    const double disc = qb * qb - 4.0 * qa * qc;
                    if (disc >= 0.0) {
                        const double rt = std::sqrt(disc);
                        consider((-qb + rt) / (2.0 * qa));
                        consider((-qb - rt) / (2.0 * qa));
                    }
                } else if (std::abs(qb) > 1e-300) {
                    consider(-qc / qb);
                }
                g[t] = best_s;
            }
            const double den = dirichlet_form(p, g);
            if (den <= 1e-300) break;
            const double q = centered_second_moment(p, g) / den;
            if (q - q_old <= 1e-12 * std::max(1.0, q))
                break;
            q_old = q;
        }
        const double den = dirichlet_form(p, g);
        if (den > 1e-300) {
            const double q = centered_second_moment(p, g) / den;
            if (q > best.value) {
                best.value = q;
                best.g = g;
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Cross-module property suite.
// ---------------------------------------------------------------------------

struct PropertyResult {
    std::string name;
    long trials = 0;
    long failures = 0;
};

struct VerifySummary {
    std::uint64_t seed = 0;
    long trials = 0;
    std::vector<PropertyResult> properties;

    long total_failures() const {
        long f = 0;
        for (const auto& p : properties) f += p.failures;
        return f;
    }
    long total_checks() const {
        long t = 0;
        for (const auto& p : properties) t += p.trials;
        return t;
    }
};

namespace detail {

template <typename Fn>
void run_property(VerifySummary& s, const std::string& name, long trials, Fn check) {
    PropertyResult pr{name, trials, 0};
    for (long t = 0; t < trials; ++t) {
        bool ok = false;
        try {
            ok = check(static_cast<std::uint64_t>(t));
        } catch (...) {
            ok = false;
        }
        if (!ok) ++pr.failures;
    }
    s.properties.push_back(std::move(pr));
}

} // namespace detail

inline VerifySummary run_verification(std::uint64_t seed, long trials) {
    VerifySummary s;
    s.seed = seed;
    s.trials = trials;
    std::uint64_t stream = 0;

    auto next_stream = [&]() { return stream++; };

    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "constructor_normalization", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf a = random_connected_pmf(rng, 40);
            const Pmf b = pmf_bernoulli_sum(random_bernoulli_ps(rng, 20));
            double sa = 0.0, sb = 0.0;
            for (std::size_t x = 0; x < a.size(); ++x) sa += a[x];
            for (std::size_t x = 0; x < b.size(); ++x) sb += b[x];
            return std::abs(sa - 1.0) <= 1e-12 && std::abs(sb - 1.0) <= 1e-12;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "convolution_moment_additivity", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf a = random_connected_pmf(rng, 25);
            const Pmf b = random_connected_pmf(rng, 25);
            const Moments ma = moments(a), mb = moments(b), mc = moments(convolve(a, b));
            return std::abs(mc.mean - ma.mean - mb.mean) <= 1e-10
                && std::abs(mc.variance - ma.variance - mb.variance) <= 1e-10;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "ulc_degree_monotonicity", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = pmf_bernoulli_sum(random_bernoulli_ps(rng, 12));
            const UlcClass c = classify_ulc(p);
            if (!c.min_ulc_degree.has_value()) return false;
            return detail::score_ratio_n_nonincreasing(p, *c.min_ulc_degree + 1)
                && detail::score_ratio_n_nonincreasing(p, *c.min_ulc_degree + 5);
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "liggett_convolution_closure", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const auto pa = random_bernoulli_ps(rng, 8);
            const auto pb = random_bernoulli_ps(rng, 8);
            const UlcClass c = classify_ulc(convolve(pmf_bernoulli_sum(pa), pmf_bernoulli_sum(pb)));
            return c.min_ulc_degree.has_value()
                && *c.min_ulc_degree <= static_cast<long>(pa.size() + pb.size());
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "ulc_moment_constraint", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = pmf_bernoulli_sum(random_bernoulli_ps(rng, 20));
            const UlcClass c = classify_ulc(p);
            const Moments m = moments(p);
            if (c.min_ulc_degree.has_value() && !moment_feasible(m, *c.min_ulc_degree))
                return false;
            return !c.is_ulc_inf || moment_feasible(m);
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "variance_and_diagonal_lower", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = random_connected_pmf(rng, 30);
            const ExactGap e = poincare_exact(p);
            if (e.kind != GapKind::Finite) return false;
            return *e.value >= variance_lower(p) - 1e-10
                && *e.value >= bobkov_gotze(p).C - 1e-10;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "bg_upper_sandwich", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = random_connected_pmf(rng, 30);
            const ExactGap e = poincare_exact(p);
            const BobkovGotze bg = bobkov_gotze(p);
            return e.kind == GapKind::Finite && bg.upper.has_value()
                && *e.value <= *bg.upper + 1e-8;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "witness_consistency", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = random_connected_pmf(rng, 25);
            const ExactGap e = poincare_exact(p);
            if (e.kind != GapKind::Finite || !e.witness.has_value()) return false;
            const double q = rayleigh(p, *e.witness);
            return q >= *e.value * (1.0 - 1e-6) && q <= *e.value * (1.0 + 1e-6);
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "oracle_equivalence", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = random_connected_pmf(rng, 8);
            const ExactGap e = poincare_exact(p);
            if (e.kind != GapKind::Finite) return false;
            const RayleighSearch o = maximize_rayleigh(p, seed ^ (t * 2654435761ULL));
            return std::abs(o.value - *e.value) <= 1e-5 * std::max(1.0, std::abs(*e.value));
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "bound_chain", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const auto ps = random_bernoulli_ps(rng, 30);
            const Pmf p = pmf_bernoulli_sum(ps);
            const long n = static_cast<long>(ps.size());
            const Moments m = moments(p);
            const ExactGap e = poincare_exact(p);
            if (e.kind != GapKind::Finite) return false;
            const auto cn = crossing_constant_n(p, n);
            if (!cn.has_value()) return false;
            const double refined = bound_ulc_n_refined(m, n);
            const double plain = bound_ulc_n(m, n);
            const double dropped = bound_ulc_inf(m);
            const auto ci = crossing_constant_inf(p);
            const double slack = 1e-8;
            return *e.value <= cn->implied_bound + slack
                && cn->implied_bound <= refined + slack
                && refined <= plain + slack
                && plain <= dropped + slack
                && ci.has_value() && *e.value <= ci->implied_bound + slack;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "convolution_subadditivity", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf a = random_connected_pmf(rng, 10);
            const Pmf b = random_connected_pmf(rng, 10);
            const ExactGap ea = poincare_exact(a), eb = poincare_exact(b);
            const ExactGap ec = poincare_exact(convolve(a, b));
            if (ea.kind != GapKind::Finite || eb.kind != GapKind::Finite
                || ec.kind != GapKind::Finite)
                return false;
            return *ec.value <= *ea.value + *eb.value + 1e-8;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "tail_certificate_soundness", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = pmf_bernoulli_sum(random_bernoulli_ps(rng, 15));
            const auto ci = crossing_constant_inf(p);
            if (!ci.has_value()) return false;
            const double c = ci->C;
            if (!verify_tail_certificate(p, p, 1.0, c, c)) return false;
            const ExactGap e = poincare_exact(p);
            return e.kind == GapKind::Finite && *e.value <= c + 1e-8;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "kernel_identity_constant", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            std::uniform_real_distribution<double> x0d(0.0, 20.0);
            const double x0 = x0d(rng);
            const std::vector<double> ones(64, 1.0);
            for (long x = 0; x <= 50; ++x) {
                if (std::abs(kernel_apply(x0, x, ones) - (static_cast<double>(x) - x0)) > 1e-12)
                    return false;
            }
            return true;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "kernel_identity_differences", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            std::uniform_real_distribution<double> gd(-2.0, 2.0);
            std::uniform_real_distribution<double> x0d(0.0, 30.0);
            const double x0 = x0d(rng);
            std::vector<double> g(40), dg(40);
            for (double& v : g) v = gd(rng);
            for (std::size_t i = 0; i + 1 < g.size(); ++i) dg[i] = g[i + 1] - g[i];
            const long fl = static_cast<long>(std::floor(x0));
            const double gstar = g[static_cast<std::size_t>(fl)]
                               + dg[static_cast<std::size_t>(fl)] * (x0 - static_cast<double>(fl));
            for (long x = 0; x <= 35; ++x) {
                const double want = g[static_cast<std::size_t>(x)] - gstar;
                if (std::abs(kernel_apply(x0, x, dg) - want) > 1e-10)
                    return false;
            }
            return true;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "kernel_weighted_tail_bound", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = pmf_bernoulli_sum(random_bernoulli_ps(rng, 12));
            const auto ci = crossing_constant_inf(p);
            if (!ci.has_value()) return false;
            const double c = ci->C, x0 = ci->C;
            for (long y = 0; y <= static_cast<long>(p.max_index()); ++y) {
                double lhs = 0.0;
                for (long x = 0; x <= static_cast<long>(p.max_index()); ++x)
                    lhs += klaasen_kernel(x, y, x0) * p[static_cast<std::size_t>(x)]
                         * (static_cast<double>(x) - x0);
                if (lhs > c * p[static_cast<std::size_t>(y)] + 1e-12)
                    return false;
            }
            return true;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "charlier_delta_identity", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            std::uniform_int_distribution<long> nd(1, 15);
            const double lambdas[] = {0.5, 1.0, 2.0, 5.0, 10.0};
            std::uniform_int_distribution<int> ld(0, 4);
            const long n = nd(rng);
            const double lambda = lambdas[ld(rng)];
            const long xmax = static_cast<long>(4.0 * lambda) + 8 * n;
            return check_delta_identity(n, lambda, xmax) <= 1e-6;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "charlier_orthogonality", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            std::uniform_int_distribution<long> nd(0, 10);
            std::uniform_real_distribution<double> ld(0.5, 10.0);
            const long n = nd(rng), m = nd(rng);
            const double lambda = ld(rng);
            double scale = 1.0;
            for (long k = 1; k <= n; ++k) scale *= static_cast<double>(k) * lambda;
            const double target = n == m ? scale : 0.0;
            const double got = check_orthogonality(n, m, lambda, 1e-14);
            return std::abs(got - target) <= 1e-6 * std::max(1.0, scale);
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "infinite_gap_detection", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = random_gapped_pmf(rng, 12);
            const ExactGap e = poincare_exact(p);
            if (e.kind != GapKind::Infinite || !e.witness.has_value()
                || !e.gap_location.has_value())
                return false;
            if (dirichlet_form(p, *e.witness) != 0.0) return false;
            double num = 0.0;
            for (std::size_t x = 0; x < p.size(); ++x)
                num += p[x] * (*e.witness)[x] * (*e.witness)[x];
            if (!(num > 0.0)) return false;
            if (crossing_constant_inf(p).has_value()) return false;
            return true;
        });
    }
    {
        const std::uint64_t st = next_stream();
        detail::run_property(s, "trailing_state_invariance", trials, [&](std::uint64_t t) {
            auto rng = trial_rng(seed, st, t);
            const Pmf p = random_connected_pmf(rng, 15);
            std::vector<double> padded(p.probs());
            padded.push_back(0.0);
            padded.push_back(0.0);
            const Pmf q = Pmf::from_unnormalized(std::move(padded));
            const ExactGap ep = poincare_exact(p), eq = poincare_exact(q);
            return q.size() == p.size() && ep.kind == GapKind::Finite
                && eq.kind == GapKind::Finite
                && std::abs(*ep.value - *eq.value) <= 1e-12;
        });
    }

    return s;
}

// Deterministic text rendering; numbers of checks only, no wall-clock data.
inline std::string format_verification(const VerifySummary& s) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "verification: seed=%llu trials=%ld\n",
                  static_cast<unsigned long long>(s.seed), s.trials);
    out += buf;
    for (const PropertyResult& p : s.properties) {
        std::snprintf(buf, sizeof buf, "%s  %-32s %ld/%ld\n",
                      p.failures == 0 ? "ok " : "FAIL", p.name.c_str(),
                      p.trials - p.failures, p.trials);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "total: %zu properties, %ld checks, %ld failures\n",
                  s.properties.size(), s.total_checks(), s.total_failures());
    out += buf;
    return out;
}

} // namespace poincare
