#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include "poincare/bounds.hpp"
#include "poincare/verify.hpp"

using namespace poincare;
using Catch::Approx;

namespace {

// Brute-force crossing oracles: direct ratio comparisons over a dense level
// grid, independent of the library's multiplicative scan.
bool brute_inf_feasible(const Pmf& p, double C) {
    for (std::size_t x = 1; x <= p.max_index() + 1; ++x) {
        const double prev = p[x - 1];
        const double rho = prev > 0.0 ? static_cast<double>(x) * p[x] / prev
                                      : (p[x] > 0.0 ? 1e300 : 0.0);
        const bool vacuous = prev == 0.0 && p[x] == 0.0;
        if (vacuous) continue;
        if (static_cast<double>(x) < C) {
            if (rho < C * (1.0 - 1e-9)) return false;
        } else {
            if (rho > C * (1.0 + 1e-9) + 1e-15) return false;
        }
    }
    return true;
}

std::optional<double> brute_min_crossing_inf(const Pmf& p, double step) {
    std::vector<double> grid;
    for (double c = step; c <= static_cast<double>(p.max_index()) + 2.0; c += step)
        grid.push_back(c);
    for (std::size_t x = 1; x <= p.max_index(); ++x)
        if (p[x - 1] > 0.0)
            grid.push_back(static_cast<double>(x) * p[x] / p[x - 1]);
    std::sort(grid.begin(), grid.end());
    for (double c : grid)
        if (c > 0.0 && brute_inf_feasible(p, c))
            return c;
    return std::nullopt;
}

bool brute_n_feasible(const Pmf& p, long n, double D) {
    for (std::size_t x = 1; x <= p.max_index() + 1; ++x) {
        const double prev = p[x - 1];
        const double denom = (static_cast<double>(n) - static_cast<double>(x) + 1.0) * prev;
        const double rho = denom > 0.0 ? static_cast<double>(x) * p[x] / denom
                                       : (p[x] > 0.0 ? 1e300 : 0.0);
        const bool vacuous = prev == 0.0 && p[x] == 0.0;
        if (vacuous) continue;
        const double level = D / (1.0 - D);
        if (static_cast<double>(x) < D * static_cast<double>(n)) {
            if (rho < level * (1.0 - 1e-9)) return false;
        } else {
            if (rho > level * (1.0 + 1e-9) + 1e-15) return false;
        }
    }
    return true;
}

std::optional<double> brute_min_crossing_n(const Pmf& p, long n, double step) {
    std::vector<double> grid;
    for (double d = step; d < 1.0; d += step)
        grid.push_back(d);
    for (std::size_t x = 1; x <= p.max_index(); ++x) {
        if (p[x - 1] <= 0.0) continue;
        const double r = static_cast<double>(x) * p[x]
                       / ((static_cast<double>(n) - static_cast<double>(x) + 1.0) * p[x - 1]);
        grid.push_back(r / (1.0 + r));
    }
    std::sort(grid.begin(), grid.end());
    for (double d : grid)
        if (d > 0.0 && d < 1.0 && brute_n_feasible(p, n, d))
            return d;
    return std::nullopt;
}

} // namespace

TEST_CASE("moment bound, degree infinity", "[bounds]") {
    SECTION("equal mean and variance") {
        for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
            Moments m{lambda, lambda, lambda + lambda * lambda};
            REQUIRE(bound_ulc_inf(m) == Approx(lambda + 1.0));
        }
    }
    SECTION("Bernoulli(1/2) moments") {
        Moments m{0.5, 0.25, 0.5};
        REQUIRE(bound_ulc_inf(m) == Approx(1.0 + std::sqrt(0.5)));
    }
    SECTION("zero moments") {
        REQUIRE(bound_ulc_inf(Moments{0.0, 0.0, 0.0}) == Approx(1.0));
    }
    SECTION("variance above mean + 1/4 is out of class") {
        REQUIRE_THROWS_AS(bound_ulc_inf(Moments{1.0, 3.0, 4.0}), NegativeDiscriminant);
    }
}

TEST_CASE("moment bound, degree n", "[bounds]") {
    SECTION("binomial substitution") {
        for (long n : {2L, 5L, 20L}) {
            for (double p : {0.1, 0.5, 0.8}) {
                const double nd = static_cast<double>(n);
                const Moments m = moments(pmf_binomial(n, p));
                const double want = nd * p + (1.0 - p) / 2.0
                                  + std::sqrt(0.25 + nd * p * p - p / 2.0);
                REQUIRE(bound_ulc_n(m, n) == Approx(want).epsilon(1e-9));
            }
        }
    }
    SECTION("large degree recovers the degree-infinity bound") {
        const Moments m{2.0, 1.5, 5.5};
        REQUIRE(bound_ulc_n(m, 100000000) == Approx(bound_ulc_inf(m)).epsilon(1e-7));
    }
    SECTION("Bernoulli at degree one") {
        for (double p : {0.2, 0.5, 0.7}) {
            const Moments m{p, p * (1.0 - p), p};
            const double want = p / 2.0 + 0.5 + std::sqrt(0.25 + p * p - p / 2.0);
            REQUIRE(bound_ulc_n(m, 1) == Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("refined moment bound", "[bounds]") {
    SECTION("binomial collapses to np + 1 - p") {
        for (long n : {1L, 3L, 10L, 40L}) {
            for (double p : {0.05, 0.3, 0.5, 0.9}) {
                const Moments m = moments(pmf_binomial(n, p));
                REQUIRE(bound_ulc_n_refined(m, n)
                        == Approx(static_cast<double>(n) * p + 1.0 - p).epsilon(1e-9));
            }
        }
    }
    SECTION("large degree recovers the degree-infinity bound") {
        const Moments m{2.0, 1.5, 5.5};
        REQUIRE(bound_ulc_n_refined(m, 100000000) == Approx(bound_ulc_inf(m)).epsilon(1e-7));
    }
    SECTION("Bernoulli(1/2) at degree one") {
        REQUIRE(bound_ulc_n_refined(Moments{0.5, 0.25, 0.5}, 1) == Approx(1.0));
    }
    SECTION("never above the plain degree-n bound") {
        for (std::uint64_t t = 0; t < 30; ++t) {
            auto rng = trial_rng(17, 70, t);
            const auto ps = random_bernoulli_ps(rng, 25);
            const Moments m = moments(pmf_bernoulli_sum(ps));
            const long n = static_cast<long>(ps.size());
            REQUIRE(bound_ulc_n_refined(m, n) <= bound_ulc_n(m, n) + 1e-12);
        }
    }
}

TEST_CASE("crossing level, degree infinity", "[bounds]") {
    SECTION("Poisson crosses exactly at its mean") {
        for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
            const auto c = crossing_constant_inf(pmf_poisson(lambda, 1e-12));
            REQUIRE(c.has_value());
            REQUIRE(c->implied_bound == Approx(lambda).margin(1e-9));
        }
    }
    SECTION("Bernoulli levels from the feasibility scan") {
        // rho(1) = p/(1-p); the minimal level is p/(1-p) for p <= 1/2 and
        // drops to just above the integer threshold 1 for p > 1/2.
        const auto c02 = crossing_constant_inf(make_pmf({0.8, 0.2}));
        REQUIRE(c02.has_value());
        REQUIRE(c02->C == Approx(0.25).margin(1e-9));
        const auto c05 = crossing_constant_inf(make_pmf({0.5, 0.5}));
        REQUIRE(c05.has_value());
        REQUIRE(c05->C == Approx(1.0).margin(1e-9));
        const auto c07 = crossing_constant_inf(make_pmf({0.3, 0.7}));
        REQUIRE(c07.has_value());
        REQUIRE(c07->C == Approx(1.0).margin(1e-6));
        // each certified level is a genuine upper bound for the exact value
        REQUIRE(c02->C >= 0.2);
        REQUIRE(c07->C >= 0.7);
    }
    SECTION("increasing ratio past the crossing leaves no level") {
        const Pmf p = make_pmf({0.05, 0.1, 0.3, 0.55});
        REQUIRE_FALSE(crossing_constant_inf(p).has_value());
        REQUIRE_FALSE(brute_min_crossing_inf(p, 1e-3).has_value());
    }
    SECTION("scan agrees with the brute grid oracle") {
        for (std::uint64_t t = 0; t < 25; ++t) {
            auto rng = trial_rng(31, 41, t);
            const Pmf p = random_connected_pmf(rng, 10);
            const auto lib = crossing_constant_inf(p);
            const auto brute = brute_min_crossing_inf(p, 1e-4);
            REQUIRE(lib.has_value() == brute.has_value());
            if (lib.has_value())
                REQUIRE(std::abs(lib->C - *brute) <= 2e-4);
        }
    }
}

TEST_CASE("crossing level, degree n", "[bounds]") {
    SECTION("binomial crosses at D = p") {
        for (long n : {1L, 4L, 10L, 25L}) {
            for (double p : {0.1, 0.3, 0.5, 0.8}) {
                const auto c = crossing_constant_n(pmf_binomial(n, p), n);
                REQUIRE(c.has_value());
                REQUIRE(c->D == Approx(p).margin(1e-9));
                REQUIRE(c->implied_bound == Approx(static_cast<double>(n) * p).margin(1e-8));
            }
        }
    }
    SECTION("Bernoulli: the certificate is tight") {
        const Pmf b = make_pmf({0.6, 0.4});
        const auto c = crossing_constant_n(b, 1);
        REQUIRE(c.has_value());
        REQUIRE(c->D == Approx(0.4).margin(1e-9));
        REQUIRE(c->implied_bound == Approx(*poincare_exact(b).value).margin(1e-9));
    }
    SECTION("degree must cover the support") {
        REQUIRE_THROWS_AS(crossing_constant_n(pmf_binomial(5, 0.5), 3), DegreeTooSmall);
    }
    SECTION("embedded truncated Poisson admits no degree-n level") {
        // the degree-n ratio lambda/(n-x+1) increases in x, so both sides of
        // the crossing condition cannot hold at once
        const Pmf p = pmf_poisson(2.0, 1e-12);
        for (long n : {static_cast<long>(p.max_index()),
                       4 * static_cast<long>(p.max_index()), 400L}) {
            REQUIRE_FALSE(crossing_constant_n(p, n).has_value());
            REQUIRE_FALSE(brute_min_crossing_n(p, n, 1e-4).has_value());
        }
    }
    SECTION("scan agrees with the brute grid oracle") {
        for (std::uint64_t t = 0; t < 20; ++t) {
            auto rng = trial_rng(53, 67, t);
            const auto ps = random_bernoulli_ps(rng, 10);
            const Pmf p = pmf_bernoulli_sum(ps);
            const long n = static_cast<long>(ps.size());
            const auto lib = crossing_constant_n(p, n);
            const auto brute = brute_min_crossing_n(p, n, 1e-4);
            REQUIRE(lib.has_value() == brute.has_value());
            if (lib.has_value())
                REQUIRE(std::abs(lib->D - *brute) <= 2e-4);
        }
    }
}

TEST_CASE("signed indicator kernel", "[bounds]") {
    SECTION("vanishes at an integer center") {
        REQUIRE(klaasen_kernel(3, 3, 3.0) == 0.0);
    }
    SECTION("fractional center splits") {
        REQUIRE(klaasen_kernel(3, 1, 1.5) == Approx(0.5));
    }
    SECTION("row sums telescope to x - x0") {
        for (double x0 : {0.0, 0.25, 1.0, 2.5, 7.75, 12.0}) {
            for (long x = 0; x <= 20; ++x) {
                double s = 0.0;
                for (long y = 0; y <= 40; ++y)
                    s += klaasen_kernel(x, y, x0);
                REQUIRE(s == Approx(static_cast<double>(x) - x0).margin(1e-12));
            }
        }
    }
}

TEST_CASE("kernel application", "[bounds]") {
    SECTION("zero function") {
        REQUIRE(kernel_apply(2.5, 7, std::vector<double>(16, 0.0)) == 0.0);
    }
    SECTION("differences telescope to g(x) - g*") {
        for (std::uint64_t t = 0; t < 15; ++t) {
            auto rng = trial_rng(61, 5, t);
            std::uniform_real_distribution<double> gd(-3.0, 3.0);
            std::uniform_real_distribution<double> x0d(0.0, 18.0);
            const double x0 = x0d(rng);
            std::vector<double> g(30), dg(30, 0.0);
            for (double& v : g) v = gd(rng);
            for (std::size_t i = 0; i + 1 < g.size(); ++i) dg[i] = g[i + 1] - g[i];
            const long fl = static_cast<long>(std::floor(x0));
            const double gstar = g[static_cast<std::size_t>(fl)]
                               + dg[static_cast<std::size_t>(fl)] * (x0 - std::floor(x0));
            for (long x = 0; x <= 25; ++x)
                REQUIRE(kernel_apply(x0, x, dg)
                        == Approx(g[static_cast<std::size_t>(x)] - gstar).margin(1e-10));
        }
    }
    SECTION("agrees with naive summation") {
        for (std::uint64_t t = 0; t < 15; ++t) {
            auto rng = trial_rng(62, 6, t);
            std::uniform_real_distribution<double> hd(-2.0, 2.0);
            std::uniform_real_distribution<double> x0d(0.0, 15.0);
            const double x0 = x0d(rng);
            std::vector<double> h(24);
            for (double& v : h) v = hd(rng);
            for (long x = 0; x <= 20; ++x) {
                double naive = 0.0;
                for (long y = 0; y < static_cast<long>(h.size()); ++y)
                    naive += klaasen_kernel(x, y, x0) * h[static_cast<std::size_t>(y)];
                REQUIRE(kernel_apply(x0, x, h) == Approx(naive).margin(1e-12));
            }
        }
    }
}

TEST_CASE("tail certificate verifier", "[bounds]") {
    const double lambda = 2.0;
    const Pmf p = pmf_poisson(lambda, 1e-12);
    SECTION("the Poisson identity certifies c = lambda at x0 = lambda") {
        REQUIRE(verify_tail_certificate(p, p, 1.0, lambda, lambda));
    }
    SECTION("a huge constant always verifies") {
        REQUIRE(verify_tail_certificate(p, p, 1.0, lambda,
                                        static_cast<double>(p.max_index()) + 1.0));
    }
    SECTION("a shaved constant fails") {
        REQUIRE_FALSE(verify_tail_certificate(p, p, 1.0, lambda, 0.9 * lambda));
    }
    SECTION("decomposition is policed") {
        const Pmf p1 = make_pmf({0.1, 0.9});
        REQUIRE_THROWS_AS(verify_tail_certificate(make_pmf({0.9, 0.1}), p1, 0.5, 0.5, 1.0),
                          BadDecomposition);
    }
    SECTION("parameters are policed") {
        REQUIRE_THROWS_AS(verify_tail_certificate(p, p, 0.0, 1.0, 1.0), BadParameter);
        REQUIRE_THROWS_AS(verify_tail_certificate(p, p, 1.0, 1.0, 0.0), BadParameter);
    }
    SECTION("weighted kernel bound holds when the certificate verifies") {
        for (std::uint64_t t = 0; t < 10; ++t) {
            auto rng = trial_rng(77, 8, t);
            const Pmf q = pmf_bernoulli_sum(random_bernoulli_ps(rng, 10));
            const auto ci = crossing_constant_inf(q);
            REQUIRE(ci.has_value());
            const double c = ci->C, x0 = ci->C;
            REQUIRE(verify_tail_certificate(q, q, 1.0, x0, c));
            for (long y = 0; y <= static_cast<long>(q.max_index()); ++y) {
                double lhs = 0.0;
                for (long x = 0; x <= static_cast<long>(q.max_index()); ++x)
                    lhs += klaasen_kernel(x, y, x0) * q[static_cast<std::size_t>(x)]
                         * (static_cast<double>(x) - x0);
                REQUIRE(lhs <= c * q[static_cast<std::size_t>(y)] + 1e-12);
            }
        }
    }
}

TEST_CASE("indicator-covariance sandwich quantities", "[bounds]") {
    SECTION("Poisson lower and upper") {
        for (double lambda : {1.0, 2.0, 5.0}) {
            const BobkovGotze bg = bobkov_gotze(pmf_poisson(lambda, 1e-12));
            REQUIRE(bg.C >= 1.0 - std::exp(-lambda) - 1e-12);
            REQUIRE(bg.upper.has_value());
            REQUIRE(*bg.upper >= std::exp(lambda) - 1.0 - 1e-6);
        }
    }
    SECTION("Bernoulli(1/2)") {
        const BobkovGotze bg = bobkov_gotze(make_pmf({0.5, 0.5}));
        REQUIRE(bg.C == Approx(0.5));
        REQUIRE(bg.upper.has_value());
        REQUIRE(*bg.upper == Approx(1.0));
    }
    SECTION("upper absent without mass at the origin") {
        const BobkovGotze bg = bobkov_gotze(make_pmf({0.0, 0.5, 0.5}));
        REQUIRE_FALSE(bg.upper.has_value());
    }
}

TEST_CASE("variance lower bound and convolution bound", "[bounds]") {
    REQUIRE(variance_lower(pmf_binomial(6, 0.3)) == Approx(6 * 0.3 * 0.7).epsilon(1e-10));
    REQUIRE(variance_lower(make_pmf({0.0, 1.0})) == 0.0);
    const std::vector<double> ps{0.1, 0.4, 0.7};
    double want = 0.0;
    for (double p : ps) want += p - p * p;
    REQUIRE(variance_lower(pmf_bernoulli_sum(ps)) == Approx(want).epsilon(1e-10));

    REQUIRE(convolution_bound({0.1, 0.2, 0.3}) == Approx(0.6));
    REQUIRE(convolution_bound({1.5}) == Approx(1.5));
    REQUIRE_THROWS_AS(convolution_bound({-0.1}), BadParameter);

    SECTION("Poisson factors make the convolution bound tight") {
        const Pmf a = pmf_poisson(1.5, 1e-12), b = pmf_poisson(2.5, 1e-12);
        const double sum = *poincare_exact(a).value + *poincare_exact(b).value;
        REQUIRE(*poincare_exact(convolve(a, b)).value == Approx(sum).margin(1e-6));
    }
}

TEST_CASE("moment feasibility", "[bounds]") {
    SECTION("binomial moments meet the degree-n constraint with equality") {
        for (long n : {2L, 7L}) {
            for (double p : {0.2, 0.6}) {
                const Moments m = moments(pmf_binomial(n, p));
                REQUIRE(moment_feasible(m, n));
                REQUIRE(m.mean - m.variance
                        == Approx(m.mean * m.mean / static_cast<double>(n)).margin(1e-10));
            }
        }
    }
    REQUIRE_FALSE(moment_feasible(Moments{1.0, 2.0, 3.0}));
    REQUIRE(moment_feasible(Moments{3.0, 3.0, 12.0}));
}

TEST_CASE("full report composition", "[bounds]") {
    SECTION("truncated Poisson(2)") {
        const BoundReport r = full_report(pmf_poisson(2.0, 1e-12));
        REQUIRE(r.exact.kind == GapKind::Finite);
        REQUIRE(*r.exact.value == Approx(2.0).margin(1e-6));
        REQUIRE(r.lower_variance == Approx(2.0).margin(1e-8));
        REQUIRE(r.crossing_inf.has_value());
        REQUIRE(r.crossing_inf->implied_bound == Approx(2.0).margin(1e-9));
        REQUIRE(r.thm_inf.has_value());
        REQUIRE(*r.thm_inf == Approx(3.0).margin(1e-6));
        REQUIRE_FALSE(r.thm_n.has_value());
        REQUIRE(r.all_verdicts_pass());
    }
    SECTION("B(10, 0.3)") {
        const BoundReport r = full_report(pmf_binomial(10, 0.3));
        REQUIRE(*r.exact.value >= 2.1 - 1e-8);
        REQUIRE(*r.exact.value <= 3.0 + 1e-8);
        REQUIRE(r.crossing_n.has_value());
        REQUIRE(r.crossing_n->implied_bound == Approx(3.0).margin(1e-8));
        REQUIRE(r.thm_n_refined.has_value());
        REQUIRE(*r.thm_n_refined == Approx(3.7).margin(1e-9));
        REQUIRE(r.all_verdicts_pass());
    }
    SECTION("separated mixture") {
        const Pmf z = mixture(0.5, make_pmf({0.5, 0.5}), make_pmf({0.0, 0.0, 0.0, 0.5, 0.5}));
        const BoundReport r = full_report(z);
        REQUIRE(r.exact.kind == GapKind::Infinite);
        REQUIRE(std::isfinite(r.bg_C));
        REQUIRE_FALSE(r.crossing_inf.has_value());
        for (const Verdict& v : r.verdicts)
            REQUIRE_FALSE(v.name == "exact_le_bg_upper");
        REQUIRE(r.all_verdicts_pass());
    }
    SECTION("degenerate point mass") {
        const BoundReport r = full_report(make_pmf({0.0, 0.0, 1.0}));
        REQUIRE(r.exact.kind == GapKind::Degenerate);
        REQUIRE(r.all_verdicts_pass());
    }
    SECTION("convolution note is an upper bound") {
        const Pmf a = pmf_poisson(1.0, 1e-12), b = pmf_poisson(2.0, 1e-12);
        const double note = *poincare_exact(a).value + *poincare_exact(b).value;
        const BoundReport r = full_report(convolve(a, b), note);
        REQUIRE(r.convolution_note.has_value());
        REQUIRE(r.all_verdicts_pass());
    }
    SECTION("verdicts pass across random instances") {
        for (std::uint64_t t = 0; t < 30; ++t) {
            auto rng = trial_rng(41, 29, t);
            REQUIRE(full_report(pmf_bernoulli_sum(random_bernoulli_ps(rng, 15))).all_verdicts_pass());
            REQUIRE(full_report(random_connected_pmf(rng, 15)).all_verdicts_pass());
            REQUIRE(full_report(random_gapped_pmf(rng, 10)).all_verdicts_pass());
        }
    }
}

TEST_CASE("bound chain ordering on Bernoulli sums", "[bounds][property]") {
    for (std::uint64_t t = 0; t < 40; ++t) {
        auto rng = trial_rng(2, 19, t);
        const auto ps = random_bernoulli_ps(rng, 30);
        const Pmf p = pmf_bernoulli_sum(ps);
        const long n = static_cast<long>(ps.size());
        const Moments m = moments(p);
        const double exact = *poincare_exact(p).value;
        const auto cn = crossing_constant_n(p, n);
        REQUIRE(cn.has_value());
        const double refined = bound_ulc_n_refined(m, n);
        const double plain = bound_ulc_n(m, n);
        const double dropped = bound_ulc_inf(m);
        REQUIRE(exact <= cn->implied_bound + 1e-8);
        REQUIRE(cn->implied_bound <= refined + 1e-8);
        REQUIRE(refined <= plain + 1e-8);
        REQUIRE(plain <= dropped + 1e-8);
    }
}
