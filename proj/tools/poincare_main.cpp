// Command-line front end: analyze a distribution, reproduce the canonical
// worked examples, or run the randomized cross-verification suite.
//
// Exit codes: 0 success, 1 input error, 2 internal inconsistency
// (a failed verdict, claim, or property — should never occur).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poincare/poincare.hpp"

namespace {

using namespace poincare;

double env_tail_eps() {
    const char* v = std::getenv("POINCARE_TAIL_EPS");
    if (v == nullptr)
        return 1e-12;
    try {
        std::size_t pos = 0;
        const double eps = std::stod(v, &pos);
        if (pos != std::string(v).size() || !(eps > 0.0 && eps < 1.0))
            throw ParseError("");
        return eps;
    } catch (...) {
        throw ParseError("POINCARE_TAIL_EPS must be a real in (0,1)");
    }
}

int cmd_analyze(const std::string& spec_text, const std::string& format) {
    const auto t0 = std::chrono::steady_clock::now();
    const DistSpec spec = DistSpec::parse(spec_text, env_tail_eps());
    const Pmf p = spec.build();

    std::optional<double> conv_note;
    const std::vector<Pmf> parts = spec.components();
    if (!parts.empty()) {
        double sum = 0.0;
        bool all_finite = true;
        for (const Pmf& part : parts) {
            const ExactGap e = poincare_exact(part);
            if (e.kind != GapKind::Finite) { all_finite = false; break; }
            sum += *e.value;
        }
        if (all_finite)
            conv_note = sum;
    }

    RunResult rr;
    rr.spec = spec.raw;
    rr.report = full_report(p, conv_note);
    for (const Verdict& v : rr.report->verdicts)
        (v.pass ? rr.passed : rr.failed) += 1;
    rr.timing_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0).count();

    if (format == "json")
        std::cout << run_result_to_json(rr).dump(2) << "\n";
    else if (format == "csv")
        std::cout << run_result_to_csv(rr);
    else
        std::cout << run_result_to_text(rr);
    std::fprintf(stderr, "analyze: %.1f ms\n", rr.timing_ms);
    return rr.failed == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// reproduce: canonical worked examples, claimed values next to computed.
// ---------------------------------------------------------------------------

struct Claims {
    long pass = 0, fail = 0;

    void note(const std::string& label, double claimed, double computed, bool ok) {
        std::printf("  %-52s claimed %-14.10g computed %-16.12g %s\n",
                    label.c_str(), claimed, computed, ok ? "ok" : "FAIL");
        (ok ? pass : fail) += 1;
    }
    void eq(const std::string& label, double claimed, double computed, double tol) {
        note(label, claimed, computed, std::abs(claimed - computed) <= tol);
    }
    void ge(const std::string& label, double computed, double threshold) {
        note(label, threshold, computed, computed >= threshold - 1e-9);
    }
    void le(const std::string& label, double computed, double threshold) {
        note(label, threshold, computed, computed <= threshold + 1e-9);
    }
    void truth(const std::string& label, bool ok) {
        std::printf("  %-52s %s\n", label.c_str(), ok ? "ok" : "FAIL");
        (ok ? pass : fail) += 1;
    }
};

void reproduce_poisson(Claims& c) {
    std::printf("case poisson: exact constant equals the mean; the indicator\n"
                "covariance upper bound is exponentially looser\n");
    for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
        const Pmf p = pmf_poisson(lambda, 1e-12);
        const ExactGap e = poincare_exact(p);
        c.eq("lambda=" + std::to_string(lambda) + " exact", lambda, *e.value, 1e-6);
        const auto ci = crossing_constant_inf(p);
        c.eq("lambda=" + std::to_string(lambda) + " crossing C", lambda,
             ci ? ci->implied_bound : -1.0, 1e-9);
        const BobkovGotze bg = bobkov_gotze(p);
        c.ge("lambda=" + std::to_string(lambda) + " BG upper >= e^l - 1",
             bg.upper.value_or(-1.0), std::exp(lambda) - 1.0);
        c.eq("lambda=" + std::to_string(lambda) + " moment bound = l + 1",
             lambda + 1.0, bound_ulc_inf(moments(p)), 1e-6);
    }
}

void reproduce_binomial(Claims& c) {
    std::printf("case binomial: degree-n crossing at D = p certifies n p\n");
    const long n = 10;
    const double p = 0.3;
    const Pmf b = pmf_binomial(n, p);
    const auto cn = crossing_constant_n(b, n);
    c.eq("B(10,0.3) crossing D", p, cn ? cn->D : -1.0, 1e-9);
    c.eq("B(10,0.3) crossing bound = n p", static_cast<double>(n) * p,
         cn ? cn->implied_bound : -1.0, 1e-8);
    const ExactGap e = poincare_exact(b);
    c.ge("B(10,0.3) exact >= n p (1-p)", *e.value, static_cast<double>(n) * p * (1.0 - p));
    c.le("B(10,0.3) exact <= n p", *e.value, static_cast<double>(n) * p);
    c.eq("B(10,0.3) refined moment bound = n p + 1 - p",
         static_cast<double>(n) * p + 1.0 - p, bound_ulc_n_refined(moments(b), n), 1e-9);
    const BobkovGotze bg = bobkov_gotze(b);
    c.ge("B(10,0.3) BG upper >= (1-p)^-n - 1", bg.upper.value_or(-1.0),
         1.0 / std::pow(1.0 - p, static_cast<double>(n)) - 1.0);
}

void reproduce_bernoulli_sum(Claims& c) {
    std::printf("case bernoulli-sum: per-factor constants add up\n");
    const std::vector<double> ps(10, 0.1);
    const Pmf p = pmf_bernoulli_sum(ps);
    double conv_upper = 0.0;
    for (double pi : ps)
        conv_upper += *poincare_exact(make_pmf({1.0 - pi, pi})).value;
    c.eq("sum of factor constants", 1.0, conv_upper, 1e-9);
    const Moments m = moments(p);
    c.eq("moment bound 1.5 + sqrt(0.35)", 1.5 + std::sqrt(0.35), bound_ulc_inf(m), 1e-9);
    c.eq("variance lower bound", 0.9, variance_lower(p), 1e-9);
    const ExactGap e = poincare_exact(p);
    c.le("exact <= subadditive bound 1.0", *e.value, 1.0);
    c.ge("exact >= variance 0.9", *e.value, 0.9);
}

void reproduce_convolution(Claims& c) {
    std::printf("case convolution: subadditivity, tight for Poisson factors\n");
    const Pmf a = pmf_poisson(1.0, 1e-12), b = pmf_poisson(2.0, 1e-12);
    const ExactGap ec = poincare_exact(convolve(a, b));
    c.eq("Poisson(1) * Poisson(2): exact = 3", 3.0, *ec.value, 1e-6);
    c.eq("equality with sum of factor constants", *poincare_exact(a).value + *poincare_exact(b).value,
         *ec.value, 1e-6);
    const Pmf u = pmf_binomial(3, 0.4), v = pmf_binomial(2, 0.6);
    const double sum = *poincare_exact(u).value + *poincare_exact(v).value;
    c.le("B(3,0.4) * B(2,0.6): exact <= sum of factor constants",
         *poincare_exact(convolve(u, v)).value, sum);
}

void reproduce_counterexample(Claims& c) {
    std::printf("case counterexample: a mixture with an interior zero has an\n"
                "infinite constant; step functions across the gap witness it\n");
    const Pmf u01 = make_pmf({0.5, 0.5});
    const Pmf u34 = make_pmf({0.0, 0.0, 0.0, 0.5, 0.5});
    const Pmf z = mixture(0.5, u01, u34);
    const ExactGap e = poincare_exact(z);
    c.truth("kind is Infinite", e.kind == GapKind::Infinite);
    c.truth("gap located at an interior zero", e.gap_location.has_value() && z[*e.gap_location] == 0.0);
    c.truth("witness has zero Dirichlet form",
            e.witness.has_value() && dirichlet_form(z, *e.witness) == 0.0);
    double num = 0.0;
    if (e.witness.has_value())
        for (std::size_t x = 0; x < z.size(); ++x)
            num += z[x] * (*e.witness)[x] * (*e.witness)[x];
    c.truth("witness has positive second moment", num > 0.0);
    if (e.witness.has_value()) {
        std::printf("  witness:");
        for (std::size_t x = 0; x < e.witness->size(); ++x)
            std::printf(" %.3g", (*e.witness)[x]);
        std::printf("\n");
    }
    for (double m : {1e3, 1e6, 1e9}) {
        const double delta = 0.5 / std::sqrt(m);
        std::vector<double> g(z.size() + 1, 0.0);
        for (std::size_t x = 3; x < g.size(); ++x) g[x] = 1.0;
        g[2] = delta;   // smoothed step through the gap
        c.ge("smoothed step exceeds M = " + std::to_string(m), rayleigh(z, g), m);
    }
}

void reproduce_charlier(Claims& c) {
    std::printf("case charlier: difference/orthogonality identities and the\n"
                "degree-1 extremal function\n");
    for (auto [n, lambda] : std::vector<std::pair<long, double>>{{2, 1.0}, {5, 2.0}, {10, 5.0}, {15, 10.0}}) {
        const long xmax = static_cast<long>(4.0 * lambda) + 8 * n;
        c.le("delta identity residual n=" + std::to_string(n),
             check_delta_identity(n, lambda, xmax), 1e-6);
    }
    c.eq("<c1,c1> at lambda=2", 2.0, check_orthogonality(1, 1, 2.0, 1e-14), 1e-8);
    c.eq("<c3,c5> at lambda=1", 0.0, check_orthogonality(3, 5, 1.0, 1e-14), 1e-8);
    double norm10 = 1.0;
    for (long k = 1; k <= 10; ++k) norm10 *= static_cast<double>(k) * 10.0;
    c.eq("<c10,c10> at lambda=10", norm10, check_orthogonality(10, 10, 10.0, 1e-14), 1e-6 * norm10);
    const double lambda = 2.0;
    const Pmf p = pmf_poisson(lambda, 1e-12);
    const CharlierPoly c1 = charlier(1, lambda);
    std::vector<double> g(p.size() + 1);
    for (std::size_t x = 0; x < g.size(); ++x)
        g[x] = charlier_eval(c1, static_cast<double>(x));
    c.eq("degree-1 quotient attains the constant", lambda, rayleigh(p, g), 1e-6);
}

int cmd_reproduce(const std::string& name) {
    Claims c;
    if (name == "poisson") reproduce_poisson(c);
    else if (name == "binomial") reproduce_binomial(c);
    else if (name == "bernoulli-sum" || name == "bernoulli_sum") reproduce_bernoulli_sum(c);
    else if (name == "convolution") reproduce_convolution(c);
    else if (name == "counterexample") reproduce_counterexample(c);
    else if (name == "charlier") reproduce_charlier(c);
    else throw UnknownCase("reproduce: unknown case '" + name + "'");
    std::printf("%ld checks passed, %ld failed\n", c.pass, c.fail);
    return c.fail == 0 ? 0 : 2;
}

int cmd_verify(std::uint64_t seed, long trials) {
    if (trials < 1)
        throw BadParameter("verify: need trials >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const VerifySummary s = run_verification(seed, trials);
    std::cout << format_verification(s);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "verify: %.1f ms\n", ms);
    return s.total_failures() == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact discrete spectral-gap constants, bounds and certificates"};
    app.require_subcommand(1);

    std::string dist, format = "text";
    CLI::App* analyze = app.add_subcommand("analyze", "full bound report for one distribution");
    analyze->add_option("--dist", dist, "distribution spec, e.g. poisson:2 or binomial:10:0.3")
        ->required();
    analyze->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));

    std::string case_name;
    CLI::App* reproduce = app.add_subcommand("reproduce", "re-run a canonical worked example");
    reproduce->add_option("case", case_name, "poisson | binomial | bernoulli-sum | convolution | counterexample | charlier")
        ->required();

    std::uint64_t seed = 0;
    long trials = 200;
    CLI::App* verify = app.add_subcommand("verify", "randomized cross-verification suite");
    verify->add_option("--seed", seed, "rng seed");
    verify->add_option("--trials", trials, "instances per property");

    try {
        app.parse(argc, argv);
        if (analyze->parsed())
            return cmd_analyze(dist, format);
        if (reproduce->parsed())
            return cmd_reproduce(case_name);
        return cmd_verify(seed, trials);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const poincare::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
}
