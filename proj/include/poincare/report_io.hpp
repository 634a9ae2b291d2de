#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "poincare/bounds.hpp"

namespace poincare {

struct RunResult {
    std::string spec;
    std::optional<BoundReport> report;
    double timing_ms = 0.0;       // never part of the serialized output
    long passed = 0;
    long failed = 0;
};

namespace detail {

inline std::string gap_kind_name(GapKind k) {
    switch (k) {
    case GapKind::Finite: return "Finite";
    case GapKind::Infinite: return "Infinite";
    case GapKind::Degenerate: return "Degenerate";
    }
    return "?";
}

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

// Flat key/value view of a report, in canonical order.  null marks an
// absent optional field.
inline std::vector<std::pair<std::string, nlohmann::json>>
report_fields(const BoundReport& r) {
    using nlohmann::json;
    std::vector<std::pair<std::string, json>> kv;
    auto opt = [](const std::optional<double>& v) {
        return v.has_value() ? json(*v) : json(nullptr);
    };
    kv.emplace_back("exact_kind", detail::gap_kind_name(r.exact.kind));
    kv.emplace_back("exact_value", opt(r.exact.value));
    kv.emplace_back("gap_location", r.exact.gap_location.has_value()
                                        ? json(*r.exact.gap_location) : json(nullptr));
    kv.emplace_back("mean", r.mom.mean);
    kv.emplace_back("variance", r.mom.variance);
    kv.emplace_back("support_is_interval", r.ulc.support_is_interval);
    kv.emplace_back("ulc_is_inf", r.ulc.is_ulc_inf);
    kv.emplace_back("ulc_min_degree", r.ulc.min_ulc_degree.has_value()
                                          ? json(*r.ulc.min_ulc_degree) : json(nullptr));
    kv.emplace_back("lower_variance", r.lower_variance);
    kv.emplace_back("bg_C", r.bg_C);
    kv.emplace_back("bg_upper", opt(r.bg_upper));
    kv.emplace_back("thm_inf", opt(r.thm_inf));
    kv.emplace_back("thm_n", opt(r.thm_n));
    kv.emplace_back("thm_n_refined", opt(r.thm_n_refined));
    kv.emplace_back("crossing_inf", r.crossing_inf.has_value()
                                        ? json(r.crossing_inf->implied_bound) : json(nullptr));
    kv.emplace_back("crossing_n_bound", r.crossing_n.has_value()
                                            ? json(r.crossing_n->implied_bound) : json(nullptr));
    kv.emplace_back("crossing_n_D", r.crossing_n.has_value()
                                        ? json(r.crossing_n->D) : json(nullptr));
    kv.emplace_back("crossing_n_degree", r.crossing_n.has_value()
                                             ? json(r.crossing_n->n) : json(nullptr));
    kv.emplace_back("convolution_note", opt(r.convolution_note));
    for (const Verdict& v : r.verdicts)
        kv.emplace_back("verdict_" + v.name, v.pass);
    return kv;
}

inline nlohmann::json report_to_json(const BoundReport& r) {
    nlohmann::json j = nlohmann::json::object();
    for (auto& [k, v] : report_fields(r))
        j[k] = v;
    return j;
}

inline nlohmann::json run_result_to_json(const RunResult& rr) {
    nlohmann::json j = nlohmann::json::object();
    j["spec"] = rr.spec;
    j["passed"] = rr.passed;
    j["failed"] = rr.failed;
    j["report"] = rr.report.has_value() ? report_to_json(*rr.report)
                                        : nlohmann::json(nullptr);
    return j;
}

namespace detail {

inline std::string csv_cell(const nlohmann::json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return fmt_double(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return v.get<std::string>();
}

} // namespace detail

// Header row plus one value row, same keys as the JSON form.
inline std::string run_result_to_csv(const RunResult& rr) {
    std::string header = "spec,passed,failed";
    std::string row = rr.spec + "," + std::to_string(rr.passed) + "," + std::to_string(rr.failed);
    if (rr.report.has_value()) {
        for (auto& [k, v] : report_fields(*rr.report)) {
            header += "," + k;
            row += "," + detail::csv_cell(v);
        }
    }
    return header + "\n" + row + "\n";
}

// Human-readable form: the ascending bound chain with each entry labeled by
// the certificate or inequality that produced it.
inline std::string run_result_to_text(const RunResult& rr) {
    std::string out = "distribution: " + rr.spec + "\n";
    if (!rr.report.has_value()) {
        out += "passed: " + std::to_string(rr.passed)
             + "  failed: " + std::to_string(rr.failed) + "\n";
        return out;
    }
    const BoundReport& r = *rr.report;
    char buf[160];
    std::snprintf(buf, sizeof buf, "mean %.9g   variance %.9g\n", r.mom.mean, r.mom.variance);
    out += buf;
    std::string cls = !r.ulc.support_is_interval ? "support not an interval"
                    : r.ulc.is_ulc_inf ? "ultra log-concave (degree inf"
                    : "not ultra log-concave";
    if (r.ulc.is_ulc_inf) {
        if (r.ulc.min_ulc_degree.has_value())
            cls += ", min degree " + std::to_string(*r.ulc.min_ulc_degree);
        cls += ")";
    } else if (r.ulc.min_ulc_degree.has_value()) {
        cls = "ultra log-concave (min degree " + std::to_string(*r.ulc.min_ulc_degree) + ")";
    }
    out += "class: " + cls + "\n";
    out += "exact: " + detail::gap_kind_name(r.exact.kind);
    if (r.exact.value.has_value()) {
        std::snprintf(buf, sizeof buf, " %.12g", *r.exact.value);
        out += buf;
    }
    if (r.exact.gap_location.has_value())
        out += "  (zero mass at interior point " + std::to_string(*r.exact.gap_location) + ")";
    out += "\n";

    std::vector<std::pair<double, std::string>> chain;
    chain.emplace_back(r.lower_variance, "variance lower bound");
    chain.emplace_back(r.bg_C, "indicator-covariance lower bound");
    if (r.exact.value.has_value())
        chain.emplace_back(*r.exact.value, "exact");
    if (r.crossing_inf.has_value())
        chain.emplace_back(r.crossing_inf->implied_bound, "score-crossing certificate");
    if (r.crossing_n.has_value())
        chain.emplace_back(r.crossing_n->implied_bound,
                           "degree-" + std::to_string(r.crossing_n->n) + " crossing certificate");
    if (r.thm_n_refined.has_value())
        chain.emplace_back(*r.thm_n_refined, "refined degree-n moment bound");
    if (r.thm_n.has_value())
        chain.emplace_back(*r.thm_n, "degree-n moment bound");
    if (r.thm_inf.has_value())
        chain.emplace_back(*r.thm_inf, "degree-inf moment bound");
    if (r.convolution_note.has_value())
        chain.emplace_back(*r.convolution_note, "convolution subadditivity bound");
    if (r.bg_upper.has_value())
        chain.emplace_back(*r.bg_upper, "indicator-covariance upper bound");
    std::stable_sort(chain.begin(), chain.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    out += "bound chain (ascending):\n";
    for (auto& [v, label] : chain) {
        std::snprintf(buf, sizeof buf, "  %.12g", v);
        out += buf;
        out += "  " + label + "\n";
    }
    long pass = 0;
    for (const Verdict& v : r.verdicts) pass += v.pass ? 1 : 0;
    out += "verdicts: " + std::to_string(pass) + "/" + std::to_string(r.verdicts.size()) + " pass";
    for (const Verdict& v : r.verdicts)
        if (!v.pass) out += "\n  FAILED " + v.name;
    out += "\n";
    return out;
}

} // namespace poincare
