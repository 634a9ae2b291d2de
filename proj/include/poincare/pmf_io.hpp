#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "poincare/errors.hpp"
#include "poincare/pmf.hpp"

namespace poincare {

// Text format: one "x p" pair per line with strictly increasing nonnegative
// integer x; unlisted x within range carry zero mass; '#' starts a comment.

inline Pmf read_pmf(std::istream& in) {
    constexpr long kMaxIndex = 10'000'000;
    std::vector<double> entries;
    long last_x = -1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        long x;
        double pv;
        if (!(ls >> x)) {
            std::string rest;
            if (ls.clear(), ls >> rest)
                throw ParseError("pmf line " + std::to_string(lineno) + ": expected 'x p'");
            continue;   // blank or comment-only line
        }
        if (!(ls >> pv))
            throw ParseError("pmf line " + std::to_string(lineno) + ": missing probability");
        std::string extra;
        if (ls >> extra)
            throw ParseError("pmf line " + std::to_string(lineno) + ": trailing tokens");
        if (x < 0 || x > kMaxIndex)
            throw ParseError("pmf line " + std::to_string(lineno) + ": index out of range");
        if (x <= last_x)
            throw ParseError("pmf line " + std::to_string(lineno) + ": indices must be strictly increasing");
        entries.resize(static_cast<std::size_t>(x) + 1, 0.0);
        entries[static_cast<std::size_t>(x)] = pv;
        last_x = x;
    }
    if (entries.empty())
        throw EmptySupport("pmf file: no entries");
    return Pmf::from_weights(std::move(entries), 1e-6);
}

inline Pmf read_pmf_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open pmf file: " + path);
    return read_pmf(in);
}

inline void write_pmf(std::ostream& out, const Pmf& p) {
    char buf[64];
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x] == 0.0) continue;
        std::snprintf(buf, sizeof buf, "%zu %.17g\n", x, p[x]);
        out << buf;
    }
}

inline void write_pmf_file(const std::string& path, const Pmf& p) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open pmf file for writing: " + path);
    write_pmf(out, p);
}

} // namespace poincare
