#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "imsweep/core.hpp"
#include "imsweep/measures.hpp"

namespace imsweep {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Charge / divisor text format: one atom per line, "re im mass" with the mass
// defaulting to 1; '#' starts a comment; blank lines ignored.
// ---------------------------------------------------------------------------

namespace detail {

inline bool parse_double(const std::string& tok, double& out) {
    const char* s = tok.c_str();
    char* end = nullptr;
    out = std::strtod(s, &end);
    return end != s && *end == '\0' && std::isfinite(out);
}

struct RawAtom {
    double re, im, mass;
    std::size_t line_no;
};

inline std::vector<RawAtom> parse_atoms(std::istream& in, const std::string& origin) {
    std::vector<RawAtom> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks.size() < 2 || toks.size() > 3)
            throw ParseError(origin + ":" + std::to_string(line_no) +
                             ": expected `re im [mass]`");
        RawAtom a{0.0, 0.0, 1.0, line_no};
        if (!parse_double(toks[0], a.re) || !parse_double(toks[1], a.im) ||
            (toks.size() == 3 && !parse_double(toks[2], a.mass)))
            throw ParseError(origin + ":" + std::to_string(line_no) + ": malformed number");
        out.push_back(a);
    }
    return out;
}

}  // namespace detail

inline AtomicCharge parse_charge(std::istream& in, const std::string& origin = "<input>") {
    AtomicCharge c;
    for (const auto& a : detail::parse_atoms(in, origin)) {
        if (a.mass == 0.0)
            throw ParseError(origin + ":" + std::to_string(a.line_no) + ": zero mass atom");
        c.atoms.push_back({cplx(a.re, a.im), a.mass});
    }
    return c.canonicalized();
}

inline Divisor parse_divisor(std::istream& in, const std::string& origin = "<input>",
                             bool allow_origin_atom = false) {
    Divisor d;
    for (const auto& a : detail::parse_atoms(in, origin)) {
        const double rounded = std::round(a.mass);
        if (!(a.mass >= 1.0) || std::abs(a.mass - rounded) > 0.0)
            throw ParseError(origin + ":" + std::to_string(a.line_no) +
                             ": divisor multiplicity must be a positive integer");
        if (!allow_origin_atom && a.re == 0.0 && a.im == 0.0)
            throw ParseError(origin + ":" + std::to_string(a.line_no) +
                             ": atom at 0 not allowed here");
        d.atoms.push_back({cplx(a.re, a.im), static_cast<long>(rounded)});
    }
    return d.canonicalized();
}

inline AtomicCharge load_charge(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    return parse_charge(in, path);
}

inline Divisor load_divisor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    return parse_divisor(in, path);
}

// ---------------------------------------------------------------------------
// Numeric formatting: 17 significant digits, '.' separator, round-trip exact.
// ---------------------------------------------------------------------------

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string profile_to_csv(const EvidenceProfile& p,
                                  const std::vector<std::string>& header_comments = {}) {
    std::string out;
    for (const auto& c : header_comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < p.columns.size(); ++i)
        out += (i ? "," : "") + p.columns[i];
    out += "\n";
    for (const auto& row : p.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + format_number(row[i]);
        out += "\n";
    }
    return out;
}

}  // namespace imsweep
