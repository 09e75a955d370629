#pragma once

// Simpliciality of free arrangements in any rank, decided from exponents.
// If A is free with exponents e_1..e_r then chi_A(t) = prod (t - e_i), and
// the same holds for every restriction A^H that is free. A is simplicial
// iff  r chi_A(-1) + 2 sum_H chi_{A^H}(-1) = 0.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace arrfq {

/// Hyperplanes of one orbit share the exponents of their restriction.
struct HyperplaneOrbit {
    std::uint64_t size = 0;
    std::vector<std::uint64_t> restrictionExponents;
    friend bool operator==(const HyperplaneOrbit&, const HyperplaneOrbit&) = default;
};

struct FreeArrangementSpec {
    std::string name;
    std::uint32_t rank = 0;
    std::vector<std::uint64_t> exponents;
    std::vector<HyperplaneOrbit> hyperplaneOrbits;

    std::uint64_t hyperplaneCount() const
    {
        std::uint64_t n = 0;
        for (const auto& o : hyperplaneOrbits) n += o.size;
        return n;
    }
    friend bool operator==(const FreeArrangementSpec&, const FreeArrangementSpec&) = default;
};

/// Throws std::invalid_argument unless the exponent counts and sums are consistent.
/// A zero exponent is allowed; it marks a non-essential arrangement such as G(1,1,r).
inline void validate(const FreeArrangementSpec& s)
{
    const std::string who = s.name.empty() ? std::string("spec") : s.name;
    if (s.rank < 1) throw std::invalid_argument(who + ": rank must be positive");
    if (s.exponents.size() != s.rank)
        throw std::invalid_argument(who + ": expected " + std::to_string(s.rank) + " exponents, got " +
                                    std::to_string(s.exponents.size()));
    if (s.hyperplaneOrbits.empty()) throw std::invalid_argument(who + ": no hyperplane orbits");
    for (const auto& o : s.hyperplaneOrbits) {
        if (o.size == 0) throw std::invalid_argument(who + ": empty hyperplane orbit");
        if (o.restrictionExponents.size() + 1 != s.rank)
            throw std::invalid_argument(who + ": restriction needs " + std::to_string(s.rank - 1) + " exponents");
    }
    const std::uint64_t sum = std::accumulate(s.exponents.begin(), s.exponents.end(), std::uint64_t{0});
    if (sum != s.hyperplaneCount())
        throw std::invalid_argument(who + ": exponents sum to " + std::to_string(sum) + " but orbits hold " +
                                    std::to_string(s.hyperplaneCount()) + " hyperplanes");
}

/// prod (t - e_i), exactly.
inline mpz_class chiFromExponents(const std::vector<std::uint64_t>& exps, std::int64_t t)
{
    mpz_class r = 1;
    for (auto e : exps) r *= mpz_class(static_cast<long>(t)) - mpz_class(static_cast<unsigned long>(e));
    return r;
}

/// r chi_A(-1) + 2 sum over orbits of |orbit| chi_{A^H}(-1).
inline mpz_class simplicialDefect(const FreeArrangementSpec& s)
{
    validate(s);
    mpz_class v = mpz_class(s.rank) * chiFromExponents(s.exponents, -1);
    for (const auto& o : s.hyperplaneOrbits)
        v += 2 * mpz_class(static_cast<unsigned long>(o.size)) * chiFromExponents(o.restrictionExponents, -1);
    return v;
}

inline bool simplicialFree(const FreeArrangementSpec& s) { return simplicialDefect(s) == 0; }

namespace detail {

inline void requireGedr(std::uint32_t e, std::uint32_t d, std::uint32_t r)
{
    if (e < 1 || d < 1) throw std::invalid_argument("G(e,d,r) needs e, d >= 1");
    if (e % d) throw std::invalid_argument("G(e,d,r) needs d | e");
    if (r < 2) throw std::invalid_argument("G(e,d,r) needs r >= 2");
}

} // namespace detail

/// Exponents and restriction exponents of the reflection arrangement of G(e,d,r).
/// For 1 <= d < e the arrangement is that of G(e,1,r); only e = d differs.
inline FreeArrangementSpec gedrSpec(std::uint32_t e, std::uint32_t d, std::uint32_t r)
{
    detail::requireGedr(e, d, r);
    FreeArrangementSpec s;
    s.name = "G(" + std::to_string(e) + "," + std::to_string(d) + "," + std::to_string(r) + ")";
    s.rank = r;
    const std::uint64_t E = e, R = r;
    HyperplaneOrbit o;
    if (e != d) {
        for (std::uint64_t i = 0; i < R; ++i) s.exponents.push_back(i * E + 1);
        for (std::uint64_t i = 0; i + 1 < R; ++i) o.restrictionExponents.push_back(i * E + 1);
        o.size = R + R * (R - 1) / 2 * E;
    } else {
        for (std::uint64_t i = 0; i + 1 < R; ++i) s.exponents.push_back(i * E + 1);
        s.exponents.push_back((R - 1) * (E - 1));
        for (std::uint64_t i = 0; i + 2 < R; ++i) o.restrictionExponents.push_back(i * E + 1);
        o.restrictionExponents.push_back((R - 2) * E + 3 - R);
        o.size = R * (R - 1) / 2 * E;
    }
    std::sort(s.exponents.begin(), s.exponents.end());
    std::sort(o.restrictionExponents.begin(), o.restrictionExponents.end());
    s.hyperplaneOrbits.push_back(std::move(o));
    return s;
}

/// r(r-2)(e-2) = 0 when e = d, always true otherwise.
inline bool gedrSimplicialClosedForm(std::uint32_t e, std::uint32_t d, std::uint32_t r)
{
    detail::requireGedr(e, d, r);
    return e != d || e == 2 || r == 2;
}

/// Reads the exceptional-group data format:
///
///   arrfq-reflection-data 1
///   group <name> rank <r> exponents <e_1> ... <e_r>
///   orbit <size> restriction <f_1> ... <f_{r-1}>
///
/// Each "orbit" row belongs to the closest preceding "group" row. Text after
/// '#' is ignored. Every group is validated.
inline std::vector<FreeArrangementSpec> parseReflectionData(std::istream& in)
{
    std::vector<FreeArrangementSpec> out;
    std::string raw;
    std::size_t lineNo = 0;
    bool sawVersion = false;
    auto fail = [&](const std::string& msg) {
        return std::invalid_argument("reflection data line " + std::to_string(lineNo) + ": " + msg);
    };
    auto readNumbers = [&](std::istringstream& ss) {
        std::vector<std::uint64_t> v;
        std::string tok;
        while (ss >> tok) {
            std::size_t used = 0;
            unsigned long long x = 0;
            try {
                x = std::stoull(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || tok.front() == '-') throw fail("bad integer '" + tok + "'");
            v.push_back(x);
        }
        return v;
    };
    while (std::getline(in, raw)) {
        ++lineNo;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::istringstream ss(raw);
        std::string kw;
        if (!(ss >> kw)) continue;
        if (!sawVersion) {
            std::string ver;
            if (kw != "arrfq-reflection-data" || !(ss >> ver)) throw fail("missing 'arrfq-reflection-data <version>' header");
            if (ver != "1") throw fail("unsupported schema version " + ver);
            sawVersion = true;
            continue;
        }
        if (kw == "group") {
            FreeArrangementSpec s;
            std::string k1, k2;
            long long r = 0;
            if (!(ss >> s.name >> k1 >> r >> k2) || k1 != "rank" || k2 != "exponents" || r < 1)
                throw fail("expected 'group <name> rank <r> exponents ...'");
            s.rank = static_cast<std::uint32_t>(r);
            s.exponents = readNumbers(ss);
            out.push_back(std::move(s));
        } else if (kw == "orbit") {
            if (out.empty()) throw fail("orbit row before any group row");
            HyperplaneOrbit o;
            std::string k1;
            long long n = 0;
            if (!(ss >> n >> k1) || k1 != "restriction" || n < 1) throw fail("expected 'orbit <size> restriction ...'");
            o.size = static_cast<std::uint64_t>(n);
            o.restrictionExponents = readNumbers(ss);
            out.back().hyperplaneOrbits.push_back(std::move(o));
        } else {
            throw fail("unknown keyword '" + kw + "'");
        }
    }
    if (!sawVersion) throw std::invalid_argument("reflection data: empty input");
    for (const auto& s : out) validate(s);
    return out;
}

struct ReflectionVerdict {
    std::string name;
    std::uint64_t hyperplanes = 0;
    mpz_class defect;
    bool simplicial = false;
};

inline std::vector<ReflectionVerdict> exceptionalReport(const std::vector<FreeArrangementSpec>& data)
{
    if (data.empty()) throw std::invalid_argument("exceptionalReport: no data rows");
    std::vector<ReflectionVerdict> out;
    for (const auto& s : data) {
        ReflectionVerdict v;
        v.name = s.name;
        v.hyperplanes = s.hyperplaneCount();
        v.defect = simplicialDefect(s);
        v.simplicial = v.defect == 0;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace arrfq
