#pragma once

// Text formats and reports.
//
// Arrangement file:
//
//   # comment
//   field 3^2 modulus 2,2,1
//   1 0 w^5
//   0 1 2
//
// The header names F_p or F_{p^k}, optionally with the coefficients c0..ck of
// the defining polynomial (lowest degree first). Each body line holds the
// three coordinates of one normal vector as field tokens ("w", "w^j" or an
// integer); commas and parentheses between tokens are ignored.
//
// Generator file: the same header, then 3x3 matrices as nine tokens each,
// row by row, in any line layout.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "arrfq/arrangement.hpp"
#include "arrfq/group.hpp"
#include "arrfq/incidence.hpp"
#include "arrfq/search.hpp"

namespace arrfq {

/// A malformed input, with the 1-based line (or appendix row) it was found at.
class ParseError : public std::invalid_argument {
public:
    ParseError(std::size_t where, const std::string& what)
        : std::invalid_argument("line " + std::to_string(where) + ": " + what), where_(where)
    {
    }
    std::size_t where() const { return where_; }

private:
    std::size_t where_;
};

namespace detail {

inline std::string stripComment(std::string s)
{
    if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
    return s;
}

inline std::vector<std::string> splitTokens(std::string s)
{
    for (char& ch : s)
        if (ch == ',' || ch == '(' || ch == ')' || ch == '\t' || ch == '\r') ch = ' ';
    std::istringstream ss(s);
    std::vector<std::string> out;
    for (std::string t; ss >> t;) out.push_back(t);
    return out;
}

inline std::uint32_t parseUnsigned(const std::string& s, std::size_t where, const char* what)
{
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(where, std::string("bad ") + what + " '" + s + "'");
    return v;
}

} // namespace detail

/// Parses "field <p>[^<k>] [modulus c0,...,ck]".
inline FiniteField parseFieldHeader(const std::string& line, std::size_t where = 1)
{
    std::istringstream ss(line);
    std::string kw, order, mkw, coeffs;
    if (!(ss >> kw) || kw != "field" || !(ss >> order)) throw ParseError(where, "expected 'field <p>[^<k>]' header");
    std::uint32_t p = 0, k = 1;
    if (auto c = order.find('^'); c != std::string::npos) {
        p = detail::parseUnsigned(order.substr(0, c), where, "characteristic");
        k = detail::parseUnsigned(order.substr(c + 1), where, "degree");
    } else {
        p = detail::parseUnsigned(order, where, "field order");
    }
    std::optional<std::vector<std::uint32_t>> modulus;
    if (ss >> mkw) {
        if (mkw != "modulus") throw ParseError(where, "unexpected '" + mkw + "' in field header");
        std::string rest, tok;
        while (ss >> tok) rest += tok;
        std::vector<std::uint32_t> m;
        for (const auto& c : detail::splitTokens(rest)) m.push_back(detail::parseUnsigned(c, where, "modulus coefficient"));
        if (m.size() != k + 1) throw ParseError(where, "modulus needs " + std::to_string(k + 1) + " coefficients");
        modulus = std::move(m);
    }
    try {
        if (k == 1 && !modulus && !detail::isPrime(p)) return makeFieldOfOrder(p);
        return makeField(p, k, modulus);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(where, e.what());
    }
}

/// Header naming F exactly, modulus included for extension fields.
inline std::string fieldHeader(const FiniteField& F)
{
    std::string s = "field " + std::to_string(F.characteristic());
    if (F.degree() == 1) return s;
    s += "^" + std::to_string(F.degree()) + " modulus ";
    const auto m = F.modulus();
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
    return s;
}

struct ParsedArrangement {
    Arrangement arrangement;
    std::vector<std::string> warnings;
};

inline ParsedArrangement parseArrangementFile(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineNo = 0;
    std::optional<FiniteField> F;
    std::vector<Triple> normals;
    std::map<std::uint32_t, std::size_t> firstSeen;
    ParsedArrangement out;
    while (std::getline(in, raw)) {
        ++lineNo;
        const std::string line = detail::stripComment(raw);
        const auto toks = detail::splitTokens(line);
        if (toks.empty()) continue;
        if (!F) {
            F = parseFieldHeader(line, lineNo);
            continue;
        }
        if (toks.size() != 3) throw ParseError(lineNo, "expected three coordinates, got " + std::to_string(toks.size()));
        Triple t{};
        for (int i = 0; i < 3; ++i) {
            try {
                t[i] = parseToken(*F, toks[i]);
            } catch (const std::exception& e) {
                throw ParseError(lineNo, e.what());
            }
        }
        if (isZeroTriple(t)) throw ParseError(lineNo, "zero vector is not a line");
        const std::uint32_t idx = tripleIndex(F->order(), normalize(*F, t));
        if (auto [it, fresh] = firstSeen.emplace(idx, lineNo); !fresh) {
            out.warnings.push_back("line " + std::to_string(lineNo) + ": duplicate of line " + std::to_string(it->second) +
                                   ", ignored");
            continue;
        }
        normals.push_back(t);
    }
    if (!F) throw ParseError(lineNo, "missing field header");
    if (normals.empty()) throw ParseError(lineNo, "no lines");
    out.arrangement = Arrangement::fromNormals(*F, normals);
    return out;
}

/// Canonical text: header, then the normalized normals in line-index order.
inline std::string writeArrangementFile(const Arrangement& A)
{
    std::string s = fieldHeader(A.field()) + "\n";
    for (const auto& n : A.normals()) {
        for (int i = 0; i < 3; ++i) s += (i ? " " : "") + elementToToken(A.field(), n[i]);
        s += "\n";
    }
    return s;
}

inline std::string readTextFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ParsedArrangement readArrangementFile(const std::string& path) { return parseArrangementFile(readTextFile(path)); }

/// The image of A under a field isomorphism onto another model of the same field.
inline Arrangement transportArrangement(const Arrangement& A, const FiniteField& to)
{
    const auto map = fieldIsomorphism(A.field(), to);
    std::vector<Triple> normals;
    for (const auto& n : A.normals()) normals.push_back({map[n[0]], map[n[1]], map[n[2]]});
    return Arrangement::fromNormals(to, normals);
}

struct GeneratorFile {
    FiniteField field;
    std::vector<Mat3> generators;
};

inline GeneratorFile parseGeneratorFile(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineNo = 0;
    std::optional<FiniteField> F;
    std::vector<Elem> entries;
    std::size_t blockStart = 0;
    GeneratorFile out;
    while (std::getline(in, raw)) {
        ++lineNo;
        const std::string line = detail::stripComment(raw);
        const auto toks = detail::splitTokens(line);
        if (toks.empty()) continue;
        if (!F) {
            F = parseFieldHeader(line, lineNo);
            continue;
        }
        for (const auto& t : toks) {
            if (entries.empty()) blockStart = lineNo;
            try {
                entries.push_back(parseToken(*F, t));
            } catch (const std::exception& e) {
                throw ParseError(lineNo, e.what());
            }
            if (entries.size() == 9) {
                Mat3 m{};
                for (int i = 0; i < 9; ++i) m[i / 3][i % 3] = entries[i];
                if (matDet(*F, m) == 0) throw ParseError(blockStart, "singular generator matrix");
                out.generators.push_back(m);
                entries.clear();
            }
        }
    }
    if (!F) throw ParseError(lineNo, "missing field header");
    if (!entries.empty()) throw ParseError(blockStart, "incomplete matrix: " + std::to_string(entries.size()) + " of 9 entries");
    if (out.generators.empty()) throw ParseError(lineNo, "no generator matrices");
    out.field = *F;
    return out;
}

// ---------------------------------------------------------------------------
// Appendix data set

struct AppendixEntry {
    std::size_t row = 0; // 1-based
    std::uint32_t q = 0;
    Arrangement arrangement;
};

namespace detail {

/// "\omega", "\omega^3", "\omega^{3}" -> "w", "w^3"; anything else is passed through.
inline std::string latexToken(std::string t)
{
    t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return c == '$' || c == ' ' || c == '{' || c == '}'; }),
            t.end());
    const std::string omega = "\\omega";
    if (t.rfind(omega, 0) == 0) t = "w" + t.substr(omega.size());
    return t;
}

} // namespace detail

/// Reads rows "q=<q>, {(a,b,c), ...}" from the appendix listing. Field
/// tokens use \omega for the primitive element of fieldOf(q).
inline std::vector<AppendixEntry> ingestAppendix(std::string_view text, std::optional<std::size_t> expectedRows = 29,
                                                 const std::function<FiniteField(std::uint32_t)>& fieldOf = makeFieldOfOrder)
{
    std::vector<std::size_t> starts;
    for (std::size_t pos = text.find("q="); pos != std::string_view::npos; pos = text.find("q=", pos + 2)) starts.push_back(pos);
    std::vector<AppendixEntry> out;
    for (std::size_t r = 0; r < starts.size(); ++r) {
        const std::size_t row = r + 1;
        const std::size_t end = r + 1 < starts.size() ? starts[r + 1] : text.size();
        std::string_view body = text.substr(starts[r] + 2, end - starts[r] - 2);
        std::size_t i = 0;
        while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;
        if (i == 0) throw ParseError(row, "appendix row without a field order");
        const std::uint32_t q = detail::parseUnsigned(std::string(body.substr(0, i)), row, "field order");
        FiniteField F;
        try {
            F = fieldOf(q);
        } catch (const std::exception& e) {
            throw ParseError(row, e.what());
        }
        std::vector<Triple> normals;
        for (std::size_t open = body.find('(', i); open != std::string_view::npos; open = body.find('(', open + 1)) {
            const std::size_t close = body.find(')', open);
            if (close == std::string_view::npos) throw ParseError(row, "unterminated vector");
            const std::string inner(body.substr(open + 1, close - open - 1));
            std::vector<std::string> toks;
            std::istringstream ss(inner);
            for (std::string t; std::getline(ss, t, ',');) toks.push_back(detail::latexToken(t));
            if (toks.size() != 3) throw ParseError(row, "vector '(" + inner + ")' does not have three coordinates");
            Triple t{};
            for (int k = 0; k < 3; ++k) {
                try {
                    t[k] = parseToken(F, toks[k]);
                } catch (const std::exception& e) {
                    throw ParseError(row, e.what());
                }
            }
            if (isZeroTriple(t)) throw ParseError(row, "zero vector");
            normals.push_back(t);
            open = close;
        }
        if (normals.empty()) throw ParseError(row, "appendix row has no vectors");
        const auto A = Arrangement::fromNormals(F, normals);
        if (A.size() != normals.size()) throw ParseError(row, "appendix row repeats a line");
        out.push_back({row, q, A});
    }
    if (expectedRows && out.size() != *expectedRows)
        throw std::invalid_argument("appendix has " + std::to_string(out.size()) + " rows, expected " +
                                    std::to_string(*expectedRows));
    return out;
}

/// One row of the published table of arrangements found with symmetries.
struct SimCRow {
    std::uint32_t lines = 0;
    std::uint32_t points = 0;
    std::string realizationField; // informational only
    std::uint32_t q = 0;
    std::string tVector; // "2^7 3^13 5^2"
    std::uint64_t aut = 0;
};

/// CSV with header "lines,points,K,q,tvector,aut".
inline std::vector<SimCRow> parseSimCTable(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineNo = 0;
    bool header = false;
    std::vector<SimCRow> out;
    while (std::getline(in, raw)) {
        ++lineNo;
        const std::string line = detail::stripComment(raw);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> f;
        std::istringstream ss(line);
        for (std::string t; std::getline(ss, t, ',');) {
            while (!t.empty() && (t.back() == '\r' || t.back() == ' ')) t.pop_back();
            while (!t.empty() && t.front() == ' ') t.erase(t.begin());
            f.push_back(t);
        }
        if (!header) {
            if (f != std::vector<std::string>{"lines", "points", "K", "q", "tvector", "aut"})
                throw ParseError(lineNo, "expected header lines,points,K,q,tvector,aut");
            header = true;
            continue;
        }
        if (f.size() != 6) throw ParseError(lineNo, "expected 6 fields");
        SimCRow r;
        r.lines = detail::parseUnsigned(f[0], lineNo, "line count");
        r.points = detail::parseUnsigned(f[1], lineNo, "point count");
        r.realizationField = f[2];
        r.q = detail::parseUnsigned(f[3], lineNo, "field order");
        r.tVector = f[4];
        r.aut = std::stoull(f[5]);
        out.push_back(std::move(r));
    }
    if (!header) throw ParseError(lineNo, "empty table");
    return out;
}

// ---------------------------------------------------------------------------
// Invariant reports

struct InvariantReport {
    std::uint32_t q = 0;
    std::size_t lineCount = 0;
    std::size_t pointCount = 0;
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;
    TVector tVector;
    bool essential = false;
    std::optional<CharPoly3> chi; // absent when not essential
    std::optional<std::int64_t> chambers;
    bool simplicialByPoints = false;
    bool simplicialByCount = false;
    bool simplicialByChi = false;
    bool reducible = false;
    std::optional<std::uint64_t> autOrder;

    bool simplicial() const { return simplicialByPoints; }
};

inline InvariantReport invariantReport(const Arrangement& A, bool withAut = false)
{
    InvariantReport r;
    r.q = A.q();
    r.lineCount = A.size();
    r.pointCount = A.profile().size();
    r.n0 = A.profile().n0;
    r.n1 = A.profile().n1;
    r.tVector = tVector(A);
    r.essential = isEssential(A);
    if (r.essential) {
        r.chi = charPoly(A);
        r.chambers = chamberCount(A);
        r.simplicialByPoints = arrfq::simplicialByPoints(A);
        r.simplicialByCount = arrfq::simplicialByCount(A);
        r.simplicialByChi = arrfq::simplicialByChi(A);
        if (r.simplicialByPoints != r.simplicialByCount || r.simplicialByCount != r.simplicialByChi)
            throw std::logic_error("simpliciality criteria disagree");
    }
    // A rank-3 central arrangement splits as a product exactly when it is a near pencil or not essential.
    r.reducible = !r.essential || isNearPencil(A);
    if (withAut) r.autOrder = autGroupOrder(IncidenceStructure::fromArrangement(A));
    return r;
}

inline nlohmann::ordered_json toJson(const InvariantReport& r)
{
    nlohmann::ordered_json j;
    j["q"] = r.q;
    j["lineCount"] = r.lineCount;
    j["pointCount"] = r.pointCount;
    j["n0"] = r.n0;
    j["n1"] = r.n1;
    nlohmann::ordered_json tv = nlohmann::ordered_json::object();
    for (const auto& [m, t] : r.tVector.counts) tv[std::to_string(m)] = t;
    j["tVector"] = tv;
    j["tVectorText"] = r.tVector.str();
    j["essential"] = r.essential;
    j["chiCoefficients"] = r.chi ? nlohmann::ordered_json(r.chi->c) : nlohmann::ordered_json(nullptr);
    j["chambers"] = r.chambers ? nlohmann::ordered_json(*r.chambers) : nlohmann::ordered_json(nullptr);
    j["simplicial"] = {{"byPoints", r.simplicialByPoints}, {"byCount", r.simplicialByCount}, {"byChi", r.simplicialByChi}};
    j["reducible"] = r.reducible;
    j["autOrder"] = r.autOrder ? nlohmann::ordered_json(*r.autOrder) : nlohmann::ordered_json(nullptr);
    return j;
}

inline std::string csvHeader()
{
    return "q,lines,points,n0,n1,tvector,chi,chambers,simplicial_points,simplicial_count,simplicial_chi,reducible,aut";
}

inline std::string toCsvRow(const InvariantReport& r)
{
    auto b = [](bool x) { return std::string(x ? "true" : "false"); };
    std::string chi;
    if (r.chi)
        for (std::size_t i = 0; i < 4; ++i) chi += (i ? " " : "") + std::to_string(r.chi->c[i]);
    return std::to_string(r.q) + "," + std::to_string(r.lineCount) + "," + std::to_string(r.pointCount) + "," +
           std::to_string(r.n0) + "," + std::to_string(r.n1) + "," + r.tVector.str() + "," + chi + "," +
           (r.chambers ? std::to_string(*r.chambers) : "") + "," + b(r.simplicialByPoints) + "," +
           b(r.simplicialByCount) + "," + b(r.simplicialByChi) + "," + b(r.reducible) + "," +
           (r.autOrder ? std::to_string(*r.autOrder) : "");
}

/// Sizes to counts, plus the representatives as lists of normals.
inline nlohmann::ordered_json censusJson(const SimplicialCensus& c)
{
    const auto P = ProjectivePlane::of(makeFieldOfOrder(c.q));
    nlohmann::ordered_json j;
    j["q"] = c.q;
    j["upTo"] = c.upTo == UpTo::Pgl ? "pgl" : "incidence";
    j["maxLines"] = c.maxLines;
    auto counts = [](const std::map<std::uint32_t, std::uint64_t>& t) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (const auto& [k, n] : t) o[std::to_string(k)] = n;
        return o;
    };
    j["pgl"] = counts(c.table(UpTo::Pgl));
    j["incidence"] = counts(c.table(UpTo::Incidence));
    nlohmann::ordered_json reps = nlohmann::ordered_json::object();
    for (const auto& [k, masks] : c.classes()) {
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (auto m : masks) list.push_back(writeArrangementFile(Arrangement::fromIndices(P, indicesOf(m))));
        reps[std::to_string(k)] = list;
    }
    j["representatives"] = reps;
    return j;
}

struct AppendixCheck {
    std::size_t row = 0;
    InvariantReport report;
    SimCRow expected;
    /// Empty when every compared column agrees.
    std::vector<std::string> mismatches;

    bool ok() const { return mismatches.empty(); }
};

/// Compares each ingested arrangement with the table row at the same position:
/// simpliciality, |A|, |P|, q, t-vector and |Aut(I)|.
inline std::vector<AppendixCheck> verifyAppendix(const std::vector<AppendixEntry>& entries, const std::vector<SimCRow>& rows)
{
    if (entries.size() != rows.size())
        throw std::invalid_argument("appendix has " + std::to_string(entries.size()) + " rows but the table has " +
                                    std::to_string(rows.size()));
    std::vector<AppendixCheck> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        AppendixCheck c;
        c.row = entries[i].row;
        c.expected = rows[i];
        c.report = invariantReport(entries[i].arrangement, true);
        const auto& r = c.report;
        auto cmp = [&](const char* what, auto got, auto want) {
            if (got != want)
                c.mismatches.push_back(std::string(what) + " " + std::to_string(got) + " != " + std::to_string(want));
        };
        if (!r.simplicial()) c.mismatches.push_back("not simplicial");
        cmp("|A|", r.lineCount, std::size_t{rows[i].lines});
        cmp("|P|", r.pointCount, std::size_t{rows[i].points});
        cmp("q", r.q, rows[i].q);
        cmp("|Aut|", *r.autOrder, rows[i].aut);
        if (r.tVector.str() != rows[i].tVector) c.mismatches.push_back("t-vector " + r.tVector.str() + " != " + rows[i].tVector);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace arrfq
