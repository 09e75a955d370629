// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "arrfq/arrfq.hpp"

using namespace arrfq;

namespace {

using Table = std::map<std::uint32_t, std::uint64_t>;

std::string dataPath(const std::string& name) { return std::string(ARRFQ_DATA_DIR) + "/" + name; }

struct Check {
    bool ok = true;
    std::string note;

    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) note = what;
        ok = ok && cond;
    }
};

// chi(q) = (q-1) n0 and n0 = q^2 - |A| q + q + f - |A| with f = chambers / 2.
std::uint64_t identitiesChecked = 0;
bool identitiesHold(const Arrangement& A)
{
    ++identitiesChecked;
    const auto& P = A.profile();
    const std::int64_t q = A.q(), n = static_cast<std::int64_t>(A.size()), n0 = static_cast<std::int64_t>(P.n0);
    if (charPoly(A)(q) != (q - 1) * n0) return false;
    return n0 == q * q - n * q + q + chamberCount(A) / 2 - n;
}

bool criteriaAgree(const Arrangement& A)
{
    const bool a = simplicialByPoints(A), b = simplicialByCount(A), c = simplicialByChi(A);
    return a == b && b == c;
}

Arrangement fromMask(std::shared_ptr<const ProjectivePlane> P, LineMask m) { return Arrangement::fromIndices(std::move(P), indicesOf(m)); }

IncidenceCertificate certOf(const Arrangement& A) { return canonicalCertificate(IncidenceStructure::fromArrangement(A)); }

Check allSubsets()
{
    Check c;
    for (std::uint32_t q : {3u, 4u}) {
        const auto P = ProjectivePlane::of(makeFieldOfOrder(q));
        std::uint64_t essential = 0, simplicial = 0;
        for (LineMask m = 1; m < LineMask{1} << P->size(); ++m) {
            const auto A = fromMask(P, m);
            if (!isEssential(A)) continue;
            ++essential;
            if (!criteriaAgree(A) || !identitiesHold(A)) {
                c.require(false, "check fails at q=" + std::to_string(q) + " mask " + std::to_string(m));
                return c;
            }
            simplicial += simplicialByCount(A);
        }
        c.note += "q=" + std::to_string(q) + ": " + std::to_string(essential) + " essential, " +
                  std::to_string(simplicial) + " simplicial; ";
    }
    return c;
}

Check polyaTotals()
{
    Check c;
    const std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> want{
        {2, {10, 9}}, {3, {30, 25}}, {4, {160, 116}}, {5, {7152, 3576}}};
    for (const auto& [q, w] : want) {
        const auto F = polyaPolynomial(q);
        mpz_class all = 0, upTo = 0;
        for (std::size_t k = 0; k < F.size(); ++k) {
            all += F[k];
            if (k <= 3 * q) upTo += F[k];
        }
        c.require(all == w.first && upTo == w.second,
                  "q=" + std::to_string(q) + " totals " + all.get_str() + "/" + upTo.get_str());
    }
    return c;
}

Check censusRows()
{
    Check c;
    const std::map<std::uint32_t, Table> rows{
        {3, {{3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}, {8, 1}, {9, 1}}},
        {4, {{3, 1}, {4, 1}, {5, 1}, {6, 2}, {7, 0}, {8, 1}, {9, 0}, {10, 3}, {11, 2}, {12, 3}}},
        {5, {{3, 1}, {4, 1}, {5, 1}, {6, 2}, {7, 2}, {8, 1}, {9, 1}, {10, 3}, {11, 5}, {12, 39}, {13, 146}, {14, 77}, {15, 6}}},
    };
    for (const auto& [q, row] : rows) {
        const auto census = enumerateSimplicial(q);
        const bool pgl = census.table(UpTo::Pgl) == row, inc = census.table(UpTo::Incidence) == row;
        c.require(pgl || inc, "q=" + std::to_string(q) + " matches neither interpretation");
        c.note += "q=" + std::to_string(q) + ": " + (pgl && inc ? "both" : pgl ? "PGL" : inc ? "incidence" : "none") + "; ";
        const auto P = ProjectivePlane::of(makeFieldOfOrder(q));
        for (const auto& [k, reps] : census.pglClasses)
            for (auto m : reps) c.require(identitiesHold(fromMask(P, m)), "identity fails in census");
    }
    return c;
}

Check appendixRows()
{
    Check c;
    const auto entries = ingestAppendix(readTextFile(dataPath("appendix.tex")));
    const auto table = parseSimCTable(readTextFile(dataPath("simC.csv")));
    std::size_t good = 0;
    for (const auto& r : verifyAppendix(entries, table)) {
        good += r.ok();
        if (!r.ok()) c.require(false, "row " + std::to_string(r.row) + ": " + r.mismatches.front());
    }
    for (const auto& e : entries) c.require(identitiesHold(e.arrangement), "identity fails on row " + std::to_string(e.row));
    std::set<IncidenceCertificate> certs;
    for (std::size_t i : {22u, 23u, 24u}) {
        c.require(entries[i].q == 9, "rows 23-25 are not over F_9");
        certs.insert(certOf(entries[i].arrangement));
    }
    c.require(certs.size() == 3, "q=9 rows 23-25 are not pairwise non-isomorphic");
    c.note = std::to_string(good) + "/" + std::to_string(entries.size()) + " rows match; " + c.note;
    return c;
}

Check dBFamily()
{
    Check c;
    const std::map<std::uint32_t, std::uint64_t> classes{{3, 3}, {5, 6}, {7, 14}};
    for (const auto& [q, want] : classes) {
        const auto F = makeFieldOfOrder(q);
        for (std::uint32_t bits = 0; bits < 1u << (q - 1); ++bits) {
            std::vector<Elem> B;
            for (std::uint32_t i = 0; i < q - 1; ++i)
                if (bits >> i & 1) B.push_back(i + 1);
            const auto A = dB(F, B);
            c.require(isSimplicial(A) && identitiesHold(A), "D_B not simplicial at q=" + std::to_string(q));
        }
        const auto byForm = dBClassesByCanonicalForm(q), byCount = dBClassCount(q);
        c.require(byForm == want && byCount == want,
                  "q=" + std::to_string(q) + " classes " + std::to_string(byForm) + "/" + std::to_string(byCount));
    }
    return c;
}

Check phiMap()
{
    Check c;
    for (std::uint32_t q : {3u, 5u, 7u}) {
        const auto r = verifyPhi(q);
        c.require(r.isomorphic, "q=" + std::to_string(q) + ": " + std::to_string(r.mismatches) + " mismatched triples");
        c.note += "q=" + std::to_string(q) + " " + std::to_string(r.triplesChecked) + " triples; ";
    }
    return c;
}

// Some found union must be isomorphic to the union of the orbits of the given normals.
bool findsUnion(const PermGroup& G, const std::vector<OrbitUnion>& found, const std::vector<Triple>& normals,
                std::size_t lines, std::vector<std::size_t> sizes)
{
    std::vector<std::uint32_t> idx;
    for (const auto& n : normals) {
        const auto& o = G.orbitOf(G.plane().indexOf(n));
        idx.insert(idx.end(), o.begin(), o.end());
    }
    const auto target = Arrangement::fromIndices(G.planePtr(), idx);
    if (target.size() != lines || !isSimplicial(target) || !identitiesHold(target)) return false;
    const auto cert = certOf(target);
    for (const auto& u : found) {
        if (u.arrangement.size() != lines || certOf(u.arrangement) != cert) continue;
        auto got = u.orbitSizes;
        std::sort(got.begin(), got.end());
        std::sort(sizes.begin(), sizes.end());
        return got == sizes;
    }
    return false;
}

Check orbitUnions()
{
    Check c;
    {
        const auto F = makeFieldOfOrder(11);
        const auto G = closure(F, parseGeneratorFile(readTextFile(dataPath("b3_q11.gens"))).generators);
        const auto found = orbitUnionSearch(G, 22);
        for (const auto& u : found) c.require(isSimplicial(u.arrangement), "non-simplicial union at q=11");
        c.require(findsUnion(G, found, {{0, 0, 1}, {1, 1, 1}, {0, 1, 1}, {0, 1, 3}}, 25, {3, 4, 6, 12}),
                  "25-line union missing at q=11");
        c.note += "q=11: " + std::to_string(found.size()) + " unions; ";
    }
    {
        const auto F = makeFieldOfOrder(17);
        const auto G = closure(F, parseGeneratorFile(readTextFile(dataPath("b3_q17.gens"))).generators);
        const auto found = orbitUnionSearch(G, 33, std::nullopt, 21);
        for (const auto& u : found) c.require(isSimplicial(u.arrangement), "non-simplicial union at q=17");
        c.require(findsUnion(G, found, {{0, 0, 1}, {0, 1, 1}, {1, 1, 3}, {1, 1, 7}}, 33, {3, 6, 12, 12}),
                  "33-line union missing at q=17");
        c.note += "q=17: " + std::to_string(found.size()) + " unions; ";
    }
    return c;
}

Check reflectionGroups()
{
    Check c;
    for (std::uint32_t e = 1; e <= 12; ++e)
        for (std::uint32_t r = 2; r <= 10; ++r)
            for (std::uint32_t d = 1; d <= e; ++d) {
                if (e % d) continue;
                const bool closed = gedrSimplicialClosedForm(e, d, r), eval = simplicialFree(gedrSpec(e, d, r));
                c.require(closed == eval, "G(" + std::to_string(e) + "," + std::to_string(d) + "," + std::to_string(r) + ")");
            }
    std::ifstream in(dataPath("exceptional_groups.txt"));
    std::set<std::string> non;
    bool g31 = false;
    for (const auto& v : exceptionalReport(parseReflectionData(in))) {
        if (!v.simplicial) non.insert(v.name);
        if (v.name == "G31") g31 = v.simplicial;
    }
    c.require(non == std::set<std::string>{"G24", "G27", "G29", "G33", "G34"}, "exceptional verdicts differ");
    c.require(g31, "G31 not simplicial");
    return c;
}

Check deletions()
{
    Check c;
    std::mt19937_64 rng(20240613);
    for (std::uint32_t q : {3u, 4u, 5u, 7u}) {
        const auto F = makeFieldOfOrder(q);
        for (int i = 0; i < 100; ++i) {
            const auto A = maxDeletion(F, randomDeletionPattern(F, rng));
            c.require(A.size() == 3 * q && isSimplicial(A) && hasMaxDeletionShape(A) && identitiesHold(A),
                      "bad deletion at q=" + std::to_string(q));
        }
    }
    const auto G = g25f4();
    c.require(G.size() == 12 && isSimplicial(G) && !hasMaxDeletionShape(G) && identitiesHold(G), "g25f4");
    return c;
}

Check identities()
{
    Check c;
    for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u}) {
        const auto F = makeFieldOfOrder(q);
        c.require(identitiesHold(full3q(F)), "full3q");
        for (std::uint32_t e = 1; e < q; ++e)
            if ((q - 1) % e == 0) c.require(identitiesHold(ge13(F, e)), "ge13");
        for (std::uint32_t k = 2; k <= q + 1; ++k) c.require(identitiesHold(nearPencil(F, k)), "near pencil");
    }
    c.note = std::to_string(identitiesChecked) + " arrangements checked";
    return c;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"criteria agree on every subset over F_3 and F_4", allSubsets},
        {"Polya totals for q = 2..5", polyaTotals},
        {"simplicial census rows for q = 3, 4, 5", censusRows},
        {"appendix arrangements reproduce the invariant table", appendixRows},
        {"D_B family simplicial with 3/6/14 classes", dBFamily},
        {"finite-to-real concurrency map for q = 3, 5, 7", phiMap},
        {"orbit unions over F_11 and F_17", orbitUnions},
        {"reflection arrangement verdicts", reflectionGroups},
        {"maximal deletions and the F_4 counterexample", deletions},
        {"chi identities on every arrangement touched", identities},
    };
    int failed = 0, n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        const auto t0 = std::chrono::steady_clock::now();
        Check c;
        try {
            c = run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.note = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !c.ok;
        std::printf("%s %2d %s (%.1f s)%s%s\n", c.ok ? "PASS" : "FAIL", n, name.c_str(), secs, c.note.empty() ? "" : ": ",
                    c.note.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
