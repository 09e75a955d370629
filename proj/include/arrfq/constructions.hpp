#pragma once

// Explicit arrangement families over F_q and the exact check that the
// incidence of D_empty over F_q matches the real arrangement A(2q,1).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "arrfq/arrangement.hpp"
#include "arrfq/cyclotomic.hpp"
#include "arrfq/error.hpp"
#include "arrfq/search.hpp"

namespace arrfq {

/// Largest n accepted by a2n1Normals.
inline constexpr int kMaxA2n1 = 13;

/// k lines through (0,0,1) together with the transversal (0,0,1)^perp.
inline Arrangement nearPencil(const FiniteField& F, std::uint32_t k)
{
    const std::uint32_t q = F.order();
    if (k < 2 || k > q + 1)
        throw std::invalid_argument("near pencil size must lie in [2, " + std::to_string(q + 1) + "]");
    // Lines through (0,0,1) have normals (a,b,0).
    std::vector<Triple> normals{{0, 0, 1}, {0, 1, 0}};
    for (std::uint32_t a = 0; normals.size() < k + 1; ++a) normals.push_back({1, a, 0});
    return Arrangement::fromNormals(F, normals);
}

/// D_B: (0,1,a)^perp and (1,a,a^2)^perp for all a, plus (1,b,0)^perp for b in B.
inline Arrangement dB(const FiniteField& F, const std::vector<Elem>& B)
{
    const std::uint32_t q = F.order();
    std::vector<Triple> normals;
    for (Elem a = 0; a < q; ++a) normals.push_back({0, 1, a});
    for (Elem a = 0; a < q; ++a) normals.push_back({1, a, F.mul(a, a)});
    std::set<Elem> seen;
    for (Elem b : B) {
        if (b == 0) throw std::invalid_argument("dB: 0 is not in the multiplicative group");
        if (b >= q) throw std::invalid_argument("dB: element code out of range");
        if (seen.insert(b).second) normals.push_back({1, b, 0});
    }
    return Arrangement::fromNormals(F, normals);
}

/// Binary necklaces of length q-1: the number of classes of the sets D_B.
inline std::uint64_t dBClassCount(std::uint32_t q)
{
    if (q < 3 || q % 2 == 0) throw std::invalid_argument("dBClassCount needs an odd prime power");
    (void)makeFieldOfOrder(q);
    const std::uint64_t n = q - 1;
    auto phi = [](std::uint64_t m) {
        std::uint64_t r = m;
        for (auto p : detail::primeFactors(m)) r = r / p * (p - 1);
        return r;
    };
    std::uint64_t sum = 0;
    for (std::uint64_t d = 1; d <= n; ++d)
        if (n % d == 0) sum += phi(n / d) * (std::uint64_t{1} << d);
    return sum / n;
}

/// PGL classes among all 2^(q-1) sets D_B, counted with the frame canonical form.
inline std::uint64_t dBClassesByCanonicalForm(std::uint32_t q)
{
    const auto F = makeFieldOfOrder(q);
    if (q % 2 == 0) throw std::invalid_argument("dB classes are counted for odd q only");
    std::set<LineMask> forms;
    for (std::uint32_t bits = 0; bits < 1u << (q - 1); ++bits) {
        std::vector<Elem> B;
        for (std::uint32_t i = 0; i < q - 1; ++i)
            if (bits >> i & 1) B.push_back(i + 1);
        forms.insert(canonicalForm(dB(F, B)).form);
    }
    return forms.size();
}

/// Removes, for each point p in pts on H, the given q-1 lines through p other than H.
inline Arrangement maxDeletion(const FiniteField& F, const ProjLine& H, const std::vector<ProjPoint>& pts,
                               const std::vector<std::vector<ProjLine>>& removals)
{
    const auto P = ProjectivePlane::of(F);
    const std::uint32_t q = F.order();
    const std::uint32_t h = P->indexOf(H);
    if (pts.size() != q - 1) throw std::invalid_argument("maxDeletion needs exactly q-1 points on H");
    if (removals.size() != pts.size()) throw std::invalid_argument("maxDeletion needs one removal list per point");
    std::set<std::uint32_t> pointIdx, removed;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::uint32_t v = P->indexOf(pts[i]);
        if (!P->incident(v, h)) throw std::invalid_argument("maxDeletion: point is not on H");
        if (!pointIdx.insert(v).second) throw std::invalid_argument("maxDeletion: repeated point");
        if (removals[i].size() != q - 1) throw std::invalid_argument("maxDeletion: each point removes q-1 lines");
        for (const auto& l : removals[i]) {
            const std::uint32_t li = P->indexOf(l);
            if (li == h) throw std::invalid_argument("maxDeletion: H itself cannot be removed");
            if (!P->incident(v, li)) throw std::invalid_argument("maxDeletion: removed line misses its point");
            if (!removed.insert(li).second) throw std::invalid_argument("maxDeletion: line removed twice");
        }
    }
    std::vector<std::uint32_t> keep;
    for (std::uint32_t l = 0; l < P->size(); ++l)
        if (!removed.count(l)) keep.push_back(l);
    return Arrangement::fromIndices(P, keep);
}

/// A uniformly drawn valid removal pattern for maxDeletion.
struct DeletionPattern {
    ProjLine H;
    std::vector<ProjPoint> pts;
    std::vector<std::vector<ProjLine>> removals;
};

inline DeletionPattern randomDeletionPattern(const FiniteField& F, std::mt19937_64& rng)
{
    const auto P = ProjectivePlane::of(F);
    const std::uint32_t q = F.order();
    DeletionPattern d;
    const std::uint32_t h = std::uniform_int_distribution<std::uint32_t>(0, P->size() - 1)(rng);
    d.H = P->line(h);
    std::vector<std::uint32_t> onH(P->pointsOnLine(h).begin(), P->pointsOnLine(h).end());
    std::shuffle(onH.begin(), onH.end(), rng);
    onH.resize(q - 1);
    for (auto v : onH) {
        d.pts.push_back(P->point(v));
        std::vector<std::uint32_t> through;
        for (auto l : P->linesThroughPoint(v))
            if (l != h) through.push_back(l);
        std::shuffle(through.begin(), through.end(), rng);
        through.pop_back();
        std::vector<ProjLine> rem;
        for (auto l : through) rem.push_back(P->line(l));
        d.removals.push_back(std::move(rem));
    }
    return d;
}

inline Arrangement maxDeletion(const FiniteField& F, const DeletionPattern& d)
{
    return maxDeletion(F, d.H, d.pts, d.removals);
}

/// True iff A could come out of maxDeletion: 3q lines and some H in A
/// carrying q-1 points of multiplicity exactly 2.
inline bool hasMaxDeletionShape(const Arrangement& A)
{
    const std::uint32_t q = A.q();
    if (A.size() != 3 * q) return false;
    const auto mult = A.multiplicities();
    for (auto h : A.lines()) {
        std::uint32_t doubles = 0;
        for (auto v : A.plane().pointsOnLine(h))
            if (mult[v] == 2) ++doubles;
        if (doubles >= q - 1) return true;
    }
    return false;
}

namespace detail {

/// (1,-a,0)^perp, (1,0,-a)^perp, (0,1,-a)^perp for a in S, plus (0,0,1)^perp.
/// The lines are x = a y, x = a z, y = a z.
inline Arrangement coordinateFamily(const FiniteField& F, const std::vector<Elem>& S)
{
    std::vector<Triple> normals{{0, 0, 1}};
    for (Elem s : S) {
        const Elem a = F.neg(s);
        normals.push_back({1, a, 0});
        normals.push_back({1, 0, a});
        normals.push_back({0, 1, a});
    }
    std::sort(normals.begin(), normals.end());
    normals.erase(std::unique(normals.begin(), normals.end()), normals.end());
    return Arrangement::fromNormals(F, normals);
}

} // namespace detail

inline Arrangement full3q(const FiniteField& F)
{
    std::vector<Elem> all(F.order());
    std::iota(all.begin(), all.end(), 0);
    return detail::coordinateFamily(F, all);
}

/// Lines x = a y, x = a z, y = a z for a = 0 and a in the subgroup of order e of F_q^x, plus z = 0.
inline Arrangement ge13(const FiniteField& F, std::uint32_t e)
{
    const std::uint32_t q = F.order();
    if (e == 0 || (q - 1) % e != 0)
        throw std::invalid_argument("ge13: e = " + std::to_string(e) + " does not divide q-1 = " + std::to_string(q - 1));
    std::vector<Elem> S{0};
    const Elem g = F.omegaPow((q - 1) / e);
    Elem x = 1;
    for (std::uint32_t i = 0; i < e; ++i, x = F.mul(x, g)) S.push_back(x);
    return detail::coordinateFamily(F, S);
}

/// A 12-line simplicial arrangement over F_4 outside the maxDeletion family.
inline Arrangement g25f4()
{
    const auto F = makeFieldOfOrder(4);
    const Elem w = F.omegaPow(1), w2 = F.omegaPow(2);
    const std::vector<Triple> normals{{1, 1, 0}, {1, 1, w},  {0, 0, 1}, {1, 0, w},  {0, 1, w2}, {1, w2, w2},
                                      {0, 1, 0}, {1, 1, 1},  {1, w2, 0}, {1, w, 0}, {0, 1, w},  {1, w2, w}};
    return Arrangement::fromNormals(F, normals);
}

/// Normals alpha_m, alpha'_m (m = 0..n-1) of A(2n,1), exact in Q(zeta_lcm(4,2n)).
/// Order: alpha_0..alpha_{n-1}, then alpha'_0..alpha'_{n-1}.
inline std::vector<CycloTriple> a2n1Normals(int n)
{
    if (n < 2 || n > kMaxA2n1) throw CapExceeded("a2n1Normals: n must lie in [2, 13]");
    auto s = [n](long k) { return trig(n, TrigKind::Sin, k); };
    auto c = [n](long k) { return trig(n, TrigKind::Cos, k); };
    std::vector<CycloTriple> out;
    for (long m = 0; m < n; ++m)
        out.push_back({s(2 * m) * c(2 * m + 2) - c(2 * m) * s(2 * m + 2), s(2 * m + 2) - s(2 * m), c(2 * m) - c(2 * m + 2)});
    for (long m = 0; m < n; ++m) out.push_back({c(0) - c(0), s(m), -c(m)});
    return out;
}

struct PhiReport {
    bool isomorphic = false;
    std::uint64_t triplesChecked = 0;
    std::uint64_t concurrentTriples = 0;
    std::uint64_t mismatches = 0;
    std::uint32_t shift = 0;
};

/// Compares concurrency of every triple of D_empty over F_q with that of
/// the corresponding triple of A(2q,1) under (0,1,a) -> alpha'_a and
/// (1,a,a^2) -> alpha_{(a+shift) mod q}. Tangents a, b meet on the pencil
/// line a+b and sides m1, m2 meet on the axis m1+m2+1; the default shift
/// (q-1)/2 lines the two up.
inline PhiReport verifyPhi(std::uint32_t q, std::optional<std::uint32_t> shift = std::nullopt)
{
    if (q < 3 || !detail::isPrime(q)) throw std::invalid_argument("verifyPhi needs an odd prime q");
    const std::uint32_t t = shift.value_or((q - 1) / 2) % q;
    const auto F = makeField(q);
    const auto alpha = a2n1Normals(static_cast<int>(q));
    std::vector<Triple> fin;
    std::vector<CycloTriple> real;
    for (Elem a = 0; a < q; ++a) {
        fin.push_back({0, 1, a});
        real.push_back(alpha[q + a]);
    }
    for (Elem a = 0; a < q; ++a) {
        fin.push_back({1, a, F.mul(a, a)});
        real.push_back(alpha[(a + t) % q]);
    }
    PhiReport r;
    r.shift = t;
    const std::size_t n = fin.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const bool a = det3(F, fin[i], fin[j], fin[k]) == 0;
                const bool b = cycloDet3(real[i], real[j], real[k]).isZero();
                ++r.triplesChecked;
                if (a) ++r.concurrentTriples;
                if (a != b) ++r.mismatches;
            }
    r.isomorphic = r.mismatches == 0;
    return r;
}

} // namespace arrfq
