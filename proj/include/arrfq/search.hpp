#pragma once

// Classification of line sets up to PGL_3(F_q) and up to incidence.
//
// Line sets of PG(2,q), q <= 7, are 64-bit masks over the plane's line
// indices. Two canonical forms are provided:
//
//  - canonicalUnderPGL: the lexicographically smallest image of the sorted
//    index list over the whole group (a materialized permutation table for
//    q <= 5, matrices generated on the fly for q = 7).
//  - canonicalForm: the smallest image over the projectivities that send an
//    ordered frame (four lines, no three concurrent) of least colour to the
//    standard frame. A line's colour is the sorted list of multiplicities
//    of its points inside the set, so the candidate frames of g(S) are the
//    g-images of those of S and the result depends only on the orbit. Sets
//    without a frame fall back to the table. The minimizing projectivities
//    also give the set stabilizer.
//
// enumerateSimplicial grows line sets by canonical augmentation: a child
// S + {l} is kept iff l lies in the stabilizer orbit of the child's
// canonical deletion line, and each parent is extended by one line per
// orbit of its own stabilizer. Every orbit of sets up to maxLines lines is
// visited exactly once.

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <functional>
#include <numeric>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>
#include <vector>

#include "arrfq/arrangement.hpp"
#include "arrfq/error.hpp"
#include "arrfq/group.hpp"
#include "arrfq/incidence.hpp"

namespace arrfq {

using LineMask = std::uint64_t;

/// Largest q with a materialized PGL_3 permutation table.
inline constexpr std::uint32_t kMaxTableOrder = 5;
/// Largest q whose line sets fit in a LineMask.
inline constexpr std::uint32_t kMaxMaskOrder = 7;

inline LineMask maskOf(std::span<const std::uint32_t> idx)
{
    LineMask m = 0;
    for (auto i : idx) {
        if (i >= 64) throw CapExceeded("line index does not fit a 64-bit mask");
        m |= LineMask{1} << i;
    }
    return m;
}

inline std::vector<std::uint32_t> indicesOf(LineMask m)
{
    std::vector<std::uint32_t> out;
    while (m) {
        out.push_back(static_cast<std::uint32_t>(std::countr_zero(m)));
        m &= m - 1;
    }
    return out;
}

namespace detail {

inline void requireMaskPlane(const ProjectivePlane& P)
{
    if (P.q() > kMaxMaskOrder) throw CapExceeded("PGL canonical forms are limited to q <= 7");
}

/// Calls f(M) for every canonically scaled invertible 3x3 matrix.
template <class Fn>
void forEachPgl(const FiniteField& F, Fn&& f)
{
    const std::uint32_t q = F.order();
    Mat3 m{};
    std::array<Elem, 9> e{};
    // The first nonzero entry is 1; iterate over its position.
    for (int lead = 0; lead < 9; ++lead) {
        const int free = 8 - lead;
        std::uint64_t total = 1;
        for (int i = 0; i < free; ++i) total *= q;
        for (std::uint64_t code = 0; code < total; ++code) {
            e.fill(0);
            e[lead] = 1;
            std::uint64_t c = code;
            for (int i = lead + 1; i < 9; ++i) {
                e[i] = static_cast<Elem>(c % q);
                c /= q;
            }
            for (int k = 0; k < 9; ++k) m[k / 3][k % 3] = e[k];
            if (matDet(F, m) != 0) f(m);
        }
    }
}

/// Images of every line index under the matrix acting directly on normals.
inline std::vector<std::uint32_t> normalPermutation(const ProjectivePlane& P, const Mat3& m)
{
    std::vector<std::uint32_t> perm(P.size());
    for (std::uint32_t i = 0; i < P.size(); ++i) perm[i] = P.indexOf(matVec(P.field(), m, P.coords(i)));
    return perm;
}

inline LineMask imageMask(const std::vector<std::uint32_t>& perm, LineMask s)
{
    LineMask out = 0;
    while (s) {
        out |= LineMask{1} << perm[std::countr_zero(s)];
        s &= s - 1;
    }
    return out;
}

/// Bit-reversed mask: the lexicographically smallest index list has the largest reversed mask.
inline LineMask reversedMask(LineMask s, std::uint32_t n)
{
    LineMask r = 0;
    while (s) {
        r |= LineMask{1} << (n - 1 - std::countr_zero(s));
        s &= s - 1;
    }
    return r;
}

} // namespace detail

/// All of PGL_3(F_q) as permutations of line indices, q <= 5.
class PglTable {
public:
    static const PglTable& of(const std::shared_ptr<const ProjectivePlane>& P)
    {
        if (P->q() > kMaxTableOrder) throw CapExceeded("PGL permutation tables are limited to q <= 5");
        static std::mutex mu;
        static std::map<const ProjectivePlane*, std::unique_ptr<PglTable>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[P.get()];
        if (!slot) slot.reset(new PglTable(P));
        return *slot;
    }

    std::size_t order() const { return perms_.size() / n_; }
    std::uint32_t degree() const { return n_; }
    /// Image of line i under element g.
    std::uint8_t image(std::size_t g, std::uint32_t i) const { return perms_[g * n_ + i]; }
    std::vector<std::uint32_t> permutation(std::size_t g) const
    {
        return {perms_.begin() + g * n_, perms_.begin() + (g + 1) * n_};
    }
    LineMask imageMask(std::size_t g, LineMask s) const
    {
        const std::uint8_t* p = perms_.data() + g * n_;
        LineMask out = 0;
        while (s) {
            out |= LineMask{1} << p[std::countr_zero(s)];
            s &= s - 1;
        }
        return out;
    }

private:
    explicit PglTable(const std::shared_ptr<const ProjectivePlane>& P) : n_(P->size())
    {
        detail::forEachPgl(P->field(), [&](const Mat3& m) {
            for (auto x : detail::normalPermutation(*P, m)) perms_.push_back(static_cast<std::uint8_t>(x));
        });
    }

    std::uint32_t n_;
    std::vector<std::uint8_t> perms_;
};

/// Lexicographically smallest image of the line-index set of A under PGL_3(F_q).
inline std::vector<std::uint32_t> canonicalUnderPGL(const Arrangement& A)
{
    const auto& P = A.plane();
    detail::requireMaskPlane(P);
    const LineMask s = maskOf(A.lines());
    const std::uint32_t n = P.size();
    LineMask best = 0;
    if (P.q() <= kMaxTableOrder) {
        const auto& T = PglTable::of(A.planePtr());
        for (std::size_t g = 0; g < T.order(); ++g) best = std::max(best, detail::reversedMask(T.imageMask(g, s), n));
    } else {
        const auto lines = A.lines();
        std::vector<Triple> normals;
        for (auto l : lines) normals.push_back(P.coords(l));
        detail::forEachPgl(P.field(), [&](const Mat3& m) {
            LineMask img = 0;
            for (const auto& t : normals) img |= LineMask{1} << (n - 1 - P.indexOf(matVec(P.field(), m, t)));
            best = std::max(best, img);
        });
    }
    return indicesOf(detail::reversedMask(best, n));
}

/// Canonical form of a line set together with its set stabilizer.
struct CanonResult {
    LineMask form = 0;
    /// A line permutation sending the input set onto form.
    std::vector<std::uint32_t> toCanon;
    /// The set stabilizer of the input, as line permutations (the whole group, identity included).
    std::vector<std::vector<std::uint32_t>> stabilizer;
    bool framed = false;
};

namespace detail {

/// Colour of each line of s: rank of the sorted multiplicities of its points within s.
inline std::vector<std::uint32_t> lineColours(const ProjectivePlane& P, const std::vector<std::uint32_t>& lines)
{
    std::vector<std::uint32_t> mult(P.size(), 0);
    for (auto l : lines)
        for (auto v : P.pointsOnLine(l)) ++mult[v];
    std::vector<std::vector<std::uint32_t>> keys;
    for (auto l : lines) {
        std::vector<std::uint32_t> k;
        for (auto v : P.pointsOnLine(l)) k.push_back(mult[v]);
        std::sort(k.begin(), k.end());
        keys.push_back(std::move(k));
    }
    std::vector<std::vector<std::uint32_t>> distinct = keys;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::uint32_t> col;
    for (const auto& k : keys)
        col.push_back(static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), k) - distinct.begin()));
    return col;
}

/// The matrix acting on normals that sends n1, n2, n3, n4 to e1, e2, e3, (1,1,1).
inline Mat3 frameMatrix(const FiniteField& F, const Triple& n1, const Triple& n2, const Triple& n3, const Triple& n4)
{
    const Mat3 B{{{n1[0], n2[0], n3[0]}, {n1[1], n2[1], n3[1]}, {n1[2], n2[2], n3[2]}}};
    const Mat3 Bi = matInv(F, B);
    const Triple lam = matVec(F, Bi, n4);
    Mat3 N = Bi;
    for (int i = 0; i < 3; ++i) {
        const Elem s = F.inv(lam[i]);
        for (int j = 0; j < 3; ++j) N[i][j] = F.mul(N[i][j], s);
    }
    return N;
}

inline std::vector<std::uint32_t> inversePermutation(const std::vector<std::uint32_t>& p)
{
    std::vector<std::uint32_t> inv(p.size());
    for (std::uint32_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
    return inv;
}

inline std::vector<std::uint32_t> compose(const std::vector<std::uint32_t>& outer, const std::vector<std::uint32_t>& inner)
{
    std::vector<std::uint32_t> r(inner.size());
    for (std::uint32_t i = 0; i < inner.size(); ++i) r[i] = outer[inner[i]];
    return r;
}

} // namespace detail

/// Canonical form under PGL_3(F_q) plus stabilizer; see the file comment.
inline CanonResult canonicalForm(const std::shared_ptr<const ProjectivePlane>& P, LineMask s)
{
    detail::requireMaskPlane(*P);
    const FiniteField& F = P->field();
    const auto lines = indicesOf(s);
    const auto colour = detail::lineColours(*P, lines);
    const std::size_t n = lines.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return colour[a] < colour[b]; });

    std::optional<std::array<std::uint32_t, 4>> bestColours;
    LineMask best = ~LineMask{0};
    std::vector<Mat3> minimizers;
    auto colourPrefixBeaten = [&](std::size_t depth, const std::array<std::uint32_t, 4>& c) {
        if (!bestColours) return false;
        for (std::size_t i = 0; i < depth; ++i) {
            if (c[i] < (*bestColours)[i]) return false;
            if (c[i] > (*bestColours)[i]) return true;
        }
        return false;
    };
    std::array<std::uint32_t, 4> cs{};
    for (std::size_t ia = 0; ia < n; ++ia) {
        const auto a = order[ia];
        cs[0] = colour[a];
        if (colourPrefixBeaten(1, cs)) break;
        for (std::size_t ib = 0; ib < n; ++ib) {
            const auto b = order[ib];
            if (b == a) continue;
            cs[1] = colour[b];
            if (colourPrefixBeaten(2, cs)) break;
            for (std::size_t ic = 0; ic < n; ++ic) {
                const auto c = order[ic];
                if (c == a || c == b) continue;
                cs[2] = colour[c];
                if (colourPrefixBeaten(3, cs)) break;
                if (P->concurrent(lines[a], lines[b], lines[c])) continue;
                for (std::size_t id = 0; id < n; ++id) {
                    const auto d = order[id];
                    if (d == a || d == b || d == c) continue;
                    cs[3] = colour[d];
                    if (colourPrefixBeaten(4, cs)) break;
                    if (P->concurrent(lines[a], lines[b], lines[d]) || P->concurrent(lines[a], lines[c], lines[d]) ||
                        P->concurrent(lines[b], lines[c], lines[d]))
                        continue;
                    if (!bestColours || cs < *bestColours) {
                        bestColours = cs;
                        best = ~LineMask{0};
                        minimizers.clear();
                    }
                    const Mat3 N = detail::frameMatrix(F, P->coords(lines[a]), P->coords(lines[b]),
                                                       P->coords(lines[c]), P->coords(lines[d]));
                    LineMask img = 0;
                    for (auto l : lines) img |= LineMask{1} << P->indexOf(matVec(F, N, P->coords(l)));
                    if (img < best) {
                        best = img;
                        minimizers.clear();
                    }
                    if (img == best) minimizers.push_back(N);
                }
            }
        }
    }

    CanonResult r;
    if (bestColours) {
        r.framed = true;
        r.form = best;
        r.toCanon = detail::normalPermutation(*P, minimizers.front());
        const auto inv0 = detail::inversePermutation(r.toCanon);
        for (const auto& N : minimizers) r.stabilizer.push_back(detail::compose(inv0, detail::normalPermutation(*P, N)));
        return r;
    }
    const auto& T = PglTable::of(P);
    const std::uint32_t deg = P->size();
    LineMask bestRev = 0;
    std::vector<std::size_t> mins;
    for (std::size_t g = 0; g < T.order(); ++g) {
        const LineMask rev = detail::reversedMask(T.imageMask(g, s), deg);
        if (rev > bestRev) {
            bestRev = rev;
            mins.clear();
        }
        if (rev == bestRev) mins.push_back(g);
    }
    r.form = detail::reversedMask(bestRev, deg);
    r.toCanon = T.permutation(mins.front());
    const auto inv0 = detail::inversePermutation(r.toCanon);
    for (auto g : mins) r.stabilizer.push_back(detail::compose(inv0, T.permutation(g)));
    return r;
}

inline CanonResult canonicalForm(const Arrangement& A) { return canonicalForm(A.planePtr(), maskOf(A.lines())); }

enum class UpTo { Pgl, Incidence };

/// Census of simplicial arrangements by number of lines.
struct SimplicialCensus {
    std::uint32_t q = 0;
    UpTo upTo = UpTo::Pgl;
    std::uint32_t maxLines = 0;
    /// PGL classes per size, with one canonical representative each.
    std::map<std::uint32_t, std::vector<LineMask>> pglClasses;
    /// Incidence classes per size: representatives (a PGL canonical mask) of each class.
    std::map<std::uint32_t, std::vector<LineMask>> incidenceClasses;
    /// Number of PGL orbits of all line sets visited, per size (simplicial or not).
    std::map<std::uint32_t, std::uint64_t> orbitsVisited;

    const std::map<std::uint32_t, std::vector<LineMask>>& classes() const
    {
        return upTo == UpTo::Pgl ? pglClasses : incidenceClasses;
    }
    std::map<std::uint32_t, std::uint64_t> table(UpTo which) const
    {
        std::map<std::uint32_t, std::uint64_t> t;
        for (std::uint32_t k = 3; k <= maxLines; ++k) t[k] = 0;
        for (const auto& [k, v] : which == UpTo::Pgl ? pglClasses : incidenceClasses) t[k] = v.size();
        return t;
    }
    std::map<std::uint32_t, std::uint64_t> table() const { return table(upTo); }
};

namespace detail {

struct AugmentNode {
    LineMask set = 0;
    std::vector<std::vector<std::uint32_t>> stabilizer;
};

/// Children of one parent by canonical augmentation.
inline std::vector<AugmentNode> augment(const std::shared_ptr<const ProjectivePlane>& P, const AugmentNode& parent)
{
    const std::uint32_t n = P->size();
    std::vector<char> seen(n, 0);
    std::vector<AugmentNode> out;
    for (std::uint32_t l = 0; l < n; ++l) {
        if ((parent.set >> l & 1) || seen[l]) continue;
        for (const auto& g : parent.stabilizer) seen[g[l]] = 1;
        const LineMask child = parent.set | LineMask{1} << l;
        CanonResult c = canonicalForm(P, child);
        // Canonical deletion: the largest line of the canonical form, pulled back.
        const std::uint32_t top = 63 - static_cast<std::uint32_t>(std::countl_zero(c.form));
        const auto back = inversePermutation(c.toCanon);
        const std::uint32_t d = back[top];
        bool accept = false;
        for (const auto& g : c.stabilizer)
            if (g[d] == l) {
                accept = true;
                break;
            }
        if (!accept) continue;
        // Continue from the canonical representative; conjugate the stabilizer onto it.
        AugmentNode node;
        node.set = c.form;
        for (const auto& g : c.stabilizer) node.stabilizer.push_back(compose(c.toCanon, compose(g, back)));
        out.push_back(std::move(node));
    }
    return out;
}

} // namespace detail

/// Exhaustive census of essential simplicial arrangements with at most
/// maxLines lines, up to PGL_3(F_q), merged into incidence classes as well.
inline SimplicialCensus enumerateSimplicial(std::uint32_t q, std::optional<std::uint32_t> maxLines = std::nullopt,
                                            UpTo upTo = UpTo::Pgl, unsigned jobs = 1)
{
    if (q > kMaxTableOrder) throw CapExceeded("exhaustive census is limited to q <= 5");
    const auto P = ProjectivePlane::of(makeFieldOfOrder(q));
    SimplicialCensus census;
    census.q = q;
    census.upTo = upTo;
    census.maxLines = std::min(maxLines.value_or(3 * q), P->size());
    if (jobs == 0) jobs = 1;

    // Level 1: every single line is equivalent to line 0.
    std::vector<detail::AugmentNode> level;
    {
        const CanonResult c = canonicalForm(P, LineMask{1});
        level.push_back({c.form, c.stabilizer});
    }
    census.orbitsVisited[1] = 1;
    for (std::uint32_t k = 2; k <= census.maxLines; ++k) {
        std::vector<std::vector<detail::AugmentNode>> children(level.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= level.size()) break;
                children[i] = detail::augment(P, level[i]);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        std::vector<detail::AugmentNode> nextLevel;
        for (auto& c : children)
            for (auto& node : c) nextLevel.push_back(std::move(node));
        std::sort(nextLevel.begin(), nextLevel.end(), [](const auto& a, const auto& b) { return a.set < b.set; });
        census.orbitsVisited[k] = nextLevel.size();
        for (const auto& node : nextLevel) {
            const auto A = Arrangement::fromIndices(P, indicesOf(node.set));
            if (isEssential(A) && simplicialByCount(A)) census.pglClasses[k].push_back(node.set);
        }
        level = std::move(nextLevel);
    }

    for (const auto& [k, reps] : census.pglClasses) {
        std::set<IncidenceCertificate> certs;
        for (auto m : reps) {
            const auto A = Arrangement::fromIndices(P, indicesOf(m));
            if (certs.insert(canonicalCertificate(IncidenceStructure::fromArrangement(A))).second)
                census.incidenceClasses[k].push_back(m);
        }
    }
    return census;
}

/// One simplicial union of orbits found by orbitUnionSearch.
struct OrbitUnion {
    Arrangement arrangement;
    std::vector<std::size_t> orbitIndices; // into PermGroup::orbits()
    std::vector<std::size_t> orbitSizes;
};

/// Every simplicial union of line orbits of G with total size in
/// [minLines, maxLines], one per incidence class. Only orbits of size at
/// most maxLines take part; more than maxOrbits of them is refused.
inline std::vector<OrbitUnion> orbitUnionSearch(const PermGroup& G, std::optional<std::uint32_t> minLines = std::nullopt,
                                                std::optional<std::uint32_t> maxLines = std::nullopt,
                                                std::size_t maxOrbits = 20)
{
    const auto P = G.planePtr();
    const std::uint32_t q = P->q();
    const std::uint32_t lo = minLines.value_or(2 * q), hi = maxLines.value_or(3 * q);
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < G.orbits().size(); ++i)
        if (G.orbits()[i].size() <= hi) eligible.push_back(i);
    if (eligible.size() > maxOrbits)
        throw CapExceeded("orbit-union search refused: " + std::to_string(eligible.size()) +
                          " eligible orbits exceed the limit of " + std::to_string(maxOrbits));

    const std::uint32_t n = P->size();
    std::vector<std::uint32_t> mult(n, 0);
    std::uint64_t n0 = n, n1 = 0;
    auto addLine = [&](std::uint32_t l, int sign) {
        for (auto v : P->pointsOnLine(l)) {
            const std::uint32_t before = mult[v];
            const std::uint32_t after = sign > 0 ? before + 1 : before - 1;
            if (before == 0) --n0;
            if (before == 1) --n1;
            if (after == 0) ++n0;
            if (after == 1) ++n1;
            mult[v] = after;
        }
    };

    std::vector<OrbitUnion> found;
    std::set<IncidenceCertificate> certs;
    std::vector<std::size_t> chosen;
    std::uint32_t size = 0;
    std::function<void(std::size_t)> dfs = [&](std::size_t from) {
        if (size >= lo && size <= hi) {
            const std::uint64_t num = 3 * n0 + 2 * n1;
            if (num % (q + 1) == 0 && static_cast<std::int64_t>(size) == static_cast<std::int64_t>(3 * q) -
                                                                              static_cast<std::int64_t>(num / (q + 1))) {
                std::vector<std::uint32_t> idx;
                for (auto o : chosen) idx.insert(idx.end(), G.orbits()[o].begin(), G.orbits()[o].end());
                auto A = Arrangement::fromIndices(P, idx);
                if (isEssential(A) && simplicialByCount(A)) {
                    if (certs.insert(canonicalCertificate(IncidenceStructure::fromArrangement(A))).second) {
                        OrbitUnion u{A, chosen, {}};
                        for (auto o : chosen) u.orbitSizes.push_back(G.orbits()[o].size());
                        found.push_back(std::move(u));
                    }
                }
            }
        }
        for (std::size_t i = from; i < eligible.size(); ++i) {
            const auto& orb = G.orbits()[eligible[i]];
            if (size + orb.size() > hi) continue;
            for (auto l : orb) addLine(l, +1);
            size += static_cast<std::uint32_t>(orb.size());
            chosen.push_back(eligible[i]);
            dfs(i + 1);
            chosen.pop_back();
            size -= static_cast<std::uint32_t>(orb.size());
            for (auto l : orb) addLine(l, -1);
        }
    };
    dfs(0);
    return found;
}

} // namespace arrfq
