#pragma once

// Abstract line/point incidence structures and their isomorphisms.
//
// An IncidenceStructure is the bipartite graph between the lines of an
// arrangement and its intersection points (points on at least two lines).
// It carries no field, so structures from different fields, or from exact
// cyclotomic normals, can be compared directly.
//
// All searches share one engine: colourings of the vertex set (lines first,
// then points) refined to equitable partitions, then individualization of a
// vertex in the first non-singleton cell. New colours are ranks of the keys
// (old colour, sorted neighbour colours), so the procedure commutes with
// relabelling and two structures can be refined side by side.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "arrfq/arrangement.hpp"

namespace arrfq {

class IncidenceStructure {
public:
    IncidenceStructure() = default;

    /// Points given by the sets of lines through them. Points on fewer than
    /// two lines are dropped and duplicate point sets are merged.
    static IncidenceStructure fromPointSets(std::uint32_t nLines, std::vector<std::vector<std::uint32_t>> points)
    {
        IncidenceStructure I;
        I.nLines_ = nLines;
        std::set<std::vector<std::uint32_t>> seen;
        for (auto& p : points) {
            std::sort(p.begin(), p.end());
            p.erase(std::unique(p.begin(), p.end()), p.end());
            if (p.size() < 2) continue;
            if (p.back() >= nLines) throw std::out_of_range("point refers to a missing line");
            if (seen.insert(p).second) I.pointLines_.push_back(p);
        }
        std::sort(I.pointLines_.begin(), I.pointLines_.end());
        I.linePoints_.assign(nLines, {});
        for (std::uint32_t v = 0; v < I.pointLines_.size(); ++v)
            for (auto l : I.pointLines_[v]) I.linePoints_[l].push_back(v);
        return I;
    }

    /// Lines in the arrangement's order, points of P in plane order.
    static IncidenceStructure fromArrangement(const Arrangement& A)
    {
        const auto lines = A.lines();
        std::vector<std::vector<std::uint32_t>> pts;
        for (const auto& [v, m] : A.profile().points) {
            std::vector<std::uint32_t> through;
            for (auto l : A.plane().linesThroughPoint(v)) {
                auto it = std::lower_bound(lines.begin(), lines.end(), l);
                if (it != lines.end() && *it == l) through.push_back(static_cast<std::uint32_t>(it - lines.begin()));
            }
            pts.push_back(std::move(through));
        }
        return fromPointSets(static_cast<std::uint32_t>(lines.size()), std::move(pts));
    }

    /// Points recovered from a concurrency oracle on triples of distinct
    /// lines: the point through lines i and j is every k concurrent with them.
    static IncidenceStructure fromConcurrency(std::uint32_t nLines,
                                              const std::function<bool(std::uint32_t, std::uint32_t, std::uint32_t)>& concurrent)
    {
        std::vector<std::vector<std::uint32_t>> pts;
        std::vector<std::vector<char>> covered(nLines, std::vector<char>(nLines, 0));
        for (std::uint32_t i = 0; i < nLines; ++i)
            for (std::uint32_t j = i + 1; j < nLines; ++j) {
                if (covered[i][j]) continue;
                std::vector<std::uint32_t> p{i, j};
                for (std::uint32_t k = 0; k < nLines; ++k)
                    if (k != i && k != j && concurrent(i, j, k)) p.push_back(k);
                std::sort(p.begin(), p.end());
                for (auto a : p)
                    for (auto b : p) covered[a][b] = 1;
                pts.push_back(std::move(p));
            }
        return fromPointSets(nLines, std::move(pts));
    }

    std::uint32_t nLines() const { return nLines_; }
    std::uint32_t nPoints() const { return static_cast<std::uint32_t>(pointLines_.size()); }
    const std::vector<std::vector<std::uint32_t>>& pointLines() const { return pointLines_; }
    const std::vector<std::vector<std::uint32_t>>& linePoints() const { return linePoints_; }

    /// Multiplicity histogram of the points, as in the t-vector.
    std::map<std::uint32_t, std::uint64_t> multiplicityCounts() const
    {
        std::map<std::uint32_t, std::uint64_t> t;
        for (const auto& p : pointLines_) ++t[static_cast<std::uint32_t>(p.size())];
        return t;
    }

    /// Same structure with line l renamed to linePerm[l].
    IncidenceStructure relabelLines(const std::vector<std::uint32_t>& linePerm) const
    {
        auto pts = pointLines_;
        for (auto& p : pts)
            for (auto& l : p) l = linePerm.at(l);
        return fromPointSets(nLines_, std::move(pts));
    }

    /// True iff the line bijection @p f maps every point of this structure onto a point of @p other.
    bool isIsomorphismTo(const IncidenceStructure& other, const std::vector<std::uint32_t>& f) const
    {
        if (nLines_ != other.nLines_ || nPoints() != other.nPoints() || f.size() != nLines_) return false;
        std::set<std::vector<std::uint32_t>> target(other.pointLines_.begin(), other.pointLines_.end());
        for (const auto& p : pointLines_) {
            std::vector<std::uint32_t> img;
            for (auto l : p) img.push_back(f[l]);
            std::sort(img.begin(), img.end());
            if (!target.count(img)) return false;
        }
        return true;
    }

    friend bool operator==(const IncidenceStructure&, const IncidenceStructure&) = default;

private:
    std::uint32_t nLines_ = 0;
    std::vector<std::vector<std::uint32_t>> pointLines_;
    std::vector<std::vector<std::uint32_t>> linePoints_;
};

/// Canonical form: the incidence lists after canonical relabelling.
using IncidenceCertificate = std::vector<std::uint32_t>;

namespace detail {

/// Bipartite graph view: vertices 0..L-1 are lines, L.. are points.
struct BiGraph {
    std::uint32_t L = 0;
    std::vector<std::vector<std::uint32_t>> adj;

    explicit BiGraph(const IncidenceStructure& I) : L(I.nLines())
    {
        adj.resize(I.nLines() + I.nPoints());
        for (std::uint32_t v = 0; v < I.nPoints(); ++v)
            for (auto l : I.pointLines()[v]) {
                adj[l].push_back(L + v);
                adj[L + v].push_back(l);
            }
    }
    std::uint32_t size() const { return static_cast<std::uint32_t>(adj.size()); }
};

using Colouring = std::vector<std::uint32_t>;
using Trace = std::vector<std::uint32_t>;

inline std::uint32_t cellCount(const Colouring& c)
{
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

/// Replaces colours by the ranks of the given keys.
inline std::uint32_t rerank(const std::vector<std::vector<std::uint32_t>>& keys, Colouring& c, Trace* trace)
{
    std::vector<std::uint32_t> order(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
    std::uint32_t rank = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const bool fresh = i == 0 || keys[order[i]] != keys[order[i - 1]];
        if (fresh) {
            if (i > 0) ++rank;
            if (trace) {
                trace->push_back(UINT32_MAX);
                trace->insert(trace->end(), keys[order[i]].begin(), keys[order[i]].end());
            }
        }
        if (trace) trace->push_back(UINT32_MAX - 1);
        c[order[i]] = rank;
    }
    return order.empty() ? 0 : rank + 1;
}

/// Refines @p c to the coarsest equitable partition below it.
inline void refine(const BiGraph& g, Colouring& c, Trace* trace)
{
    std::uint32_t cells = cellCount(c);
    std::vector<std::vector<std::uint32_t>> keys(g.size());
    for (;;) {
        for (std::uint32_t v = 0; v < g.size(); ++v) {
            auto& k = keys[v];
            k.clear();
            k.push_back(c[v]);
            for (auto u : g.adj[v]) k.push_back(c[u]);
            std::sort(k.begin() + 1, k.end());
        }
        const std::uint32_t now = rerank(keys, c, trace);
        if (now == cells) break;
        cells = now;
    }
}

inline Colouring initialColouring(const BiGraph& g)
{
    Colouring c(g.size(), 0);
    for (std::uint32_t v = g.L; v < g.size(); ++v) c[v] = 1;
    if (g.L == 0) std::fill(c.begin(), c.end(), 0);
    return c;
}

/// Splits v off its cell, placing it first.
inline Colouring individualize(const Colouring& c, std::uint32_t v)
{
    std::vector<std::vector<std::uint32_t>> keys(c.size());
    for (std::uint32_t w = 0; w < c.size(); ++w) keys[w] = {c[w], (c[w] == c[v] && w != v) ? 1u : 0u};
    Colouring out(c.size());
    rerank(keys, out, nullptr);
    return out;
}

/// Smallest colour with at least two vertices, if any.
/// Largest non-singleton cell of lines (lowest colour on ties); point cells only once the lines are discrete.
inline std::optional<std::uint32_t> targetCell(const BiGraph& g, const Colouring& c)
{
    std::vector<std::uint32_t> size(cellCount(c), 0);
    for (auto x : c) ++size[x];
    std::optional<std::uint32_t> best;
    for (std::uint32_t v = 0; v < g.L; ++v) {
        const std::uint32_t k = c[v];
        if (size[k] > 1 && (!best || size[k] > size[*best] || (size[k] == size[*best] && k < *best))) best = k;
    }
    if (best) return best;
    for (std::uint32_t i = 0; i < size.size(); ++i)
        if (size[i] > 1) return i;
    return std::nullopt;
}

inline std::vector<std::uint32_t> cellMembers(const Colouring& c, std::uint32_t colour)
{
    std::vector<std::uint32_t> m;
    for (std::uint32_t v = 0; v < c.size(); ++v)
        if (c[v] == colour) m.push_back(v);
    return m;
}

inline bool sameEdges(const BiGraph& g1, const BiGraph& g2, const std::vector<std::uint32_t>& f)
{
    for (std::uint32_t v = 0; v < g1.size(); ++v) {
        std::vector<std::uint32_t> a;
        for (auto u : g1.adj[v]) a.push_back(f[u]);
        std::sort(a.begin(), a.end());
        std::vector<std::uint32_t> b = g2.adj[f[v]];
        std::sort(b.begin(), b.end());
        if (a != b) return false;
    }
    return true;
}

/// Vertex isomorphism g1 -> g2 respecting the given colourings.
inline std::optional<std::vector<std::uint32_t>> findIso(const BiGraph& g1, Colouring c1, const BiGraph& g2, Colouring c2)
{
    Trace t1, t2;
    refine(g1, c1, &t1);
    refine(g2, c2, &t2);
    if (t1 != t2 || c1.size() != c2.size()) return std::nullopt;
    const auto cell = targetCell(g1, c1);
    if (!cell) {
        std::vector<std::uint32_t> byColour(c2.size());
        for (std::uint32_t w = 0; w < c2.size(); ++w) byColour[c2[w]] = w;
        std::vector<std::uint32_t> f(c1.size());
        for (std::uint32_t v = 0; v < c1.size(); ++v) f[v] = byColour[c1[v]];
        if (sameEdges(g1, g2, f)) return f;
        return std::nullopt;
    }
    const std::uint32_t v = cellMembers(c1, *cell).front();
    const Colouring n1 = individualize(c1, v);
    for (auto w : cellMembers(c2, *cell))
        if (auto f = findIso(g1, n1, g2, individualize(c2, w))) return f;
    return std::nullopt;
}

inline IncidenceCertificate certificateOf(const BiGraph& g, const Colouring& leaf)
{
    // In a discrete colouring of this graph lines take positions 0..L-1.
    std::vector<std::uint32_t> lineAt(g.L);
    for (std::uint32_t v = 0; v < g.L; ++v) lineAt[leaf[v]] = v;
    IncidenceCertificate cert{g.L, g.size() - g.L};
    for (std::uint32_t pos = 0; pos < g.L; ++pos) {
        std::vector<std::uint32_t> pts;
        for (auto u : g.adj[lineAt[pos]]) pts.push_back(leaf[u] - g.L);
        std::sort(pts.begin(), pts.end());
        cert.push_back(static_cast<std::uint32_t>(pts.size()));
        cert.insert(cert.end(), pts.begin(), pts.end());
    }
    return cert;
}

/// Orbits of @p cell under the permutations in @p gens; returns orbit ids per member.
inline std::vector<std::uint32_t> orbitIds(const std::vector<std::uint32_t>& cell,
                                           const std::vector<const std::vector<std::uint32_t>*>& gens, std::uint32_t n)
{
    std::vector<std::uint32_t> id(n, UINT32_MAX);
    std::uint32_t next = 0;
    for (auto s : cell) {
        if (id[s] != UINT32_MAX) continue;
        std::vector<std::uint32_t> stack{s};
        id[s] = next;
        while (!stack.empty()) {
            const auto x = stack.back();
            stack.pop_back();
            for (const auto* g : gens) {
                const auto y = (*g)[x];
                if (id[y] == UINT32_MAX) {
                    id[y] = next;
                    stack.push_back(y);
                }
            }
        }
        ++next;
    }
    std::vector<std::uint32_t> out;
    for (auto s : cell) out.push_back(id[s]);
    return out;
}

/// Individualization-refinement search for the smallest leaf certificate,
/// pruned by automorphisms found along the way.
class CanonSearch {
public:
    explicit CanonSearch(const BiGraph& g) : g_(g) {}

    void run()
    {
        Colouring c = initialColouring(g_);
        std::vector<std::uint32_t> path;
        std::vector<std::uint64_t> inv;
        dfs(c, path, inv);
    }

    const IncidenceCertificate& best() const { return bestCert_; }
    const Colouring& bestLeaf() const { return bestLeaf_; }
    const std::vector<std::vector<std::uint32_t>>& automorphisms() const { return autos_; }

private:
    // Leaves are ranked by (node invariants along the path, certificate).
    void leaf(const Colouring& c, const std::vector<std::uint32_t>& path, const std::vector<std::uint64_t>& inv)
    {
        IncidenceCertificate cert = certificateOf(g_, c);
        if (firstLeaf_.empty()) {
            firstLeaf_ = bestLeaf_ = c;
            firstCert_ = bestCert_ = cert;
            firstInv_ = bestInv_ = inv;
            firstPath_ = bestPath_ = path;
            return;
        }
        if (inv == firstInv_ && cert == firstCert_) {
            recordAutomorphism(firstLeaf_, c);
            jumpTo(path, firstPath_);
            return;
        }
        const int cmp = inv < bestInv_ ? -1 : inv > bestInv_ ? 1 : cert < bestCert_ ? -1 : cert == bestCert_ ? 0 : 1;
        if (cmp == 0) {
            recordAutomorphism(bestLeaf_, c);
            jumpTo(path, bestPath_);
            return;
        }
        if (cmp < 0) {
            bestCert_ = std::move(cert);
            bestLeaf_ = c;
            bestInv_ = inv;
            bestPath_ = path;
        }
    }

    // An automorphism between two leaves fixes their common prefix, so the
    // rest of the current subtree below that prefix is an image of explored ground.
    void jumpTo(const std::vector<std::uint32_t>& path, const std::vector<std::uint32_t>& other)
    {
        std::size_t common = 0;
        while (common < path.size() && common < other.size() && path[common] == other[common]) ++common;
        jump_ = static_cast<int>(common);
    }

    void recordAutomorphism(const Colouring& a, const Colouring& b)
    {
        std::vector<std::uint32_t> vertexAt(a.size());
        for (std::uint32_t v = 0; v < a.size(); ++v) vertexAt[a[v]] = v;
        std::vector<std::uint32_t> gamma(a.size());
        for (std::uint32_t v = 0; v < b.size(); ++v) gamma[v] = vertexAt[b[v]];
        autos_.push_back(std::move(gamma));
    }

    static bool isPrefixOf(const std::vector<std::uint64_t>& p, const std::vector<std::uint64_t>& full)
    {
        return p.size() <= full.size() && std::equal(p.begin(), p.end(), full.begin());
    }

    // True when no leaf below can tie the first leaf or beat the best one.
    bool hopeless(const std::vector<std::uint64_t>& inv) const
    {
        if (firstLeaf_.empty() || isPrefixOf(inv, firstInv_)) return false;
        const std::size_t n = std::min(inv.size(), bestInv_.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (inv[i] < bestInv_[i]) return false;
            if (inv[i] > bestInv_[i]) return true;
        }
        return false;
    }

    static std::uint64_t hashTrace(const Trace& t)
    {
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : t) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return h;
    }

    void dfs(Colouring c, std::vector<std::uint32_t>& path, std::vector<std::uint64_t>& inv)
    {
        Trace trace;
        refine(g_, c, &trace);
        inv.push_back(hashTrace(trace));
        if (hopeless(inv)) {
            inv.pop_back();
            return;
        }
        const auto cell = targetCell(g_, c);
        if (!cell) {
            leaf(c, path, inv);
            inv.pop_back();
            return;
        }
        const auto members = cellMembers(c, *cell);
        std::vector<std::uint32_t> explored;
        for (auto v : members) {
            if (!explored.empty() && inOrbitOfExplored(v, explored, path)) continue;
            path.push_back(v);
            dfs(individualize(c, v), path, inv);
            path.pop_back();
            explored.push_back(v);
            if (jump_ >= 0) {
                if (static_cast<int>(path.size()) < jump_) continue;
                if (static_cast<int>(path.size()) > jump_) break;
                jump_ = -1;
            }
        }
        inv.pop_back();
    }

    bool inOrbitOfExplored(std::uint32_t v, const std::vector<std::uint32_t>& explored,
                           const std::vector<std::uint32_t>& path) const
    {
        std::vector<const std::vector<std::uint32_t>*> fixing;
        for (const auto& a : autos_) {
            bool ok = true;
            for (auto p : path)
                if (a[p] != p) {
                    ok = false;
                    break;
                }
            if (ok) fixing.push_back(&a);
        }
        if (fixing.empty()) return false;
        std::vector<std::uint32_t> cell = explored;
        cell.push_back(v);
        const auto ids = orbitIds(cell, fixing, g_.size());
        for (std::size_t i = 0; i + 1 < ids.size(); ++i)
            if (ids[i] == ids.back()) return true;
        return false;
    }

    const BiGraph& g_;
    IncidenceCertificate firstCert_, bestCert_;
    Colouring firstLeaf_, bestLeaf_;
    std::vector<std::uint32_t> firstPath_, bestPath_;
    std::vector<std::uint64_t> firstInv_, bestInv_;
    std::vector<std::vector<std::uint32_t>> autos_;
    int jump_ = -1;
};

} // namespace detail

/// Relabelling-invariant certificate; equal certificates mean isomorphic structures.
inline IncidenceCertificate canonicalCertificate(const IncidenceStructure& I)
{
    const detail::BiGraph g(I);
    detail::CanonSearch s(g);
    s.run();
    return s.best();
}

/// A line bijection f with f(points of I1) = points of I2, if one exists.
inline std::optional<std::vector<std::uint32_t>> isIncidenceIsomorphic(const IncidenceStructure& I1,
                                                                       const IncidenceStructure& I2)
{
    if (I1.nLines() != I2.nLines() || I1.nPoints() != I2.nPoints()) return std::nullopt;
    if (I1.multiplicityCounts() != I2.multiplicityCounts()) return std::nullopt;
    const detail::BiGraph g1(I1), g2(I2);
    auto f = detail::findIso(g1, detail::initialColouring(g1), g2, detail::initialColouring(g2));
    if (!f) return std::nullopt;
    f->resize(I1.nLines());
    return f;
}

/// Order of the group of line permutations preserving the incidence.
/// Walks one base of individualized vertices; at each level the orbit of
/// the base vertex under the pointwise stabilizer of the earlier ones is
/// found by explicit isomorphism tests, sped up by the automorphisms
/// already known.
inline std::uint64_t autGroupOrder(const IncidenceStructure& I)
{
    const detail::BiGraph g(I);
    detail::Colouring c = detail::initialColouring(g);
    detail::refine(g, c, nullptr);
    std::vector<std::uint32_t> base;
    std::vector<std::vector<std::uint32_t>> gens;
    std::uint64_t order = 1;
    while (auto cell = detail::targetCell(g, c)) {
        const auto members = detail::cellMembers(c, *cell);
        const std::uint32_t v = members.front();
        const auto cv = detail::individualize(c, v);
        auto fixesBase = [&](const std::vector<std::uint32_t>& a) {
            return std::all_of(base.begin(), base.end(), [&](auto b) { return a[b] == b; });
        };
        auto orbitOfV = [&] {
            std::vector<const std::vector<std::uint32_t>*> useful;
            for (const auto& a : gens)
                if (fixesBase(a)) useful.push_back(&a);
            const auto ids = detail::orbitIds(members, useful, g.size());
            std::set<std::uint32_t> orb;
            for (std::size_t i = 0; i < members.size(); ++i)
                if (ids[i] == ids[0]) orb.insert(members[i]);
            return orb;
        };
        auto orbit = orbitOfV();
        for (auto w : members) {
            if (orbit.count(w)) continue;
            if (auto f = detail::findIso(g, cv, g, detail::individualize(c, w))) {
                gens.push_back(std::move(*f));
                orbit = orbitOfV();
            }
        }
        const std::uint64_t s = orbit.size();
        if (order > UINT64_MAX / s) throw CapExceeded("automorphism group order overflows 64 bits");
        order *= s;
        base.push_back(v);
        c = cv;
        detail::refine(g, c, nullptr);
    }
    return order;
}

} // namespace arrfq
