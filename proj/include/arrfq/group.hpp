#pragma once

// PGL_3(F_q) acting on the points and lines of PG(2,q).
//
// A group element is a 3x3 invertible matrix M, scaled so that its first
// nonzero entry in row-major order is 1. It acts on points by v -> M v and
// on line normals by n -> M^{-T} n, which keeps v . n = 0 invariant.
//
// cycleTypeTally enumerates GL_3(F_q), records the cycle type of each
// induced permutation of the q^2+q+1 points and divides every count by
// q - 1. polyaPolynomial turns the tally into the subset-counting
// polynomial F(t) with exact big-integer division.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "arrfq/error.hpp"
#include "arrfq/gf.hpp"
#include "arrfq/projplane.hpp"

namespace arrfq {

using Mat3 = std::array<Triple, 3>;

/// Largest q for which cycleTypeTally enumerates GL_3(F_q).
inline constexpr std::uint32_t kMaxTallyOrder = 7;
/// Largest group materialized by closure().
inline constexpr std::size_t kMaxClosureSize = 1000000;

inline Triple matVec(const FiniteField& F, const Mat3& m, const Triple& v)
{
    Triple r{};
    for (int i = 0; i < 3; ++i) r[i] = dot(F, m[i], v);
    return r;
}

inline Mat3 matMul(const FiniteField& F, const Mat3& a, const Mat3& b)
{
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Elem s = 0;
            for (int k = 0; k < 3; ++k) s = F.add(s, F.mul(a[i][k], b[k][j]));
            r[i][j] = s;
        }
    return r;
}

inline Mat3 transpose(const Mat3& m)
{
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = m[j][i];
    return r;
}

inline Elem matDet(const FiniteField& F, const Mat3& m) { return det3(F, m[0], m[1], m[2]); }

/// Inverse by the adjugate; throws on singular input.
inline Mat3 matInv(const FiniteField& F, const Mat3& m)
{
    const Elem d = matDet(F, m);
    if (d == 0) throw std::invalid_argument("singular matrix");
    const Elem di = F.inv(d);
    // Columns of the inverse are cross products of pairs of rows.
    const Triple c0 = cross(F, m[1], m[2]), c1 = cross(F, m[2], m[0]), c2 = cross(F, m[0], m[1]);
    Mat3 r{};
    for (int i = 0; i < 3; ++i) {
        r[i][0] = F.mul(c0[i], di);
        r[i][1] = F.mul(c1[i], di);
        r[i][2] = F.mul(c2[i], di);
    }
    return r;
}

/// Scales so that the first nonzero entry in row-major order is 1.
inline Mat3 canonicalScale(const FiniteField& F, Mat3 m)
{
    for (int k = 0; k < 9; ++k) {
        const Elem e = m[k / 3][k % 3];
        if (e == 0) continue;
        if (e != 1) {
            const Elem s = F.inv(e);
            for (auto& row : m)
                for (auto& x : row) x = F.mul(x, s);
        }
        return m;
    }
    throw std::invalid_argument("zero matrix");
}

class GroupElement {
public:
    GroupElement() = default;

    static GroupElement make(const FiniteField& F, const Mat3& m)
    {
        if (matDet(F, m) == 0) throw std::invalid_argument("group element must be invertible");
        GroupElement g;
        g.F_ = F;
        g.m_ = canonicalScale(F, m);
        return g;
    }
    static GroupElement identity(const FiniteField& F) { return make(F, {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}); }

    const FiniteField& field() const { return F_; }
    const Mat3& matrix() const { return m_; }

    GroupElement operator*(const GroupElement& o) const { return make(F_, matMul(F_, m_, o.m_)); }
    GroupElement inverse() const { return make(F_, matInv(F_, m_)); }

    ProjPoint actOnPoint(const ProjPoint& p) const { return {normalize(F_, matVec(F_, m_, p.coords))}; }
    ProjLine actOnLine(const ProjLine& l) const
    {
        return {normalize(F_, matVec(F_, transpose(matInv(F_, m_)), l.normal))};
    }

    /// Images of all line indices of @p P.
    std::vector<std::uint32_t> linePermutation(const ProjectivePlane& P) const
    {
        const Mat3 t = transpose(matInv(F_, m_));
        std::vector<std::uint32_t> perm(P.size());
        for (std::uint32_t i = 0; i < P.size(); ++i) perm[i] = P.indexOf(matVec(F_, t, P.coords(i)));
        return perm;
    }
    std::vector<std::uint32_t> pointPermutation(const ProjectivePlane& P) const
    {
        std::vector<std::uint32_t> perm(P.size());
        for (std::uint32_t i = 0; i < P.size(); ++i) perm[i] = P.indexOf(matVec(F_, m_, P.coords(i)));
        return perm;
    }

    friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.m_ == b.m_; }
    friend bool operator<(const GroupElement& a, const GroupElement& b) { return a.m_ < b.m_; }

private:
    FiniteField F_;
    Mat3 m_{};
};

inline ProjLine actOnLine(const GroupElement& g, const ProjLine& l) { return g.actOnLine(l); }

/// |PGL_3(F_q)| = q^8 - q^6 - q^5 + q^3.
inline mpz_class pglOrder(std::uint32_t q)
{
    mpz_class Q = q, r;
    r = Q * Q * Q * Q * Q * Q * Q * Q - Q * Q * Q * Q * Q * Q - Q * Q * Q * Q * Q + Q * Q * Q;
    return r;
}

/// Cycle type as the ascending list of cycle lengths.
using CycleType = std::vector<std::uint32_t>;

struct CycleTypeTally {
    std::uint32_t q = 0;
    std::map<CycleType, mpz_class> counts;

    mpz_class total() const
    {
        mpz_class s = 0;
        for (const auto& [t, c] : counts) s += c;
        return s;
    }
};

enum class PlaneAction { Points, Lines };

namespace detail {

inline CycleType cycleType(const std::vector<std::uint32_t>& perm, std::vector<char>& seen)
{
    const std::size_t n = perm.size();
    seen.assign(n, 0);
    CycleType t;
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::uint32_t len = 0;
        for (std::size_t j = i; !seen[j]; j = perm[j]) {
            seen[j] = 1;
            ++len;
        }
        t.push_back(len);
    }
    std::sort(t.begin(), t.end());
    return t;
}

} // namespace detail

/// Cycle types of all of PGL_3(F_q) via GL_3(F_q) enumeration, with counts
/// divided by q - 1. The point and line actions give the same tally because
/// M -> M^{-T} permutes GL_3; both are offered so that tests can confirm it.
inline CycleTypeTally cycleTypeTally(std::uint32_t q, unsigned jobs = 1, PlaneAction action = PlaneAction::Points)
{
    if (q > kMaxTallyOrder) throw CapExceeded("GL_3 enumeration is limited to q <= " + std::to_string(kMaxTallyOrder));
    const FiniteField F = makeFieldOfOrder(q);
    const auto P = ProjectivePlane::of(F);
    const std::uint32_t n = P->size();
    std::vector<Triple> vecs; // nonzero vectors of F_q^3
    for (Elem a = 0; a < q; ++a)
        for (Elem b = 0; b < q; ++b)
            for (Elem c = 0; c < q; ++c)
                if (a || b || c) vecs.push_back({a, b, c});
    std::vector<Triple> coords(n);
    for (std::uint32_t i = 0; i < n; ++i) coords[i] = P->coords(i);

    if (jobs == 0) jobs = 1;
    std::vector<std::unordered_map<std::string, std::uint64_t>> partial(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&](unsigned id) {
        auto& tally = partial[id];
        std::vector<std::uint32_t> perm(n);
        std::vector<char> seen;
        std::string key(n + 1, '\0');
        for (;;) {
            const std::size_t i0 = next.fetch_add(1);
            if (i0 >= vecs.size()) break;
            Mat3 m{};
            m[0] = vecs[i0];
            for (const auto& r1 : vecs) {
                if (isZeroTriple(cross(F, m[0], r1))) continue;
                m[1] = r1;
                for (const auto& r2 : vecs) {
                    m[2] = r2;
                    if (matDet(F, m) == 0) continue;
                    const Mat3 act = action == PlaneAction::Points ? m : transpose(matInv(F, m));
                    for (std::uint32_t j = 0; j < n; ++j) perm[j] = tripleIndex(q, normalize(F, matVec(F, act, coords[j])));
                    // Key: count of cycles of each length.
                    std::fill(key.begin(), key.end(), '\0');
                    seen.assign(n, 0);
                    for (std::uint32_t s = 0; s < n; ++s) {
                        if (seen[s]) continue;
                        std::uint32_t len = 0;
                        for (std::uint32_t j = s; !seen[j]; j = perm[j]) {
                            seen[j] = 1;
                            ++len;
                        }
                        ++key[len];
                    }
                    ++tally[key];
                }
            }
        }
    };
    std::vector<std::thread> threads;
    for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker, t);
    worker(0);
    for (auto& t : threads) t.join();

    std::unordered_map<std::string, std::uint64_t> merged;
    for (const auto& part : partial)
        for (const auto& [k, c] : part) merged[k] += c;

    CycleTypeTally out;
    out.q = q;
    for (const auto& [k, c] : merged) {
        if (c % (q - 1) != 0) throw std::logic_error("cycle-type count not divisible by q-1");
        CycleType t;
        for (std::uint32_t len = 1; len <= n; ++len)
            for (int r = 0; r < static_cast<unsigned char>(k[len]); ++r) t.push_back(len);
        out.counts[t] += mpz_class(static_cast<unsigned long>(c / (q - 1)));
    }
    return out;
}

/// Coefficients of F(t) = |PGL|^{-1} sum_g prod_{cycles} (1 + t^{|c|}),
/// truncated at degree maxK. Coefficient k counts k-line arrangements up
/// to projectivity.
inline std::vector<mpz_class> polyaPolynomial(const CycleTypeTally& tally, std::uint32_t maxK)
{
    std::vector<mpz_class> sum(maxK + 1, 0);
    for (const auto& [type, count] : tally.counts) {
        std::vector<mpz_class> prod(maxK + 1, 0);
        prod[0] = 1;
        std::size_t deg = 0;
        for (auto len : type) {
            const std::size_t top = std::min<std::size_t>(maxK, deg + len);
            for (std::size_t d = top; d >= len; --d) {
                prod[d] += prod[d - len];
                if (d == len) break;
            }
            deg = top;
        }
        for (std::size_t d = 0; d <= maxK; ++d) sum[d] += prod[d] * count;
    }
    const mpz_class order = pglOrder(tally.q);
    if (tally.total() != order) throw std::logic_error("cycle-type tally does not sum to |PGL_3|");
    for (auto& c : sum) {
        if (!mpz_divisible_p(c.get_mpz_t(), order.get_mpz_t()))
            throw std::logic_error("Polya sum is not divisible by the group order");
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), order.get_mpz_t());
    }
    return sum;
}

inline std::vector<mpz_class> polyaPolynomial(std::uint32_t q, std::optional<std::uint32_t> maxK = std::nullopt,
                                              unsigned jobs = 1)
{
    const std::uint32_t n = q * q + q + 1;
    return polyaPolynomial(cycleTypeTally(q, jobs), maxK ? std::min(*maxK, n) : n);
}

/// Subgroup of PGL_3(F_q) given by generators, with its full element list
/// and the orbit partition of the lines of PG(2,q).
class PermGroup {
public:
    static PermGroup closure(const FiniteField& F, const std::vector<Mat3>& generators,
                             std::size_t cap = kMaxClosureSize)
    {
        PermGroup G;
        G.plane_ = ProjectivePlane::of(F);
        for (const auto& m : generators) G.gens_.push_back(GroupElement::make(F, m));
        const GroupElement id = GroupElement::identity(F);
        std::set<Mat3> seen{id.matrix()};
        std::deque<GroupElement> queue{id};
        G.elements_.push_back(id);
        while (!queue.empty()) {
            const GroupElement g = queue.front();
            queue.pop_front();
            for (const auto& s : G.gens_) {
                const GroupElement h = g * s;
                if (seen.insert(h.matrix()).second) {
                    if (seen.size() > cap)
                        throw CapExceeded("group closure exceeds " + std::to_string(cap) + " elements");
                    G.elements_.push_back(h);
                    queue.push_back(h);
                }
            }
        }
        G.computeOrbits();
        return G;
    }

    const ProjectivePlane& plane() const { return *plane_; }
    std::shared_ptr<const ProjectivePlane> planePtr() const { return plane_; }
    std::size_t order() const { return elements_.size(); }
    const std::vector<GroupElement>& generators() const { return gens_; }
    const std::vector<GroupElement>& elements() const { return elements_; }
    /// Orbits on line indices, each sorted, ordered by their smallest line.
    const std::vector<std::vector<std::uint32_t>>& orbits() const { return orbits_; }

    /// The orbit containing line @p idx.
    const std::vector<std::uint32_t>& orbitOf(std::uint32_t idx) const { return orbits_.at(orbitIndex_.at(idx)); }

private:
    void computeOrbits()
    {
        const std::uint32_t n = plane_->size();
        std::vector<std::vector<std::uint32_t>> perms;
        for (const auto& g : gens_) perms.push_back(g.linePermutation(*plane_));
        orbitIndex_.assign(n, UINT32_MAX);
        for (std::uint32_t s = 0; s < n; ++s) {
            if (orbitIndex_[s] != UINT32_MAX) continue;
            const auto id = static_cast<std::uint32_t>(orbits_.size());
            std::vector<std::uint32_t> orb{s};
            orbitIndex_[s] = id;
            for (std::size_t i = 0; i < orb.size(); ++i)
                for (const auto& p : perms) {
                    const auto t = p[orb[i]];
                    if (orbitIndex_[t] == UINT32_MAX) {
                        orbitIndex_[t] = id;
                        orb.push_back(t);
                    }
                }
            std::sort(orb.begin(), orb.end());
            orbits_.push_back(std::move(orb));
        }
    }

    std::shared_ptr<const ProjectivePlane> plane_;
    std::vector<GroupElement> gens_;
    std::vector<GroupElement> elements_;
    std::vector<std::vector<std::uint32_t>> orbits_;
    std::vector<std::uint32_t> orbitIndex_;
};

inline PermGroup closure(const FiniteField& F, const std::vector<Mat3>& generators,
                         std::size_t cap = kMaxClosureSize)
{
    return PermGroup::closure(F, generators, cap);
}

inline const std::vector<std::vector<std::uint32_t>>& orbitsOnLines(const PermGroup& G) { return G.orbits(); }

/// Generators of the monomial matrices with entries +-1 (type B_3).
inline std::vector<Mat3> monomialSignGenerators(const FiniteField& F)
{
    const Elem m1 = F.neg(1);
    return {
        {{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}},
        {{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}},
        {{{m1, 0, 0}, {0, 1, 0}, {0, 0, 1}}},
    };
}

} // namespace arrfq
