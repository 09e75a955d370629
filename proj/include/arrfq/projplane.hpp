#pragma once

// The projective plane PG(2,q): canonical homogeneous triples, incidence,
// duality. Points and lines share one representation (the leading-one
// normalized triple); a line is stored by its normal vector, so point v lies
// on line l iff v . l = 0.
//
// ProjectivePlane materializes the q^2+q+1 triples in a fixed order
// ((1,y,z) lexicographic, then (0,1,z), then (0,0,1)) and the incidence
// lists. Because the dot product is symmetric, the points on line i and the
// lines through point i are the same index list.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "arrfq/error.hpp"
#include "arrfq/gf.hpp"

namespace arrfq {

using Triple = std::array<Elem, 3>;

inline constexpr std::uint32_t kMaxPlaneOrder = 128;

inline bool isZeroTriple(const Triple& t) { return t[0] == 0 && t[1] == 0 && t[2] == 0; }

/// Scales @p t by the inverse of its first nonzero coordinate.
inline Triple normalize(const FiniteField& F, Triple t)
{
    int lead = 0;
    while (lead < 3 && t[lead] == 0) ++lead;
    if (lead == 3) throw std::invalid_argument("zero vector has no projective class");
    if (t[lead] != 1) {
        const Elem s = F.inv(t[lead]);
        for (int i = lead; i < 3; ++i) t[i] = F.mul(t[i], s);
    }
    return t;
}

inline Elem dot(const FiniteField& F, const Triple& a, const Triple& b)
{
    return F.add(F.add(F.mul(a[0], b[0]), F.mul(a[1], b[1])), F.mul(a[2], b[2]));
}

inline Triple cross(const FiniteField& F, const Triple& a, const Triple& b)
{
    return {F.sub(F.mul(a[1], b[2]), F.mul(a[2], b[1])), F.sub(F.mul(a[2], b[0]), F.mul(a[0], b[2])),
            F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0]))};
}

inline Elem det3(const FiniteField& F, const Triple& a, const Triple& b, const Triple& c)
{
    return dot(F, a, cross(F, b, c));
}

/// A point of PG(2,q), canonically normalized.
struct ProjPoint {
    Triple coords{};
    friend auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
};

/// A line of PG(2,q) given by its canonical normal vector, written (a,b,c)^perp.
struct ProjLine {
    Triple normal{};
    friend auto operator<=>(const ProjLine&, const ProjLine&) = default;
};

inline ProjPoint makePoint(const FiniteField& F, const Triple& t) { return {normalize(F, t)}; }
inline ProjLine makeLine(const FiniteField& F, const Triple& t) { return {normalize(F, t)}; }

inline bool incident(const FiniteField& F, const ProjPoint& p, const ProjLine& l) { return dot(F, p.coords, l.normal) == 0; }

/// The unique common point of two distinct lines.
inline ProjPoint meet(const FiniteField& F, const ProjLine& a, const ProjLine& b)
{
    const Triple c = cross(F, a.normal, b.normal);
    if (isZeroTriple(c)) throw std::invalid_argument("meet of a line with itself");
    return {normalize(F, c)};
}

/// The unique line through two distinct points.
inline ProjLine join(const FiniteField& F, const ProjPoint& a, const ProjPoint& b)
{
    const Triple c = cross(F, a.coords, b.coords);
    if (isZeroTriple(c)) throw std::invalid_argument("join of a point with itself");
    return {normalize(F, c)};
}

/// True iff the three vectors are linearly dependent. On normals this
/// decides whether three lines are concurrent.
inline bool collinearTriple(const FiniteField& F, const Triple& a, const Triple& b, const Triple& c)
{
    if (isZeroTriple(a) || isZeroTriple(b) || isZeroTriple(c)) throw std::invalid_argument("zero vector in triple test");
    return det3(F, a, b, c) == 0;
}

/// Index of a canonical triple in the fixed point order.
inline std::uint32_t tripleIndex(std::uint32_t q, const Triple& t)
{
    if (t[0] == 1) return t[1] * q + t[2];
    if (t[1] == 1) return q * q + t[2];
    return q * q + q;
}

inline Triple tripleAt(std::uint32_t q, std::uint32_t idx)
{
    if (idx < q * q) return {1, idx / q, idx % q};
    if (idx < q * q + q) return {0, 1, idx - q * q};
    return {0, 0, 1};
}

/// All q^2+q+1 points in the fixed order.
inline std::vector<ProjPoint> allPoints(const FiniteField& F)
{
    const std::uint32_t q = F.order();
    const std::uint64_t n = static_cast<std::uint64_t>(q) * q + q + 1;
    std::vector<ProjPoint> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back({tripleAt(q, i)});
    return out;
}

/// Materialized PG(2,q) with incidence lists, shared per field.
class ProjectivePlane {
public:
    static std::shared_ptr<const ProjectivePlane> of(const FiniteField& F)
    {
        if (F.order() > kMaxPlaneOrder)
            throw CapExceeded("materialized planes are limited to q <= " + std::to_string(kMaxPlaneOrder));
        static std::mutex mu;
        static std::map<std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>,
                        std::shared_ptr<const ProjectivePlane>>
            cache;
        const auto key = std::make_tuple(F.characteristic(), F.degree(),
                                         std::vector<std::uint32_t>(F.modulus().begin(), F.modulus().end()));
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        std::shared_ptr<const ProjectivePlane> p(new ProjectivePlane(F));
        cache.emplace(key, p);
        return p;
    }

    const FiniteField& field() const { return F_; }
    std::uint32_t q() const { return q_; }
    /// Number of points (equivalently lines).
    std::uint32_t size() const { return n_; }

    Triple coords(std::uint32_t idx) const { return tripleAt(q_, idx); }
    ProjPoint point(std::uint32_t idx) const { return {coords(idx)}; }
    ProjLine line(std::uint32_t idx) const { return {coords(idx)}; }

    std::uint32_t indexOf(const Triple& anyNonzero) const { return tripleIndex(q_, normalize(F_, anyNonzero)); }
    std::uint32_t indexOf(const ProjPoint& p) const { return tripleIndex(q_, p.coords); }
    std::uint32_t indexOf(const ProjLine& l) const { return tripleIndex(q_, l.normal); }

    /// Points on line @p idx; by duality also the lines through point @p idx.
    std::span<const std::uint32_t> pointsOnLine(std::uint32_t idx) const
    {
        return {incidence_.data() + static_cast<std::size_t>(idx) * (q_ + 1), q_ + 1};
    }
    std::span<const std::uint32_t> linesThroughPoint(std::uint32_t idx) const { return pointsOnLine(idx); }

    bool incident(std::uint32_t point, std::uint32_t line) const { return dot(F_, coords(point), coords(line)) == 0; }

    std::uint32_t meet(std::uint32_t l1, std::uint32_t l2) const
    {
        if (l1 == l2) throw std::invalid_argument("meet of a line with itself");
        return tripleIndex(q_, normalize(F_, cross(F_, coords(l1), coords(l2))));
    }
    std::uint32_t join(std::uint32_t p1, std::uint32_t p2) const
    {
        if (p1 == p2) throw std::invalid_argument("join of a point with itself");
        return meet(p1, p2);
    }

    bool concurrent(std::uint32_t a, std::uint32_t b, std::uint32_t c) const
    {
        return det3(F_, coords(a), coords(b), coords(c)) == 0;
    }

private:
    explicit ProjectivePlane(const FiniteField& F) : F_(F), q_(F.order())
    {
        n_ = q_ * q_ + q_ + 1;
        incidence_.resize(static_cast<std::size_t>(n_) * (q_ + 1));
        for (std::uint32_t l = 0; l < n_; ++l) {
            // Two spanning points u, v of the kernel of the normal.
            const Triple nrm = coords(l);
            Triple u, v;
            if (nrm[0] == 1) {
                u = {F_.neg(nrm[1]), 1, 0};
                v = {F_.neg(nrm[2]), 0, 1};
            } else if (nrm[1] == 1) {
                u = {1, 0, 0};
                v = {0, F_.neg(nrm[2]), 1};
            } else {
                u = {1, 0, 0};
                v = {0, 1, 0};
            }
            std::uint32_t* row = incidence_.data() + static_cast<std::size_t>(l) * (q_ + 1);
            row[0] = tripleIndex(q_, normalize(F_, u));
            for (Elem lam = 0; lam < q_; ++lam) {
                const Triple w{F_.add(F_.mul(lam, u[0]), v[0]), F_.add(F_.mul(lam, u[1]), v[1]),
                               F_.add(F_.mul(lam, u[2]), v[2])};
                row[1 + lam] = tripleIndex(q_, normalize(F_, w));
            }
            std::sort(row, row + q_ + 1);
        }
    }

    FiniteField F_;
    std::uint32_t q_ = 0;
    std::uint32_t n_ = 0;
    std::vector<std::uint32_t> incidence_;
};

} // namespace arrfq
