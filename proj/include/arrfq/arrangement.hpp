#pragma once

/**
 * @file arrangement.hpp
 * @brief Line arrangements in PG(2,q), their invariants, and the three
 *        equivalent simpliciality tests.
 *
 * An arrangement is a duplicate-free set of lines, stored as sorted line
 * indices of a materialized ProjectivePlane. Its intersection profile (the
 * points of P with their multiplicities, together with n0 and n1) is computed
 * once on first use and shared by all copies.
 *
 * Simpliciality (rank 3):
 *  - by points:  3(|P| - 1) = sum over v in P of m_v
 *  - by count:   |A| = 3q - (3 n0 + 2 n1)/(q+1)
 *  - by chi:     3 chi_A(-1) + 2 sum_H chi_{A^H}(-1) = 0
 * All three require an essential arrangement (at least two intersection
 * points) and throw NonEssential otherwise.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "arrfq/error.hpp"
#include "arrfq/gf.hpp"
#include "arrfq/projplane.hpp"

namespace arrfq {

/// Points of P with their multiplicities m_v >= 2, plus n0 and n1.
struct IntersectionProfile {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> points; // (point index, m_v), ascending index
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;

    std::size_t size() const { return points.size(); }
    std::uint64_t multiplicitySum() const
    {
        std::uint64_t s = 0;
        for (const auto& [v, m] : points) s += m;
        return s;
    }
    friend bool operator==(const IntersectionProfile&, const IntersectionProfile&) = default;
};

/// Multiplicity histogram (2^t2, 3^t3, ...).
struct TVector {
    std::map<std::uint32_t, std::uint64_t> counts;

    /// Rendered as "2^7 3^13 5^2".
    std::string str() const
    {
        std::string s;
        for (const auto& [m, t] : counts) {
            if (!s.empty()) s += ' ';
            s += std::to_string(m) + '^' + std::to_string(t);
        }
        return s;
    }
    friend bool operator==(const TVector&, const TVector&) = default;
};

/// chi_A(t) = c[0] t^3 + c[1] t^2 + c[2] t + c[3].
struct CharPoly3 {
    std::array<std::int64_t, 4> c{};

    std::int64_t operator()(std::int64_t t) const { return ((c[0] * t + c[1]) * t + c[2]) * t + c[3]; }
    friend bool operator==(const CharPoly3&, const CharPoly3&) = default;
};

class Arrangement {
public:
    Arrangement() = default;

    /// Normalizes, deduplicates and sorts the given normals.
    static Arrangement fromNormals(const FiniteField& F, std::span<const Triple> normals)
    {
        if (normals.empty()) throw std::invalid_argument("an arrangement needs at least one line");
        auto plane = ProjectivePlane::of(F);
        std::vector<std::uint32_t> idx;
        idx.reserve(normals.size());
        for (const auto& t : normals) idx.push_back(plane->indexOf(t));
        return fromIndices(std::move(plane), std::move(idx));
    }

    static Arrangement fromLines(const FiniteField& F, std::span<const ProjLine> lines)
    {
        std::vector<Triple> t;
        for (const auto& l : lines) t.push_back(l.normal);
        return fromNormals(F, t);
    }

    /// Lines given by plane indices; duplicates are dropped.
    static Arrangement fromIndices(std::shared_ptr<const ProjectivePlane> plane, std::vector<std::uint32_t> idx)
    {
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        for (auto i : idx)
            if (i >= plane->size()) throw std::out_of_range("line index outside the plane");
        Arrangement a;
        a.plane_ = std::move(plane);
        a.lines_ = std::move(idx);
        a.cache_ = std::make_shared<Cache>();
        return a;
    }

    const FiniteField& field() const { return plane_->field(); }
    const ProjectivePlane& plane() const { return *plane_; }
    std::shared_ptr<const ProjectivePlane> planePtr() const { return plane_; }
    std::uint32_t q() const { return plane_->q(); }

    std::span<const std::uint32_t> lines() const { return lines_; }
    std::size_t size() const { return lines_.size(); }
    ProjLine line(std::size_t i) const { return plane_->line(lines_[i]); }
    std::vector<Triple> normals() const
    {
        std::vector<Triple> out;
        for (auto l : lines_) out.push_back(plane_->coords(l));
        return out;
    }
    bool contains(std::uint32_t lineIdx) const { return std::binary_search(lines_.begin(), lines_.end(), lineIdx); }

    /// Multiplicity m_v for every point of the plane.
    const std::vector<std::uint32_t>& multiplicities() const { return cache().mult; }
    const IntersectionProfile& profile() const { return cache().profile; }
    /// Number of points of P on each line, in line order.
    const std::vector<std::uint32_t>& pointsPerLine() const { return cache().perLine; }

    friend bool operator==(const Arrangement& a, const Arrangement& b)
    {
        return a.field() == b.field() && a.lines_ == b.lines_;
    }

private:
    struct Cache {
        std::once_flag once;
        std::vector<std::uint32_t> mult;
        IntersectionProfile profile;
        std::vector<std::uint32_t> perLine;
    };

    const Cache& cache() const
    {
        std::call_once(cache_->once, [this] {
            Cache& c = *cache_;
            c.mult.assign(plane_->size(), 0);
            for (auto l : lines_)
                for (auto p : plane_->pointsOnLine(l)) ++c.mult[p];
            for (std::uint32_t v = 0; v < plane_->size(); ++v) {
                const auto m = c.mult[v];
                if (m == 0) ++c.profile.n0;
                else if (m == 1) ++c.profile.n1;
                else c.profile.points.emplace_back(v, m);
            }
            c.perLine.reserve(lines_.size());
            for (auto l : lines_) {
                std::uint32_t k = 0;
                for (auto p : plane_->pointsOnLine(l)) k += c.mult[p] >= 2;
                c.perLine.push_back(k);
            }
        });
        return *cache_;
    }

    std::shared_ptr<const ProjectivePlane> plane_;
    std::vector<std::uint32_t> lines_;
    std::shared_ptr<Cache> cache_;
};

inline const IntersectionProfile& intersectionProfile(const Arrangement& A) { return A.profile(); }

/// Same profile, computed from the meets of all pairs of lines instead of
/// scanning the plane: a point where m lines meet occurs C(m,2) times.
inline IntersectionProfile intersectionProfileByMeets(const Arrangement& A)
{
    std::map<std::uint32_t, std::uint64_t> pairCount;
    const auto L = A.lines();
    for (std::size_t i = 0; i < L.size(); ++i)
        for (std::size_t j = i + 1; j < L.size(); ++j) ++pairCount[A.plane().meet(L[i], L[j])];
    IntersectionProfile prof;
    std::uint64_t incidences = 0;
    for (const auto& [v, c] : pairCount) {
        std::uint32_t m = 2;
        while (static_cast<std::uint64_t>(m) * (m - 1) / 2 < c) ++m;
        if (static_cast<std::uint64_t>(m) * (m - 1) / 2 != c) throw std::logic_error("inconsistent pair count");
        prof.points.emplace_back(v, m);
        incidences += m;
    }
    // Each line has q+1 points; those not in P carry exactly one line.
    prof.n1 = static_cast<std::uint64_t>(L.size()) * (A.q() + 1) - incidences;
    prof.n0 = A.plane().size() - prof.n1 - prof.points.size();
    return prof;
}

inline TVector tVector(const Arrangement& A)
{
    TVector t;
    for (const auto& [v, m] : A.profile().points) ++t.counts[m];
    return t;
}

/// Central is automatic; essential means the lines do not all share one point.
inline bool isEssential(const Arrangement& A) { return A.profile().size() >= 2; }

/// All lines but one pass through a common point (and the arrangement is essential).
inline bool isNearPencil(const Arrangement& A)
{
    if (!isEssential(A)) return false;
    for (const auto& [v, m] : A.profile().points)
        if (m + 1 == A.size()) return true;
    return false;
}

namespace detail {
inline void requireEssential(const Arrangement& A)
{
    if (!isEssential(A)) throw NonEssential("arrangement is not essential (all lines are concurrent)");
}
} // namespace detail

inline bool simplicialByPoints(const Arrangement& A)
{
    detail::requireEssential(A);
    const auto& P = A.profile();
    return 3 * (P.size() - 1) == P.multiplicitySum();
}

inline bool simplicialByCount(const Arrangement& A)
{
    detail::requireEssential(A);
    const auto& P = A.profile();
    const std::uint64_t q = A.q();
    const std::uint64_t num = 3 * P.n0 + 2 * P.n1;
    if (num % (q + 1) != 0) return false;
    return static_cast<std::int64_t>(A.size()) == static_cast<std::int64_t>(3 * q) - static_cast<std::int64_t>(num / (q + 1));
}

/// chi_A from the Moebius function of the rank-3 lattice {V, lines, P, 0}.
inline CharPoly3 charPoly(const Arrangement& A)
{
    detail::requireEssential(A);
    const std::int64_t muV = 1;
    // mu(H) = -mu(V) for every line.
    const std::int64_t muLine = -muV;
    const std::int64_t sumLines = muLine * static_cast<std::int64_t>(A.size());
    // mu(v) = -(mu(V) + sum of mu(H) over the m_v lines H through v).
    std::int64_t sumPoints = 0;
    for (const auto& [v, m] : A.profile().points) sumPoints += -(muV + muLine * static_cast<std::int64_t>(m));
    const std::int64_t muZero = -(muV + sumLines + sumPoints);
    return {{muV, sumLines, sumPoints, muZero}};
}

/// Zaslavsky's count |chi_A(-1)|, used here as a purely combinatorial number.
inline std::int64_t chamberCount(const Arrangement& A)
{
    const std::int64_t v = charPoly(A)(-1);
    return v < 0 ? -v : v;
}

/// chi of the restriction A^H at t = -1, from the rank-2 lattice {H, P cap H, 0}.
inline std::int64_t restrictionChiAtMinusOne(const Arrangement& A, std::size_t lineIdx)
{
    const std::int64_t k = A.pointsPerLine().at(lineIdx);
    const std::int64_t muH = 1, muPoint = -1;
    const std::int64_t muZero = -(muH + k * muPoint);
    // chi(t) = t^2 + k*mu(point) t + mu(0)
    return 1 - k * muPoint + muZero;
}

inline bool simplicialByChi(const Arrangement& A)
{
    const std::int64_t chi = charPoly(A)(-1);
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < A.size(); ++i) sum += restrictionChiAtMinusOne(A, i);
    return 3 * chi + 2 * sum == 0;
}

/// Convenience: all three criteria; throws std::logic_error if they disagree.
inline bool isSimplicial(const Arrangement& A)
{
    const bool a = simplicialByPoints(A), b = simplicialByCount(A), c = simplicialByChi(A);
    if (a != b || b != c) throw std::logic_error("simpliciality criteria disagree");
    return a;
}

} // namespace arrfq
