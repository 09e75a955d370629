#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_m), 1 <= m <= 200.
//
// Elements are rational coefficient vectors of length phi(m) in the power
// basis 1, zeta, ..., zeta^(phi-1), always reduced modulo the m-th cyclotomic
// polynomial. No floating point is used anywhere.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "arrfq/error.hpp"

namespace arrfq {

inline constexpr int kMaxConductor = 200;

namespace detail {

using PolyQ = std::vector<mpq_class>;
using PolyZ = std::vector<mpz_class>;

inline void trimQ(PolyQ& a)
{
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

/// Exact quotient of integer polynomials; the divisor must be monic.
inline PolyZ divideMonic(PolyZ a, const PolyZ& b)
{
    PolyZ quot(a.size() - b.size() + 1, 0);
    for (std::size_t shift = quot.size(); shift-- > 0;) {
        const mpz_class c = a[shift + b.size() - 1];
        quot[shift] = c;
        if (c != 0)
            for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    }
    for (const auto& r : a)
        if (r != 0) throw std::logic_error("cyclotomic division left a remainder");
    return quot;
}

inline const PolyZ& cyclotomicPolynomial(int m)
{
    static std::mutex mu;
    static std::map<int, PolyZ> cache;
    std::lock_guard<std::mutex> lock(mu);
    std::vector<int> todo;
    for (int d = 1; d <= m; ++d)
        if (m % d == 0 && !cache.count(d)) todo.push_back(d);
    for (int d : todo) {
        PolyZ num(d + 1, 0);
        num[0] = -1;
        num[d] = 1;
        for (int e = 1; e < d; ++e)
            if (d % e == 0) num = divideMonic(num, cache.at(e));
        cache.emplace(d, std::move(num));
    }
    return cache.at(m);
}

inline PolyQ mulQ(const PolyQ& a, const PolyQ& b)
{
    if (a.empty() || b.empty()) return {};
    PolyQ r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trimQ(r);
    return r;
}

/// Quotient and remainder over Q; b nonzero.
inline std::pair<PolyQ, PolyQ> divModQ(PolyQ a, PolyQ b)
{
    trimQ(a);
    trimQ(b);
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    if (a.size() < b.size()) return {PolyQ{}, a};
    PolyQ quot(a.size() - b.size() + 1, 0);
    while (a.size() >= b.size()) {
        const std::size_t shift = a.size() - b.size();
        const mpq_class c = a.back() / b.back();
        quot[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        a.pop_back();
        trimQ(a);
    }
    trimQ(quot);
    return {quot, a};
}

struct CycloData {
    int m = 0;
    int phi = 0;
    PolyZ poly;   // ascending, monic, degree phi
    PolyQ polyQ;
};

} // namespace detail

class CycloElement;

/// Q(zeta_m) with its defining cyclotomic polynomial.
class CycloField {
public:
    CycloField() = default;

    static CycloField make(int m)
    {
        if (m < 1 || m > kMaxConductor)
            throw CapExceeded("cyclotomic conductor must lie in [1, " + std::to_string(kMaxConductor) + "]");
        static std::mutex mu;
        static std::map<int, std::shared_ptr<const detail::CycloData>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(m);
        if (it == cache.end()) {
            auto d = std::make_shared<detail::CycloData>();
            d->m = m;
            d->poly = detail::cyclotomicPolynomial(m);
            d->phi = static_cast<int>(d->poly.size()) - 1;
            for (const auto& c : d->poly) d->polyQ.emplace_back(c);
            it = cache.emplace(m, std::move(d)).first;
        }
        CycloField f;
        f.d_ = it->second;
        return f;
    }

    int conductor() const { return d_->m; }
    int degree() const { return d_->phi; }
    /// Coefficients of Phi_m, ascending.
    const std::vector<mpz_class>& cycloPoly() const { return d_->poly; }

    CycloElement zero() const;
    CycloElement one() const;
    CycloElement rational(const mpq_class& r) const;
    /// zeta^j for any integer j.
    CycloElement zeta(long j = 1) const;

    friend bool operator==(const CycloField& a, const CycloField& b) { return a.d_->m == b.d_->m; }

private:
    friend class CycloElement;
    std::shared_ptr<const detail::CycloData> d_;
};

inline CycloField cycloField(int m) { return CycloField::make(m); }

class CycloElement {
public:
    CycloElement() = default;

    const CycloField& field() const { return f_; }
    /// Coefficients in the power basis, length phi(m).
    const std::vector<mpq_class>& coeffs() const { return c_; }

    bool isZero() const
    {
        for (const auto& x : c_)
            if (sgn(x) != 0) return false;
        return true;
    }

    CycloElement operator+(const CycloElement& o) const
    {
        check(o);
        CycloElement r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
        return r;
    }
    CycloElement operator-(const CycloElement& o) const
    {
        check(o);
        CycloElement r = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
        return r;
    }
    CycloElement operator-() const
    {
        CycloElement r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    CycloElement operator*(const CycloElement& o) const
    {
        check(o);
        return fromPoly(f_, detail::mulQ(c_, o.c_));
    }
    CycloElement operator/(const CycloElement& o) const
    {
        check(o);
        return *this * o.inverse();
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against Phi_m.
    CycloElement inverse() const
    {
        if (isZero()) throw std::domain_error("division by zero in Q(zeta_" + std::to_string(f_.conductor()) + ")");
        // Invariant: r0 = s0 * a (mod Phi), r1 = s1 * a (mod Phi).
        detail::PolyQ r0 = f_.d_->polyQ, r1 = c_;
        detail::PolyQ s0, s1{1};
        detail::trimQ(r1);
        while (r1.size() > 1) {
            auto [quot, rem] = detail::divModQ(r0, r1);
            detail::PolyQ qs = detail::mulQ(quot, s1);
            detail::PolyQ s2 = s0;
            if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
            for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
            detail::trimQ(s2);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r1 is a nonzero constant since Phi_m is irreducible.
        const mpq_class c = r1.at(0);
        for (auto& x : s1) x /= c;
        return fromPoly(f_, std::move(s1));
    }

    friend bool operator==(const CycloElement& a, const CycloElement& b)
    {
        a.check(b);
        return a.c_ == b.c_;
    }

    std::string str() const
    {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) == 0) continue;
            if (!s.empty()) s += " + ";
            s += "(" + c_[i].get_str() + ")";
            if (i == 1) s += "z";
            if (i > 1) s += "z^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

private:
    friend class CycloField;

    static CycloElement fromPoly(const CycloField& f, detail::PolyQ p)
    {
        CycloElement e;
        e.f_ = f;
        auto [quot, rem] = detail::divModQ(std::move(p), f.d_->polyQ);
        rem.resize(f.d_->phi, 0);
        e.c_ = std::move(rem);
        return e;
    }

    void check(const CycloElement& o) const
    {
        if (f_.conductor() != o.f_.conductor()) throw std::invalid_argument("operands belong to different cyclotomic fields");
    }

    CycloField f_;
    std::vector<mpq_class> c_;
};

inline CycloElement CycloField::zero() const { return rational(0); }
inline CycloElement CycloField::one() const { return rational(1); }
inline CycloElement CycloField::rational(const mpq_class& r) const
{
    CycloElement e;
    e.f_ = *this;
    e.c_.assign(d_->phi, 0);
    e.c_[0] = r;
    e.c_[0].canonicalize();
    return e;
}
inline CycloElement CycloField::zeta(long j) const
{
    long e = j % d_->m;
    if (e < 0) e += d_->m;
    detail::PolyQ p(e + 1, 0);
    p[e] = 1;
    return CycloElement::fromPoly(*this, std::move(p));
}

enum class TrigKind { Cos, Sin };

/// Conductor of the field holding cos/sin(2 pi a / 2n) together with i.
inline int trigConductor(int n) { return std::lcm(4, 2 * n); }

/// cos(2 pi arg / 2n) or sin(2 pi arg / 2n) as an element of Q(zeta_M),
/// M = lcm(4, 2n), using c = (z^a + z^-a)/2 and s = (z^a - z^-a)/(2i).
inline CycloElement trig(int n, TrigKind kind, long arg)
{
    if (n < 1) throw std::invalid_argument("trig half-period must be positive");
    const int M = trigConductor(n);
    const CycloField K = cycloField(M);
    const long step = M / (2 * n);
    const CycloElement zp = K.zeta(step * arg);
    const CycloElement zm = K.zeta(-step * arg);
    if (kind == TrigKind::Cos) return (zp + zm) * K.rational(mpq_class(1, 2));
    const CycloElement twoI = K.zeta(M / 4) * K.rational(2);
    return (zp - zm) / twoI;
}

inline std::ostream& operator<<(std::ostream& os, const CycloElement& e) { return os << e.str(); }

using CycloTriple = std::array<CycloElement, 3>;

/// Cofactor expansion of a 3x3 determinant.
inline CycloElement cycloDet3(const std::array<CycloTriple, 3>& r)
{
    return r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
           r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
}

inline CycloElement cycloDet3(const CycloTriple& a, const CycloTriple& b, const CycloTriple& c)
{
    return cycloDet3(std::array<CycloTriple, 3>{a, b, c});
}

} // namespace arrfq
