#pragma once

/**
 * @file gf.hpp
 * @brief Exact arithmetic in the finite fields F_q, q = p^k <= 2^16.
 *
 * Elements are encoded as integers v = c_0 + c_1 p + ... + c_{k-1} p^{k-1},
 * where (c_0, ..., c_{k-1}) is the ascending coefficient vector of the
 * polynomial representative modulo the field's monic irreducible modulus.
 * The encoding is canonical, so equality of elements is equality of codes.
 *
 * Multiplication goes through discrete-log tables built from the designated
 * primitive element w (the smallest code of multiplicative order q - 1).
 * Addition is digit-wise modulo p, tabulated for q <= 256.
 *
 * Two layers are exposed:
 *  - FiniteField: an immutable, cheaply copyable handle with raw arithmetic
 *    on codes (Elem). The plane, arrangement and search code use this layer.
 *  - FieldElement: a value type carrying its field, with operators. Mixing
 *    elements of different fields throws.
 */

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arrfq/error.hpp"

namespace arrfq {

using Elem = std::uint32_t;

/// Largest supported field order.
inline constexpr std::uint64_t kMaxFieldOrder = 1u << 16;

namespace detail {

inline bool isPrime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> primeFactors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

/// Polynomials over F_p as ascending coefficient vectors.
using PolyP = std::vector<std::uint32_t>;

inline void trim(PolyP& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t invModP(std::uint32_t a, std::uint32_t p)
{
    // a^(p-2) mod p
    std::uint64_t r = 1, b = a % p;
    for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
    }
    return static_cast<std::uint32_t>(r);
}

/// Remainder of a modulo b over F_p; b must be nonzero.
inline PolyP polyMod(PolyP a, const PolyP& b, std::uint32_t p)
{
    PolyP bb = b;
    trim(bb);
    trim(a);
    const std::uint32_t lead = invModP(bb.back(), p);
    while (a.size() >= bb.size()) {
        const std::size_t shift = a.size() - bb.size();
        const std::uint64_t f = static_cast<std::uint64_t>(a.back()) * lead % p;
        for (std::size_t i = 0; i < bb.size(); ++i) {
            const std::uint64_t sub = f * bb[i] % p;
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

inline PolyP polyMulMod(const PolyP& a, const PolyP& b, const PolyP& m, std::uint32_t p)
{
    if (a.empty() || b.empty()) return {};
    PolyP r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    return polyMod(std::move(r), m, p);
}

inline PolyP polyPowMod(PolyP base, std::uint64_t e, const PolyP& m, std::uint32_t p)
{
    PolyP r{1};
    base = polyMod(std::move(base), m, p);
    for (; e > 0; e >>= 1) {
        if (e & 1) r = polyMulMod(r, base, m, p);
        base = polyMulMod(base, base, m, p);
    }
    return r;
}

/// True iff the monic polynomial f of degree k has no monic factor of degree 1..k/2.
inline bool isIrreducible(const PolyP& f, std::uint32_t p)
{
    const std::size_t k = f.size() - 1;
    for (std::size_t d = 1; d <= k / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            PolyP g(d + 1, 0);
            std::uint64_t c = code;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            g[d] = 1;
            if (polyMod(f, g, p).empty()) return false;
        }
    }
    return true;
}

inline PolyP codeToPoly(std::uint32_t v, std::uint32_t p, std::uint32_t k)
{
    PolyP a(k, 0);
    for (std::uint32_t i = 0; i < k; ++i) {
        a[i] = v % p;
        v /= p;
    }
    trim(a);
    return a;
}

inline std::uint32_t polyToCode(const PolyP& a, std::uint32_t p)
{
    std::uint32_t v = 0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * p + a[i];
    return v;
}

struct FieldData {
    std::uint32_t p = 0;
    std::uint32_t k = 0;
    std::uint32_t q = 0;
    PolyP modulus;                   // ascending, monic, size k+1
    Elem primitive = 0;
    std::vector<Elem> exp;           // exp[i] = w^i for 0 <= i < 2(q-1)
    std::vector<std::uint32_t> log;  // log[a] for a != 0
    std::vector<Elem> neg;
    std::vector<Elem> addTable;      // q*q entries when q <= 256, else empty
    std::vector<std::uint32_t> pows; // p^i for 0 <= i <= k
};

inline Elem addDigits(const FieldData& d, Elem a, Elem b)
{
    if (d.p == 2) return a ^ b;
    Elem r = 0;
    for (std::uint32_t i = 0; i < d.k; ++i) {
        const std::uint32_t s = (a % d.p + b % d.p) % d.p;
        r += s * d.pows[i];
        a /= d.p;
        b /= d.p;
    }
    return r;
}

inline Elem negDigits(const FieldData& d, Elem a)
{
    Elem r = 0;
    for (std::uint32_t i = 0; i < d.k; ++i) {
        const std::uint32_t c = a % d.p;
        r += ((d.p - c) % d.p) * d.pows[i];
        a /= d.p;
    }
    return r;
}

inline PolyP defaultModulus(std::uint32_t p, std::uint32_t k)
{
    if (k == 1) return {0, 1};
    if (p == 2 && k == 2) return {1, 1, 1};
    if (p == 2 && k == 3) return {1, 1, 0, 1};
    if (p == 3 && k == 2) return {2, 2, 1};
    // Smallest (by code of the lower coefficients) monic irreducible
    // polynomial for which x is primitive.
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k; ++i) count *= p;
    const std::uint64_t order = count - 1;
    const auto factors = primeFactors(order);
    for (std::uint64_t code = 0; code < count; ++code) {
        PolyP f(k + 1, 0);
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < k; ++i) {
            f[i] = static_cast<std::uint32_t>(c % p);
            c /= p;
        }
        f[k] = 1;
        if (f[0] == 0 || !isIrreducible(f, p)) continue;
        bool primitive = true;
        for (auto r : factors) {
            if (polyPowMod({0, 1}, order / r, f, p) == PolyP{1}) {
                primitive = false;
                break;
            }
        }
        if (primitive) return f;
    }
    throw std::logic_error("no primitive polynomial found");
}

} // namespace detail

class FieldElement;

/// Immutable handle to F_q. Copies share the precomputed tables.
class FiniteField {
public:
    FiniteField() = default;

    /// Builds F_{p^k}. When @p modulus is omitted the default table is used:
    /// x^2+x+1 (q=4), x^3+x+1 (q=8), x^2+2x+2 (q=9), x (prime fields), and
    /// otherwise the smallest monic irreducible polynomial whose root is primitive.
    static FiniteField make(std::uint32_t p, std::uint32_t k,
                            std::optional<std::vector<std::uint32_t>> modulus = std::nullopt)
    {
        if (!detail::isPrime(p)) throw std::invalid_argument("field characteristic is not prime: " + std::to_string(p));
        if (k < 1) throw std::invalid_argument("extension degree must be at least 1");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            q *= p;
            if (q > kMaxFieldOrder) throw CapExceeded("field order exceeds 2^16");
        }
        auto d = std::make_shared<detail::FieldData>();
        d->p = p;
        d->k = k;
        d->q = static_cast<std::uint32_t>(q);
        d->pows.resize(k + 1);
        d->pows[0] = 1;
        for (std::uint32_t i = 1; i <= k; ++i) d->pows[i] = d->pows[i - 1] * p;

        if (modulus) {
            detail::PolyP m = *modulus;
            if (m.size() != k + 1 || m.back() != 1)
                throw std::invalid_argument("modulus must be monic of degree " + std::to_string(k));
            for (auto c : m)
                if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
            if (k > 1 && !detail::isIrreducible(m, p)) throw std::invalid_argument("modulus is reducible");
            d->modulus = std::move(m);
        } else {
            d->modulus = detail::defaultModulus(p, k);
        }

        const std::uint32_t order = d->q - 1;
        const auto factors = detail::primeFactors(order);
        auto hasFullOrder = [&](Elem v) {
            const detail::PolyP a = detail::codeToPoly(v, p, k);
            if (detail::polyPowMod(a, order, d->modulus, p) != detail::PolyP{1}) return false;
            for (auto r : factors)
                if (detail::polyPowMod(a, order / r, d->modulus, p) == detail::PolyP{1}) return false;
            return true;
        };
        if (d->q == 2) {
            d->primitive = 1;
        } else {
            for (Elem v = 1; v < d->q; ++v) {
                if (hasFullOrder(v)) {
                    d->primitive = v;
                    break;
                }
            }
        }

        d->exp.resize(2 * static_cast<std::size_t>(order));
        d->log.assign(d->q, 0);
        detail::PolyP cur{1};
        const detail::PolyP w = detail::codeToPoly(d->primitive, p, k);
        for (std::uint32_t i = 0; i < order; ++i) {
            const Elem c = detail::polyToCode(cur, p);
            d->exp[i] = c;
            d->exp[i + order] = c;
            d->log[c] = i;
            cur = detail::polyMulMod(cur, w, d->modulus, p);
        }

        d->neg.resize(d->q);
        for (Elem a = 0; a < d->q; ++a) d->neg[a] = detail::negDigits(*d, a);
        if (d->q <= 256) {
            d->addTable.resize(static_cast<std::size_t>(d->q) * d->q);
            for (Elem a = 0; a < d->q; ++a)
                for (Elem b = 0; b < d->q; ++b) d->addTable[a * d->q + b] = detail::addDigits(*d, a, b);
        }
        FiniteField f;
        f.d_ = std::move(d);
        return f;
    }

    bool valid() const { return d_ != nullptr; }
    std::uint32_t characteristic() const { return d_->p; }
    std::uint32_t degree() const { return d_->k; }
    std::uint32_t order() const { return d_->q; }
    std::span<const std::uint32_t> modulus() const { return d_->modulus; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem primitive() const { return d_->primitive; }

    Elem add(Elem a, Elem b) const
    {
        if (!d_->addTable.empty()) return d_->addTable[a * d_->q + b];
        return detail::addDigits(*d_, a, b);
    }
    Elem neg(Elem a) const { return d_->neg[a]; }
    Elem sub(Elem a, Elem b) const { return add(a, d_->neg[b]); }
    Elem mul(Elem a, Elem b) const
    {
        if (a == 0 || b == 0) return 0;
        return d_->exp[d_->log[a] + d_->log[b]];
    }
    Elem inv(Elem a) const
    {
        if (a == 0) throw std::domain_error("inversion of zero in F_" + std::to_string(d_->q));
        const std::uint32_t order = d_->q - 1;
        return d_->exp[(order - d_->log[a]) % order];
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    /// a^e for any integer e; negative exponents go through the inverse.
    Elem pow(Elem a, std::int64_t e) const
    {
        if (e == 0) return 1;
        if (a == 0) {
            if (e < 0) throw std::domain_error("inversion of zero in F_" + std::to_string(d_->q));
            return 0;
        }
        const std::int64_t order = d_->q - 1;
        std::int64_t l = (static_cast<std::int64_t>(d_->log[a]) * (e % order)) % order;
        if (l < 0) l += order;
        return d_->exp[static_cast<std::size_t>(l)];
    }

    /// w^j for the designated primitive element w.
    Elem omegaPow(std::int64_t j) const { return pow(d_->primitive, j); }

    /// Discrete logarithm to base w; empty for zero.
    std::optional<std::uint32_t> log(Elem a) const
    {
        if (a == 0) return std::nullopt;
        return d_->log[a];
    }

    /// n * 1 for an integer n.
    Elem fromInt(std::int64_t n) const
    {
        std::int64_t r = n % static_cast<std::int64_t>(d_->p);
        if (r < 0) r += d_->p;
        return static_cast<Elem>(r);
    }

    /// True iff a lies in the prime subfield.
    bool inPrimeField(Elem a) const { return a < d_->p; }

    std::vector<std::uint32_t> coeffs(Elem a) const
    {
        std::vector<std::uint32_t> c(d_->k, 0);
        for (std::uint32_t i = 0; i < d_->k; ++i) {
            c[i] = a % d_->p;
            a /= d_->p;
        }
        return c;
    }

    Elem fromCoeffs(std::span<const std::uint32_t> c) const
    {
        if (c.size() > d_->k) throw std::invalid_argument("too many coefficients");
        Elem v = 0;
        for (std::size_t i = c.size(); i-- > 0;) {
            if (c[i] >= d_->p) throw std::invalid_argument("coefficient out of range");
            v = v * d_->p + c[i];
        }
        return v;
    }

    FieldElement element(Elem a) const;
    FieldElement operator()(std::int64_t n) const;

    std::string name() const
    {
        std::string s = "F_" + std::to_string(d_->q);
        return s;
    }

    friend bool operator==(const FiniteField& a, const FiniteField& b)
    {
        if (a.d_ == b.d_) return true;
        if (!a.d_ || !b.d_) return false;
        return a.d_->p == b.d_->p && a.d_->k == b.d_->k && a.d_->modulus == b.d_->modulus;
    }

private:
    std::shared_ptr<const detail::FieldData> d_;
};

inline FiniteField makeField(std::uint32_t p, std::uint32_t k = 1,
                             std::optional<std::vector<std::uint32_t>> modulus = std::nullopt)
{
    return FiniteField::make(p, k, std::move(modulus));
}

/// Builds F_q from its order, q a prime power.
inline FiniteField makeFieldOfOrder(std::uint32_t q)
{
    if (q < 2) throw std::invalid_argument("field order must be a prime power");
    const auto f = detail::primeFactors(q);
    if (f.size() != 1) throw std::invalid_argument("field order is not a prime power: " + std::to_string(q));
    std::uint32_t k = 0;
    for (std::uint32_t r = q; r > 1; r /= static_cast<std::uint32_t>(f[0])) ++k;
    return makeField(static_cast<std::uint32_t>(f[0]), k);
}

/// An element of a specific finite field.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FiniteField f, Elem v) : field_(std::move(f)), v_(v)
    {
        if (v_ >= field_.order()) throw std::invalid_argument("element code out of range");
    }

    const FiniteField& field() const { return field_; }
    Elem code() const { return v_; }
    std::vector<std::uint32_t> coeffs() const { return field_.coeffs(v_); }
    bool isZero() const { return v_ == 0; }

    FieldElement operator+(const FieldElement& o) const { return {field_, field_.add(v_, check(o).v_)}; }
    FieldElement operator-(const FieldElement& o) const { return {field_, field_.sub(v_, check(o).v_)}; }
    FieldElement operator*(const FieldElement& o) const { return {field_, field_.mul(v_, check(o).v_)}; }
    FieldElement operator/(const FieldElement& o) const { return {field_, field_.div(v_, check(o).v_)}; }
    FieldElement operator-() const { return {field_, field_.neg(v_)}; }
    FieldElement inv() const { return {field_, field_.inv(v_)}; }
    FieldElement pow(std::int64_t e) const { return {field_, field_.pow(v_, e)}; }

    friend bool operator==(const FieldElement& a, const FieldElement& b)
    {
        return a.v_ == b.check(a).v_;
    }

private:
    const FieldElement& check(const FieldElement& o) const
    {
        if (!(field_ == o.field_)) throw std::invalid_argument("operands belong to different fields");
        return o;
    }

    FiniteField field_;
    Elem v_ = 0;
};

inline FieldElement FiniteField::element(Elem a) const { return FieldElement(*this, a); }
inline FieldElement FiniteField::operator()(std::int64_t n) const { return FieldElement(*this, fromInt(n)); }

/// Parses "w", "w^j" (powers of the primitive element) or a decimal integer
/// n (meaning n * 1). For extension fields integers must lie in [0, p) so that
/// a token never names anything outside the prime subfield by accident.
inline Elem parseToken(const FiniteField& F, std::string_view tok)
{
    auto bad = [&] { return std::invalid_argument("malformed field token '" + std::string(tok) + "'"); };
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
    if (tok.empty()) throw bad();
    if (tok.front() == 'w') {
        if (tok.size() == 1) return F.omegaPow(1);
        if (tok[1] != '^' || tok.size() < 3) throw bad();
        std::string_view e = tok.substr(2);
        if (e.size() >= 2 && e.front() == '{' && e.back() == '}') e = e.substr(1, e.size() - 2);
        std::int64_t j = 0;
        auto [ptr, ec] = std::from_chars(e.data(), e.data() + e.size(), j);
        if (ec != std::errc() || ptr != e.data() + e.size()) throw bad();
        return F.omegaPow(j);
    }
    std::int64_t n = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) throw bad();
    if (F.degree() > 1 && (n < 0 ? -n : n) >= static_cast<std::int64_t>(F.characteristic()))
        throw std::invalid_argument("integer token '" + std::string(tok) + "' is outside the prime subfield of " +
                                    F.name());
    return F.fromInt(n);
}

inline FieldElement elementFromToken(const FiniteField& F, std::string_view tok)
{
    return F.element(parseToken(F, tok));
}

/// Inverse of parseToken: integers for the prime subfield, "w^j" otherwise.
inline std::string elementToToken(const FiniteField& F, Elem a)
{
    if (F.inPrimeField(a)) return std::to_string(a);
    const auto l = *F.log(a);
    return l == 1 ? std::string("w") : "w^" + std::to_string(l);
}

/// Table of a field isomorphism from -> to: the class of x in from goes to
/// the smallest root (by code) of from's modulus in to.
inline std::vector<Elem> fieldIsomorphism(const FiniteField& from, const FiniteField& to)
{
    if (from.characteristic() != to.characteristic() || from.degree() != to.degree())
        throw std::invalid_argument("fields " + from.name() + " and " + to.name() + " are not isomorphic");
    const auto m = from.modulus();
    auto evalAt = [&](std::span<const std::uint32_t> c, Elem r) {
        Elem v = 0;
        for (std::size_t i = c.size(); i-- > 0;) v = to.add(to.mul(v, r), to.fromInt(c[i]));
        return v;
    };
    for (Elem r = 0; r < to.order(); ++r) {
        if (evalAt(m, r) != 0) continue;
        std::vector<Elem> map(from.order());
        for (Elem a = 0; a < from.order(); ++a) map[a] = evalAt(from.coeffs(a), r);
        return map;
    }
    throw std::logic_error("modulus has no root in the target field");
}

} // namespace arrfq
