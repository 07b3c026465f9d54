#ifndef MOTIVIC_NUMFIELD_HPP
#define MOTIVIC_NUMFIELD_HPP

// Exact arithmetic in Q(alpha) = Q[x]/(minpoly), with a user supplied and
// verified list of automorphisms, plus rational functions in one
// transcendental parameter c over such a field.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <motivic/errors.hpp>

namespace motivic
{

// Dense univariate polynomial over Q, ascending coefficients, no trailing zeros.
using RatPoly = std::vector<mpq_class>;

namespace qpoly
{

inline void trim(RatPoly &p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

inline long degree(const RatPoly &p) { return static_cast<long>(p.size()) - 1; }

inline RatPoly add(const RatPoly &a, const RatPoly &b)
{
    RatPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] += a[i];
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        r[i] += b[i];
    }
    trim(r);
    return r;
}

inline RatPoly scale(const RatPoly &a, const mpq_class &s)
{
    if (s == 0) {
        return {};
    }
    RatPoly r(a);
    for (auto &c : r) {
        c *= s;
    }
    return r;
}

inline RatPoly sub(const RatPoly &a, const RatPoly &b) { return add(a, scale(b, -1)); }

inline RatPoly mul(const RatPoly &a, const RatPoly &b)
{
    if (a.empty() || b.empty()) {
        return {};
    }
    RatPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    trim(r);
    return r;
}

// Returns {quotient, remainder}; b must be nonzero.
inline std::pair<RatPoly, RatPoly> divmod(const RatPoly &a, const RatPoly &b)
{
    if (b.empty()) {
        throw invalid_input("polynomial division by zero");
    }
    RatPoly rem(a);
    trim(rem);
    if (rem.size() < b.size()) {
        return {{}, rem};
    }
    RatPoly q(rem.size() - b.size() + 1);
    const mpq_class &lead = b.back();
    for (std::size_t shift = q.size(); shift-- > 0;) {
        const mpq_class f = rem[shift + b.size() - 1] / lead;
        q[shift] = f;
        if (f != 0) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                rem[shift + j] -= f * b[j];
            }
        }
    }
    trim(q);
    trim(rem);
    return {q, rem};
}

inline RatPoly mod(const RatPoly &a, const RatPoly &b) { return divmod(a, b).second; }

inline RatPoly monic(const RatPoly &a)
{
    if (a.empty()) {
        return a;
    }
    return scale(a, 1 / a.back());
}

inline RatPoly gcd(RatPoly a, RatPoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        RatPoly r = mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

inline RatPoly derivative(const RatPoly &a)
{
    if (a.size() <= 1) {
        return {};
    }
    RatPoly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) {
        r[i - 1] = a[i] * static_cast<long>(i);
    }
    trim(r);
    return r;
}

inline mpq_class evaluate(const RatPoly &a, const mpq_class &x)
{
    mpq_class acc = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

// Positive divisors of |n| (n != 0) by trial division.
inline std::vector<mpz_class> divisors(mpz_class n)
{
    n = abs(n);
    std::vector<mpz_class> small;
    std::vector<mpz_class> large;
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d * d != n) {
                large.push_back(n / d);
            }
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline bool has_rational_root(const RatPoly &p)
{
    if (p.empty()) {
        return true;
    }
    if (p[0] == 0) {
        return true;
    }
    mpz_class den = 1;
    for (const auto &c : p) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    std::vector<mpz_class> ints;
    for (const auto &c : p) {
        mpq_class s = c * den;
        ints.push_back(s.get_num());
    }
    for (const auto &num : divisors(ints.front())) {
        for (const auto &dd : divisors(ints.back())) {
            for (int sign : {1, -1}) {
                mpq_class x(sign * num, dd);
                x.canonicalize();
                if (evaluate(p, x) == 0) {
                    return true;
                }
            }
        }
    }
    return false;
}

} // namespace qpoly

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

class NumberField
{
public:
    const RatPoly &minpoly() const { return m_minpoly; }
    std::size_t degree() const { return m_minpoly.size() - 1; }
    // Automorphism k sends alpha to automorphisms()[k](alpha); index 0 is the identity.
    const std::vector<RatPoly> &automorphisms() const { return m_autos; }
    std::size_t group_order() const { return m_autos.size(); }
    // Column j of images()[k] holds the coordinates of sigma_k(alpha^j).
    const std::vector<std::vector<RatPoly>> &images() const { return m_images; }
    // compose(i, j) = index of sigma_i o sigma_j.
    std::size_t compose(std::size_t i, std::size_t j) const { return m_table[i][j]; }
    bool is_rational() const { return degree() == 1; }

    RatPoly reduce(const RatPoly &p) const
    {
        RatPoly r = qpoly::mod(p, m_minpoly);
        r.resize(degree());
        return r;
    }

private:
    friend FieldPtr make_field(RatPoly minpoly, std::vector<RatPoly> automorphisms);
    NumberField() = default;

    RatPoly m_minpoly;
    std::vector<RatPoly> m_autos;
    std::vector<std::vector<RatPoly>> m_images;
    std::vector<std::vector<std::size_t>> m_table;
};

// Validates the presentation eagerly: monic minimal polynomial that is
// squarefree and, in degree >= 2, has no rational root; every automorphism
// maps alpha to a root of minpoly; the list is closed under composition and
// contains the identity. Irreducibility beyond these checks is the caller's
// contract. An empty automorphism list means {identity}.
inline FieldPtr make_field(RatPoly minpoly, std::vector<RatPoly> automorphisms)
{
    qpoly::trim(minpoly);
    if (minpoly.size() < 2) {
        throw invalid_input("minimal polynomial must have degree >= 1");
    }
    if (minpoly.back() != 1) {
        throw invalid_input("minimal polynomial must be monic");
    }
    const std::size_t d = minpoly.size() - 1;
    if (qpoly::degree(qpoly::gcd(minpoly, qpoly::derivative(minpoly))) > 0) {
        throw invalid_input("minimal polynomial is not squarefree");
    }
    if (d >= 2 && qpoly::has_rational_root(minpoly)) {
        throw invalid_input("minimal polynomial has a rational root");
    }
    auto field = std::shared_ptr<NumberField>(new NumberField());
    field->m_minpoly = minpoly;

    const RatPoly identity = field->reduce(RatPoly{0, 1});
    if (automorphisms.empty()) {
        automorphisms.push_back(identity);
    }
    std::vector<RatPoly> autos;
    for (auto &p : automorphisms) {
        qpoly::trim(p);
        RatPoly r = field->reduce(p);
        // minpoly(p(alpha)) must vanish in the field.
        RatPoly acc;
        for (auto it = minpoly.rbegin(); it != minpoly.rend(); ++it) {
            acc = field->reduce(qpoly::add(qpoly::mul(acc, r), RatPoly{*it}));
        }
        qpoly::trim(acc);
        if (!acc.empty()) {
            throw invalid_input("automorphism image is not a root of the minimal polynomial");
        }
        if (std::find(autos.begin(), autos.end(), r) != autos.end()) {
            throw invalid_input("duplicate automorphism");
        }
        autos.push_back(r);
    }
    auto id_it = std::find(autos.begin(), autos.end(), identity);
    if (id_it == autos.end()) {
        throw invalid_input("automorphism list does not contain the identity");
    }
    std::iter_swap(autos.begin(), id_it);
    field->m_autos = autos;

    // images of the power basis
    for (const auto &p : autos) {
        std::vector<RatPoly> cols;
        RatPoly power = field->reduce(RatPoly{1});
        for (std::size_t j = 0; j < d; ++j) {
            cols.push_back(power);
            power = field->reduce(qpoly::mul(power, p));
        }
        field->m_images.push_back(std::move(cols));
    }
    // composition table: sigma_i(sigma_j(alpha)) = p_j evaluated at p_i(alpha)
    const std::size_t n = autos.size();
    field->m_table.assign(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            RatPoly img(d);
            for (std::size_t k = 0; k < d; ++k) {
                for (std::size_t l = 0; l < d; ++l) {
                    img[l] += autos[j][k] * field->m_images[i][k][l];
                }
            }
            auto it = std::find(autos.begin(), autos.end(), img);
            if (it == autos.end()) {
                throw invalid_input("automorphism list is not closed under composition");
            }
            field->m_table[i][j] = static_cast<std::size_t>(it - autos.begin());
        }
    }
    return field;
}

inline FieldPtr rational_field()
{
    static const FieldPtr q = make_field(RatPoly{0, 1}, {});
    return q;
}

class FieldElement
{
public:
    FieldElement() = default;
    FieldElement(FieldPtr field, const mpq_class &value) : m_field(std::move(field)), m_coords(m_field->degree())
    {
        m_coords[0] = value;
    }
    FieldElement(FieldPtr field, RatPoly coords) : m_field(std::move(field)), m_coords(m_field->reduce(coords)) {}

    static FieldElement generator(const FieldPtr &field) { return FieldElement(field, RatPoly{0, 1}); }

    const FieldPtr &field() const { return m_field; }
    const RatPoly &coords() const { return m_coords; }
    bool is_zero() const
    {
        return std::all_of(m_coords.begin(), m_coords.end(), [](const mpq_class &c) { return c == 0; });
    }
    bool is_rational() const
    {
        return std::all_of(m_coords.begin() + 1, m_coords.end(), [](const mpq_class &c) { return c == 0; });
    }

    FieldElement &operator+=(const FieldElement &o)
    {
        check(o);
        for (std::size_t i = 0; i < m_coords.size(); ++i) {
            m_coords[i] += o.m_coords[i];
        }
        return *this;
    }
    FieldElement &operator-=(const FieldElement &o)
    {
        check(o);
        for (std::size_t i = 0; i < m_coords.size(); ++i) {
            m_coords[i] -= o.m_coords[i];
        }
        return *this;
    }
    friend FieldElement operator+(FieldElement a, const FieldElement &b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement &b) { return a -= b; }
    friend FieldElement operator-(FieldElement a)
    {
        for (auto &c : a.m_coords) {
            c = -c;
        }
        return a;
    }
    friend FieldElement operator*(const FieldElement &a, const FieldElement &b)
    {
        a.check(b);
        if (a.m_field->degree() == 1) {
            return FieldElement(a.m_field, a.m_coords[0] * b.m_coords[0]);
        }
        return FieldElement(a.m_field, qpoly::mul(a.m_coords, b.m_coords));
    }
    FieldElement &operator*=(const FieldElement &o) { return *this = *this * o; }
    friend FieldElement operator*(const mpq_class &s, FieldElement a)
    {
        for (auto &c : a.m_coords) {
            c *= s;
        }
        return a;
    }

    FieldElement inverse() const
    {
        if (is_zero()) {
            throw invalid_input("inverse of zero field element");
        }
        if (m_field->degree() == 1) {
            return FieldElement(m_field, 1 / m_coords[0]);
        }
        // extended Euclid: u*a + v*f = 1
        RatPoly r0 = m_field->minpoly(), r1 = m_coords;
        qpoly::trim(r1);
        RatPoly u0, u1{1};
        while (qpoly::degree(r1) > 0) {
            auto [q, r] = qpoly::divmod(r0, r1);
            RatPoly u = qpoly::sub(u0, qpoly::mul(q, u1));
            r0 = std::move(r1);
            r1 = std::move(r);
            u0 = std::move(u1);
            u1 = std::move(u);
        }
        if (r1.empty()) {
            throw internal_error("field element shares a factor with the minimal polynomial");
        }
        return FieldElement(m_field, qpoly::scale(u1, 1 / r1[0]));
    }
    friend FieldElement operator/(const FieldElement &a, const FieldElement &b) { return a * b.inverse(); }

    // Integer power; negative exponents invert.
    FieldElement pow(long e) const
    {
        FieldElement base = e < 0 ? inverse() : *this;
        unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
        FieldElement acc(m_field, mpq_class(1));
        while (k > 0) {
            if (k & 1UL) {
                acc *= base;
            }
            base *= base;
            k >>= 1;
        }
        return acc;
    }

    friend bool operator==(const FieldElement &a, const FieldElement &b)
    {
        return a.m_field == b.m_field && a.m_coords == b.m_coords;
    }
    friend bool operator!=(const FieldElement &a, const FieldElement &b) { return !(a == b); }

private:
    void check(const FieldElement &o) const
    {
        if (m_field != o.m_field) {
            throw invalid_input("field elements from different fields");
        }
    }

    FieldPtr m_field;
    RatPoly m_coords;
};

inline FieldElement apply_automorphism(std::size_t g, const FieldElement &e)
{
    const auto &field = e.field();
    if (g >= field->group_order()) {
        throw invalid_input("automorphism index out of range");
    }
    const auto &cols = field->images()[g];
    RatPoly out(field->degree());
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (e.coords()[j] == 0) {
            continue;
        }
        for (std::size_t l = 0; l < out.size(); ++l) {
            out[l] += e.coords()[j] * cols[j][l];
        }
    }
    return FieldElement(field, out);
}

inline RatPoly as_q_vector(const FieldElement &e) { return e.coords(); }

// Polynomial in the transcendental c with coefficients in a number field,
// ascending, no trailing zeros.
class CPoly
{
public:
    CPoly() = default;
    explicit CPoly(std::vector<FieldElement> coeffs) : m_coeffs(std::move(coeffs)) { trim(); }
    explicit CPoly(const FieldElement &constant) : CPoly(std::vector<FieldElement>{constant}) {}

    const std::vector<FieldElement> &coeffs() const { return m_coeffs; }
    bool is_zero() const { return m_coeffs.empty(); }
    long degree() const { return static_cast<long>(m_coeffs.size()) - 1; }

    friend CPoly operator+(const CPoly &a, const CPoly &b)
    {
        std::vector<FieldElement> r = a.m_coeffs.size() >= b.m_coeffs.size() ? a.m_coeffs : b.m_coeffs;
        const auto &small = a.m_coeffs.size() >= b.m_coeffs.size() ? b.m_coeffs : a.m_coeffs;
        for (std::size_t i = 0; i < small.size(); ++i) {
            r[i] += small[i];
        }
        return CPoly(std::move(r));
    }
    friend CPoly operator-(const CPoly &a)
    {
        std::vector<FieldElement> r = a.m_coeffs;
        for (auto &c : r) {
            c = -c;
        }
        return CPoly(std::move(r));
    }
    friend CPoly operator-(const CPoly &a, const CPoly &b) { return a + (-b); }
    friend CPoly operator*(const CPoly &a, const CPoly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        const FieldElement zero(a.m_coeffs[0].field(), mpq_class(0));
        std::vector<FieldElement> r(a.m_coeffs.size() + b.m_coeffs.size() - 1, zero);
        for (std::size_t i = 0; i < a.m_coeffs.size(); ++i) {
            if (a.m_coeffs[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < b.m_coeffs.size(); ++j) {
                r[i + j] += a.m_coeffs[i] * b.m_coeffs[j];
            }
        }
        return CPoly(std::move(r));
    }
    friend bool operator==(const CPoly &a, const CPoly &b) { return a.m_coeffs == b.m_coeffs; }

    FieldElement evaluate(const FieldPtr &field, const mpq_class &c) const
    {
        FieldElement acc(field, mpq_class(0));
        const FieldElement x(field, c);
        for (auto it = m_coeffs.rbegin(); it != m_coeffs.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    }

private:
    void trim()
    {
        while (!m_coeffs.empty() && m_coeffs.back().is_zero()) {
            m_coeffs.pop_back();
        }
    }

    std::vector<FieldElement> m_coeffs;
};

// Element of K(c): numerator / denominator with a nonzero denominator.
// Fractions are not reduced; equality is decided by cross-multiplication.
class ParamElement
{
public:
    ParamElement(CPoly num, CPoly den) : m_num(std::move(num)), m_den(std::move(den))
    {
        if (m_den.is_zero()) {
            throw invalid_input("zero denominator in parametric element");
        }
    }
    ParamElement(const FieldPtr &field, const CPoly &num) : ParamElement(num, CPoly(FieldElement(field, mpq_class(1)))) {}

    static ParamElement parameter(const FieldPtr &field)
    {
        return ParamElement(field, CPoly({FieldElement(field, mpq_class(0)), FieldElement(field, mpq_class(1))}));
    }

    const CPoly &numerator() const { return m_num; }
    const CPoly &denominator() const { return m_den; }
    bool is_zero() const { return m_num.is_zero(); }

    friend ParamElement operator+(const ParamElement &a, const ParamElement &b)
    {
        return ParamElement(a.m_num * b.m_den + b.m_num * a.m_den, a.m_den * b.m_den);
    }
    friend ParamElement operator-(const ParamElement &a, const ParamElement &b)
    {
        return ParamElement(a.m_num * b.m_den - b.m_num * a.m_den, a.m_den * b.m_den);
    }
    friend ParamElement operator*(const ParamElement &a, const ParamElement &b)
    {
        return ParamElement(a.m_num * b.m_num, a.m_den * b.m_den);
    }
    ParamElement inverse() const
    {
        if (is_zero()) {
            throw invalid_input("inverse of zero parametric element");
        }
        return ParamElement(m_den, m_num);
    }
    friend ParamElement operator/(const ParamElement &a, const ParamElement &b) { return a * b.inverse(); }
    friend bool operator==(const ParamElement &a, const ParamElement &b)
    {
        return a.m_num * b.m_den == b.m_num * a.m_den;
    }

    // Substitutes c = value; the denominator must not vanish there.
    FieldElement substitute(const FieldPtr &field, const mpq_class &value) const
    {
        const FieldElement den = m_den.evaluate(field, value);
        if (den.is_zero()) {
            throw invalid_input("denominator vanishes at the substituted value");
        }
        return m_num.evaluate(field, value) / den;
    }

private:
    CPoly m_num;
    CPoly m_den;
};

} // namespace motivic

#endif
