#ifndef MOTIVIC_LSERIES_HPP
#define MOTIVIC_LSERIES_HPP

// Exact arithmetic over Z[L]: polynomials in the class L of the affine line,
// power series in t truncated at a fixed order, binomial product
// representations prod (1 - L^ell t^m)^s and bivariate polynomial identities.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <motivic/errors.hpp>

namespace motivic
{

class LPolynomial
{
public:
    LPolynomial() = default;
    explicit LPolynomial(std::vector<mpz_class> coeffs) : m_coeffs(std::move(coeffs))
    {
        normalize();
    }
    LPolynomial(std::initializer_list<long> coeffs) : m_coeffs(coeffs.begin(), coeffs.end()) { normalize(); }
    // Constant polynomial.
    LPolynomial(long c) : LPolynomial(std::vector<mpz_class>{mpz_class(c)}) {}
    LPolynomial(const mpz_class &c) : LPolynomial(std::vector<mpz_class>{c}) {}

    static LPolynomial monomial(const mpz_class &c, std::size_t power)
    {
        std::vector<mpz_class> v(power + 1);
        v[power] = c;
        return LPolynomial(std::move(v));
    }
    static LPolynomial L() { return monomial(1, 1); }

    const std::vector<mpz_class> &coeffs() const { return m_coeffs; }
    bool is_zero() const { return m_coeffs.empty(); }
    // -1 for the zero polynomial.
    long degree() const { return static_cast<long>(m_coeffs.size()) - 1; }
    bool is_constant() const { return m_coeffs.size() <= 1; }
    mpz_class coeff(std::size_t k) const { return k < m_coeffs.size() ? m_coeffs[k] : mpz_class(0); }
    mpz_class constant_term() const { return coeff(0); }

    // Number of nonzero terms.
    std::size_t term_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(m_coeffs.begin(), m_coeffs.end(), [](const mpz_class &c) { return c != 0; }));
    }

    mpz_class evaluate(const mpz_class &value) const
    {
        mpz_class acc = 0;
        for (auto it = m_coeffs.rbegin(); it != m_coeffs.rend(); ++it) {
            acc = acc * value + *it;
        }
        return acc;
    }

    LPolynomial &operator+=(const LPolynomial &o)
    {
        if (o.m_coeffs.size() > m_coeffs.size()) {
            m_coeffs.resize(o.m_coeffs.size());
        }
        for (std::size_t i = 0; i < o.m_coeffs.size(); ++i) {
            m_coeffs[i] += o.m_coeffs[i];
        }
        normalize();
        return *this;
    }
    LPolynomial &operator-=(const LPolynomial &o)
    {
        if (o.m_coeffs.size() > m_coeffs.size()) {
            m_coeffs.resize(o.m_coeffs.size());
        }
        for (std::size_t i = 0; i < o.m_coeffs.size(); ++i) {
            m_coeffs[i] -= o.m_coeffs[i];
        }
        normalize();
        return *this;
    }
    friend LPolynomial operator+(LPolynomial a, const LPolynomial &b) { return a += b; }
    friend LPolynomial operator-(LPolynomial a, const LPolynomial &b) { return a -= b; }
    friend LPolynomial operator-(LPolynomial a)
    {
        for (auto &c : a.m_coeffs) {
            c = -c;
        }
        return a;
    }
    friend LPolynomial operator*(const LPolynomial &a, const LPolynomial &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        std::vector<mpz_class> r(a.m_coeffs.size() + b.m_coeffs.size() - 1);
        for (std::size_t i = 0; i < a.m_coeffs.size(); ++i) {
            if (a.m_coeffs[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.m_coeffs.size(); ++j) {
                r[i + j] += a.m_coeffs[i] * b.m_coeffs[j];
            }
        }
        return LPolynomial(std::move(r));
    }
    LPolynomial &operator*=(const LPolynomial &o) { return *this = *this * o; }
    friend bool operator==(const LPolynomial &a, const LPolynomial &b) { return a.m_coeffs == b.m_coeffs; }
    friend bool operator!=(const LPolynomial &a, const LPolynomial &b) { return !(a == b); }

    // Multiplies by L^k.
    LPolynomial shifted(std::size_t k) const
    {
        if (is_zero()) {
            return {};
        }
        std::vector<mpz_class> r(k);
        r.insert(r.end(), m_coeffs.begin(), m_coeffs.end());
        return LPolynomial(std::move(r));
    }

    // "c0 + c1*L + c2*L^2 + ...", zero terms omitted, "0" for zero.
    std::string to_string() const
    {
        if (is_zero()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < m_coeffs.size(); ++k) {
            const mpz_class &c = m_coeffs[k];
            if (c == 0) {
                continue;
            }
            mpz_class mag = abs(c);
            if (first) {
                if (c < 0) {
                    os << '-';
                }
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            if (k == 0) {
                os << mag.get_str();
                continue;
            }
            if (mag != 1) {
                os << mag.get_str() << '*';
            }
            os << 'L';
            if (k > 1) {
                os << '^' << k;
            }
        }
        return os.str();
    }

private:
    void normalize()
    {
        while (!m_coeffs.empty() && m_coeffs.back() == 0) {
            m_coeffs.pop_back();
        }
    }

    std::vector<mpz_class> m_coeffs;
};

// Power series in t over Z[L], exact modulo t^(order+1).
class LSeries
{
public:
    explicit LSeries(std::size_t order = 0) : m_coeffs(order + 1) {}
    LSeries(std::size_t order, std::vector<LPolynomial> coeffs) : m_coeffs(std::move(coeffs))
    {
        m_coeffs.resize(order + 1);
    }

    static LSeries one(std::size_t order)
    {
        LSeries s(order);
        s.m_coeffs[0] = LPolynomial(1);
        return s;
    }

    std::size_t order() const { return m_coeffs.size() - 1; }
    const LPolynomial &operator[](std::size_t v) const { return m_coeffs[v]; }
    LPolynomial &operator[](std::size_t v) { return m_coeffs[v]; }
    const std::vector<LPolynomial> &coeffs() const { return m_coeffs; }

    LSeries truncated(std::size_t order) const
    {
        std::vector<LPolynomial> c(m_coeffs.begin(), m_coeffs.begin() + static_cast<std::ptrdiff_t>(std::min(order, this->order()) + 1));
        return LSeries(std::min(order, this->order()), std::move(c));
    }

    bool is_one() const
    {
        if (m_coeffs[0] != LPolynomial(1)) {
            return false;
        }
        return std::all_of(m_coeffs.begin() + 1, m_coeffs.end(), [](const LPolynomial &p) { return p.is_zero(); });
    }

    // True when every coefficient is constant in L.
    bool is_classical() const
    {
        return std::all_of(m_coeffs.begin(), m_coeffs.end(), [](const LPolynomial &p) { return p.is_constant(); });
    }

    friend LSeries operator+(const LSeries &a, const LSeries &b)
    {
        LSeries r(std::min(a.order(), b.order()));
        for (std::size_t v = 0; v <= r.order(); ++v) {
            r.m_coeffs[v] = a[v] + b[v];
        }
        return r;
    }
    friend LSeries operator-(const LSeries &a, const LSeries &b)
    {
        LSeries r(std::min(a.order(), b.order()));
        for (std::size_t v = 0; v <= r.order(); ++v) {
            r.m_coeffs[v] = a[v] - b[v];
        }
        return r;
    }
    friend LSeries operator*(const LSeries &a, const LSeries &b)
    {
        LSeries r(std::min(a.order(), b.order()));
        const std::size_t n = r.order();
        for (std::size_t i = 0; i <= n; ++i) {
            if (a[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; i + j <= n; ++j) {
                if (!b[j].is_zero()) {
                    r.m_coeffs[i + j] += a[i] * b[j];
                }
            }
        }
        return r;
    }
    friend bool operator==(const LSeries &a, const LSeries &b) { return a.m_coeffs == b.m_coeffs; }
    friend bool operator!=(const LSeries &a, const LSeries &b) { return !(a == b); }

    // In-place multiplication by (1 - L^ell t^m), m >= 1.
    void mul_binomial(std::size_t ell, std::size_t m)
    {
        for (std::size_t v = order(); v + 1 > m; --v) {
            m_coeffs[v] -= m_coeffs[v - m].shifted(ell);
            if (v == m) {
                break;
            }
        }
    }
    // In-place division by (1 - L^ell t^m), m >= 1.
    void div_binomial(std::size_t ell, std::size_t m)
    {
        for (std::size_t v = m; v <= order(); ++v) {
            m_coeffs[v] += m_coeffs[v - m].shifted(ell);
        }
    }

    // One "v: <coefficient>" line per exponent.
    std::string to_string() const
    {
        std::ostringstream os;
        for (std::size_t v = 0; v <= order(); ++v) {
            os << v << ": " << m_coeffs[v].to_string() << '\n';
        }
        return os.str();
    }

private:
    std::vector<LPolynomial> m_coeffs;
};

struct BinomialFactor {
    std::size_t ell = 0; // exponent of L
    std::size_t m = 1;   // exponent of t
    long s = 0;          // multiplicity
    friend bool operator==(const BinomialFactor &, const BinomialFactor &) = default;
};

// prod (1 - L^ell t^m)^s with distinct (ell, m) pairs and nonzero s, kept
// sorted by (m, ell).
class BinomialFactorization
{
public:
    BinomialFactorization() = default;
    BinomialFactorization(std::initializer_list<BinomialFactor> fs)
    {
        for (const auto &f : fs) {
            add(f.ell, f.m, f.s);
        }
    }

    // Multiplies in (1 - L^ell t^m)^s, merging with an existing factor.
    void add(std::size_t ell, std::size_t m, long s)
    {
        if (m == 0) {
            throw invalid_input("binomial factor needs a positive t-exponent");
        }
        if (s == 0) {
            return;
        }
        auto it = std::lower_bound(m_factors.begin(), m_factors.end(), std::pair{m, ell},
                                   [](const BinomialFactor &f, const std::pair<std::size_t, std::size_t> &k) {
                                       return std::pair{f.m, f.ell} < k;
                                   });
        if (it != m_factors.end() && it->m == m && it->ell == ell) {
            it->s += s;
            if (it->s == 0) {
                m_factors.erase(it);
            }
            return;
        }
        m_factors.insert(it, BinomialFactor{ell, m, s});
    }

    const std::vector<BinomialFactor> &factors() const { return m_factors; }
    bool empty() const { return m_factors.empty(); }
    friend bool operator==(const BinomialFactorization &, const BinomialFactorization &) = default;

    // Same factors with every L-exponent replaced by 0.
    BinomialFactorization classical_shadow() const
    {
        BinomialFactorization r;
        for (const auto &f : m_factors) {
            r.add(0, f.m, f.s);
        }
        return r;
    }

private:
    std::vector<BinomialFactor> m_factors;
};

// 1 + L + ... + L^(a-1); zero for a = 0.
inline LPolynomial geometric_sum(std::size_t a)
{
    return LPolynomial(std::vector<mpz_class>(a, mpz_class(1)));
}

// sum over I subset {1..r} of (-1)^#I * geometric_sum(dims[I]). Subsets are
// bitmasks (bit i-1 set <=> i in I); every one of the 2^r masks must be
// present and dims must not grow when a subset is enlarged.
inline LPolynomial chi_g_inclusion_exclusion(unsigned r, const std::map<std::uint32_t, std::size_t> &dims)
{
    if (r >= 31) {
        throw invalid_input("too many valuations");
    }
    const std::uint32_t full = (std::uint32_t{1} << r);
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        if (!dims.contains(mask)) {
            throw invalid_input("dimension missing for subset mask " + std::to_string(mask));
        }
    }
    for (const auto &[mask, d] : dims) {
        if (mask >= full) {
            throw invalid_input("subset mask " + std::to_string(mask) + " outside the index set");
        }
        for (unsigned i = 0; i < r; ++i) {
            const std::uint32_t bigger = mask | (std::uint32_t{1} << i);
            if (bigger != mask && dims.at(bigger) > d) {
                throw invalid_input("dimensions are not monotone under inclusion");
            }
        }
    }
    LPolynomial acc;
    for (const auto &[mask, d] : dims) {
        if (std::popcount(mask) % 2 == 0) {
            acc += geometric_sum(d);
        } else {
            acc -= geometric_sum(d);
        }
    }
    return acc;
}

inline LSeries expand_binomial_product(const BinomialFactorization &f, std::size_t order)
{
    LSeries r = LSeries::one(order);
    for (const auto &b : f.factors()) {
        if (b.m == 0) {
            throw invalid_input("division by a non-unit binomial");
        }
        if (b.m > order) {
            continue;
        }
        for (long k = 0; k < std::abs(b.s); ++k) {
            if (b.s > 0) {
                r.mul_binomial(b.ell, b.m);
            } else {
                r.div_binomial(b.ell, b.m);
            }
        }
    }
    return r;
}

// Greedy lowest-degree-first peeling into binomial factors. Each nonzero term
// c*L^ell*t^m of the lowest nonconstant degree is removed by the factor
// (1 - L^ell t^m)^(-c); factors touching degree m only through that term,
// all terms of one degree are peeled in one sweep.
inline BinomialFactorization peel_binomial_factorization(const LSeries &series)
{
    if (series[0] != LPolynomial(1)) {
        throw invalid_input("not binomial-representable: constant term is " + series[0].to_string());
    }
    BinomialFactorization out;
    LSeries rest = series;
    for (std::size_t m = 1; m <= rest.order(); ++m) {
        const LPolynomial lead = rest[m];
        for (std::size_t ell = 0; ell < lead.coeffs().size(); ++ell) {
            const mpz_class &c = lead.coeffs()[ell];
            if (c == 0) {
                continue;
            }
            if (!c.fits_slong_p()) {
                throw resource_error("peeled multiplicity does not fit a machine integer");
            }
            const long cl = c.get_si();
            out.add(ell, m, -cl);
            for (long k = 0; k < std::abs(cl); ++k) {
                if (cl > 0) {
                    rest.mul_binomial(ell, m);
                } else {
                    rest.div_binomial(ell, m);
                }
            }
        }
        if (!rest[m].is_zero()) {
            throw internal_error("peeling left a residual term at degree " + std::to_string(m));
        }
    }
    return out;
}

// Replaces every coefficient a_v of a classical series by 1 + L + ... + L^(a_v - 1).
inline LSeries coefficientwise_generalize(const LSeries &classical)
{
    LSeries r(classical.order());
    for (std::size_t v = 0; v <= classical.order(); ++v) {
        const LPolynomial &a = classical[v];
        if (!a.is_constant() || a.constant_term() < 0) {
            throw invalid_input("not a classical series: coefficient of t^" + std::to_string(v) + " is " + a.to_string());
        }
        if (!a.constant_term().fits_ulong_p()) {
            throw resource_error("coefficient too large to generalize");
        }
        r[v] = geometric_sum(a.constant_term().get_ui());
    }
    return r;
}

inline LSeries specialize_L(const LSeries &series, const mpz_class &value)
{
    LSeries r(series.order());
    for (std::size_t v = 0; v <= series.order(); ++v) {
        r[v] = LPolynomial(series[v].evaluate(value));
    }
    return r;
}

namespace detail
{

inline std::string binomial_string(const BinomialFactor &f)
{
    std::ostringstream os;
    os << "(1 - ";
    if (f.ell > 0) {
        os << 'L';
        if (f.ell > 1) {
            os << '^' << f.ell;
        }
        os << '*';
    }
    os << 't';
    if (f.m > 1) {
        os << '^' << f.m;
    }
    os << ')';
    const long mult = std::abs(f.s);
    if (mult > 1) {
        os << '^' << mult;
    }
    return os.str();
}

} // namespace detail

// "(1 - t^12)(1 - t^26) / ((1 - t^4)(1 - L*t^26))"; numerator and
// denominator each ordered by (m, ell).
inline std::string render_factored(const BinomialFactorization &f)
{
    std::string num;
    std::string den;
    std::size_t den_count = 0;
    for (const auto &b : f.factors()) {
        if (b.s > 0) {
            num += detail::binomial_string(b);
        } else {
            den += detail::binomial_string(b);
            ++den_count;
        }
    }
    if (num.empty()) {
        num = "1";
    }
    if (den_count == 0) {
        return num;
    }
    if (den_count == 1) {
        return num + " / " + den;
    }
    return num + " / (" + den + ")";
}

// Polynomial in t1, t2 over Z[L].
class BivarPolynomial
{
public:
    using key_type = std::pair<std::size_t, std::size_t>;

    BivarPolynomial() = default;
    BivarPolynomial(std::initializer_list<std::pair<const key_type, LPolynomial>> terms)
    {
        for (const auto &[k, c] : terms) {
            add_term(k.first, k.second, c);
        }
    }

    static BivarPolynomial constant(const LPolynomial &c)
    {
        BivarPolynomial p;
        p.add_term(0, 0, c);
        return p;
    }

    void add_term(std::size_t d1, std::size_t d2, const LPolynomial &c)
    {
        auto &slot = m_terms[{d1, d2}];
        slot += c;
        if (slot.is_zero()) {
            m_terms.erase({d1, d2});
        }
    }

    const std::map<key_type, LPolynomial> &terms() const { return m_terms; }

    friend BivarPolynomial operator+(BivarPolynomial a, const BivarPolynomial &b)
    {
        for (const auto &[k, c] : b.m_terms) {
            a.add_term(k.first, k.second, c);
        }
        return a;
    }
    friend BivarPolynomial operator-(BivarPolynomial a, const BivarPolynomial &b)
    {
        for (const auto &[k, c] : b.m_terms) {
            a.add_term(k.first, k.second, -c);
        }
        return a;
    }
    friend BivarPolynomial operator*(const BivarPolynomial &a, const BivarPolynomial &b)
    {
        BivarPolynomial r;
        for (const auto &[ka, ca] : a.m_terms) {
            for (const auto &[kb, cb] : b.m_terms) {
                r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
            }
        }
        return r;
    }
    friend bool operator==(const BivarPolynomial &a, const BivarPolynomial &b) { return a.m_terms == b.m_terms; }

private:
    std::map<key_type, LPolynomial> m_terms;
};

inline bool bivar_identity_check(const BivarPolynomial &lhs, const BivarPolynomial &rhs)
{
    return lhs == rhs;
}

} // namespace motivic

#endif
