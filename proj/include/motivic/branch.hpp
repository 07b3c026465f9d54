#ifndef MOTIVIC_BRANCH_HPP
#define MOTIVIC_BRANCH_HPP

// Plane branches given by a Puiseux parametrization x = tau^m,
// y = sum c_i tau^i over a number field: characteristic data, curve
// valuations, contact orders, intersection multiplicities and curvettes at
// the vertices of the minimal resolution trunk.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <motivic/errors.hpp>
#include <motivic/numfield.hpp>

namespace motivic
{

struct YTerm {
    long exponent;
    FieldElement coeff;
};

class PuiseuxBranch
{
public:
    PuiseuxBranch(FieldPtr field, long m, std::vector<YTerm> terms)
        : m_field(std::move(field)), m_m(m), m_terms(std::move(terms))
    {
        if (m_m < 1) {
            throw invalid_input("x exponent must be positive");
        }
        long g = m_m;
        for (std::size_t i = 0; i < m_terms.size(); ++i) {
            const auto &t = m_terms[i];
            if (t.coeff.field() != m_field) {
                throw invalid_input("y coefficient from a different field");
            }
            if (t.coeff.is_zero()) {
                throw invalid_input("zero y coefficient listed");
            }
            if (t.exponent < m_m) {
                throw invalid_input("y exponents must be >= the x exponent");
            }
            if (i > 0 && t.exponent <= m_terms[i - 1].exponent) {
                throw invalid_input("y exponents must be strictly increasing");
            }
            g = std::gcd(g, t.exponent);
        }
        if (g != 1) {
            throw invalid_input("parametrization is not primitive (gcd of exponents is " + std::to_string(g) + ")");
        }
    }

    const FieldPtr &field() const { return m_field; }
    long m() const { return m_m; }
    const std::vector<YTerm> &terms() const { return m_terms; }
    long max_exponent() const { return m_terms.empty() ? 0 : m_terms.back().exponent; }
    long y_order() const { return m_terms.empty() ? 0 : m_terms.front().exponent; }

    FieldElement coeff(long exponent) const
    {
        for (const auto &t : m_terms) {
            if (t.exponent == exponent) {
                return t.coeff;
            }
        }
        return FieldElement(m_field, mpq_class(0));
    }

    // Coefficientwise action of automorphism g.
    PuiseuxBranch conjugate(std::size_t g) const
    {
        std::vector<YTerm> terms;
        for (const auto &t : m_terms) {
            terms.push_back({t.exponent, apply_automorphism(g, t.coeff)});
        }
        return PuiseuxBranch(m_field, m_m, std::move(terms));
    }

    // True when every y coefficient is rational.
    bool is_rational() const
    {
        for (const auto &t : m_terms) {
            if (!t.coeff.is_rational()) {
                return false;
            }
        }
        return true;
    }

private:
    FieldPtr m_field;
    long m_m;
    std::vector<YTerm> m_terms;
};

struct CharData {
    std::vector<long> char_exponents; // beta_0 = m < beta_1 < ... < beta_g
    std::vector<long> e;              // e_0 = m, e_i = gcd(e_{i-1}, beta_i)
    std::vector<long> n;              // n_i = e_{i-1}/e_i, stored from i = 1 (n[0] unused, = 1)
    std::vector<long> semigroup;      // semigroup generators bar beta_0 ... bar beta_g
    std::size_t g = 0;

    long m_sigma(std::size_t i) const { return semigroup.at(i); }
    long m_tau(std::size_t i) const { return n.at(i) * semigroup.at(i); }
};

inline CharData char_data(const PuiseuxBranch &b)
{
    CharData cd;
    cd.char_exponents.push_back(b.m());
    cd.e.push_back(b.m());
    cd.n.push_back(1);
    cd.semigroup.push_back(b.m());
    for (const auto &t : b.terms()) {
        const long e = cd.e.back();
        if (e == 1) {
            break;
        }
        const long ne = std::gcd(e, t.exponent);
        if (ne == e) {
            continue;
        }
        const std::size_t i = cd.char_exponents.size();
        cd.char_exponents.push_back(t.exponent);
        cd.e.push_back(ne);
        cd.n.push_back(e / ne);
        if (i == 1) {
            cd.semigroup.push_back(t.exponent);
        } else {
            cd.semigroup.push_back(cd.n[i - 1] * cd.semigroup[i - 1] + t.exponent - cd.char_exponents[i - 1]);
        }
    }
    cd.g = cd.char_exponents.size() - 1;
    return cd;
}

// Polynomial in tau over a number field, dense ascending.
using TauPoly = std::vector<FieldElement>;

namespace tau
{

inline TauPoly zero(const FieldPtr &f, std::size_t len) { return TauPoly(len, FieldElement(f, mpq_class(0))); }

// Product modulo tau^len.
inline TauPoly mul(const TauPoly &a, const TauPoly &b, std::size_t len)
{
    TauPoly r = zero(a.empty() ? b.front().field() : a.front().field(), len);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) {
            if (!b[j].is_zero()) {
                r[i + j] += a[i] * b[j];
            }
        }
    }
    return r;
}

inline void add_into(TauPoly &acc, const TauPoly &a)
{
    for (std::size_t i = 0; i < a.size() && i < acc.size(); ++i) {
        acc[i] += a[i];
    }
}

// Index of the first nonzero coefficient, or nullopt.
inline std::optional<std::size_t> order(const TauPoly &a)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_zero()) {
            return i;
        }
    }
    return std::nullopt;
}

// y(tau) of a branch modulo tau^len.
inline TauPoly y_series(const PuiseuxBranch &b, std::size_t len)
{
    TauPoly y = zero(b.field(), len);
    for (const auto &t : b.terms()) {
        if (static_cast<std::size_t>(t.exponent) < len) {
            y[static_cast<std::size_t>(t.exponent)] = t.coeff;
        }
    }
    return y;
}

} // namespace tau

// Polynomial in x, y with number field coefficients: (a, b) -> coefficient of x^a y^b.
using FieldBivar = std::map<std::pair<long, long>, FieldElement>;

struct ValuationResult {
    enum class Kind { finite, infinite, exceeds_cap };
    Kind kind = Kind::finite;
    long value = 0;

    static ValuationResult finite(long v) { return {Kind::finite, v}; }
    static ValuationResult infinite() { return {Kind::infinite, 0}; }
    static ValuationResult exceeds(long cap) { return {Kind::exceeds_cap, cap}; }
    bool is_finite() const { return kind == Kind::finite; }
    friend bool operator==(const ValuationResult &, const ValuationResult &) = default;
};

inline constexpr long default_hard_cap = 1L << 14;

// Truncation cap used by intersection_multiplicity when none is passed;
// per thread, so callers deep inside orbit computations pick it up.
inline long &truncation_cap()
{
    thread_local long cap = default_hard_cap;
    return cap;
}

// ord_tau f(x(tau), y(tau)). The substitution is computed modulo
// tau^(cap+1); a vanishing result is reported as +infinity only when every
// monomial of f has tau-degree <= cap (then the substitution is exact),
// otherwise as exceeding the cap.
inline ValuationResult valuation_of(const FieldBivar &f, const PuiseuxBranch &b, long cap = default_hard_cap)
{
    if (cap < 0) {
        throw invalid_input("negative cap");
    }
    long full_degree = 0;
    long max_a = 0, max_b = 0;
    for (const auto &[k, c] : f) {
        if (c.field() != b.field()) {
            throw invalid_input("polynomial and branch over different fields");
        }
        if (k.first < 0 || k.second < 0) {
            throw invalid_input("negative exponent in polynomial");
        }
        if (c.is_zero()) {
            continue;
        }
        full_degree = std::max(full_degree, k.first * b.m() + k.second * b.max_exponent());
        max_a = std::max(max_a, k.first);
        max_b = std::max(max_b, k.second);
    }
    const std::size_t len = static_cast<std::size_t>(std::min(cap, full_degree) + 1);
    const auto &field = b.field();
    // powers of y modulo tau^len
    std::vector<TauPoly> ypow;
    TauPoly one = tau::zero(field, len);
    one[0] = FieldElement(field, mpq_class(1));
    ypow.push_back(one);
    const TauPoly y = tau::y_series(b, len);
    for (long k = 1; k <= max_b; ++k) {
        ypow.push_back(tau::mul(ypow.back(), y, len));
    }
    TauPoly acc = tau::zero(field, len);
    for (const auto &[k, c] : f) {
        if (c.is_zero()) {
            continue;
        }
        const std::size_t shift = static_cast<std::size_t>(k.first * b.m());
        const TauPoly &yp = ypow[static_cast<std::size_t>(k.second)];
        for (std::size_t i = 0; i + shift < len; ++i) {
            if (!yp[i].is_zero()) {
                acc[i + shift] += c * yp[i];
            }
        }
    }
    if (const auto o = tau::order(acc)) {
        return ValuationResult::finite(static_cast<long>(*o));
    }
    if (full_degree <= cap) {
        return ValuationResult::infinite();
    }
    return ValuationResult::exceeds(cap);
}

namespace detail
{

// Solves u*a + v*b = gcd(a, b).
inline long ext_gcd(long a, long b, long &u, long &v)
{
    if (b == 0) {
        u = 1;
        v = 0;
        return a;
    }
    long u1 = 0, v1 = 0;
    const long g = ext_gcd(b, a % b, u1, v1);
    u = v1;
    v = u1 - (a / b) * v1;
    return g;
}

} // namespace detail

// Contact exponent (in powers of x) of two branches: the first exponent where
// the Puiseux expansions disagree for every choice of conjugate root, after
// passing both to the common ramification M = lcm(m1, m2). The root of unity
// zeta relating the expansions is never materialized: the constraints
// zeta^M = 1, zeta^e = c1_e / c2_e are kept as a single equivalent
// constraint zeta^d = w with d the gcd of the exponents seen so far.
// Returns nullopt when the branches coincide.
inline std::optional<mpq_class> contact_order(const PuiseuxBranch &b1, const PuiseuxBranch &b2)
{
    if (b1.field() != b2.field()) {
        throw invalid_input("branches over different fields");
    }
    const auto &field = b1.field();
    const long M = std::lcm(b1.m(), b2.m());
    const long s1 = M / b1.m(), s2 = M / b2.m();
    std::map<long, std::pair<FieldElement, FieldElement>> coeffs;
    const FieldElement zero(field, mpq_class(0));
    for (const auto &t : b1.terms()) {
        coeffs.emplace(t.exponent * s1, std::pair{t.coeff, zero}).first->second.first = t.coeff;
    }
    for (const auto &t : b2.terms()) {
        coeffs.emplace(t.exponent * s2, std::pair{zero, t.coeff}).first->second.second = t.coeff;
    }
    long d = M;
    FieldElement w(field, mpq_class(1));
    for (const auto &[e, cc] : coeffs) {
        const auto &[c1, c2] = cc;
        if (c1.is_zero() != c2.is_zero()) {
            mpq_class q(e, M);
            q.canonicalize();
            return q;
        }
        const FieldElement r = c1 / c2;
        long u = 0, v = 0;
        const long gg = detail::ext_gcd(d, e, u, v);
        const FieldElement nw = w.pow(u) * r.pow(v);
        if (nw.pow(d / gg) != w || nw.pow(e / gg) != r) {
            mpq_class q(e, M);
            q.canonicalize();
            return q;
        }
        d = gg;
        w = nw;
    }
    if (b1.m() != b2.m()) {
        throw internal_error("primitive parametrizations with different multiplicities coincide");
    }
    return std::nullopt;
}

inline bool same_branch(const PuiseuxBranch &a, const PuiseuxBranch &b)
{
    return a.m() == b.m() && !contact_order(a, b).has_value();
}

namespace detail
{

// Determinant of a square matrix over K[tau]/(tau^len) by dynamic
// programming over column subsets (division free).
inline TauPoly tau_determinant(const std::vector<std::vector<TauPoly>> &mat, const FieldPtr &field, std::size_t len)
{
    const std::size_t n = mat.size();
    std::vector<TauPoly> dp(std::size_t{1} << n);
    std::vector<bool> set(dp.size(), false);
    dp[0] = tau::zero(field, len);
    dp[0][0] = FieldElement(field, mpq_class(1));
    set[0] = true;
    for (std::size_t mask = 0; mask < dp.size(); ++mask) {
        if (!set[mask]) {
            continue;
        }
        const std::size_t row = static_cast<std::size_t>(std::popcount(mask));
        if (row == n) {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (mask & (std::size_t{1} << j)) {
                continue;
            }
            if (!tau::order(mat[row][j])) {
                continue;
            }
            const std::size_t above = static_cast<std::size_t>(std::popcount(mask >> (j + 1)));
            TauPoly term = tau::mul(dp[mask], mat[row][j], len);
            const std::size_t next = mask | (std::size_t{1} << j);
            if (!set[next]) {
                dp[next] = tau::zero(field, len);
                set[next] = true;
            }
            if (above % 2 == 1) {
                for (auto &c : term) {
                    c = -c;
                }
            }
            tau::add_into(dp[next], term);
        }
    }
    const std::size_t full = dp.size() - 1;
    return set[full] ? dp[full] : tau::zero(field, len);
}

} // namespace detail

struct IntersectionResult {
    bool infinite = false;
    long value = 0;
};

// (b1 . b2) = ord_tau F2(x1(tau), y1(tau)), F2 the implicit equation of b2,
// evaluated as the norm of y1(tau) - y2(s) in K[tau][s]/(s^m2 - tau^m1).
// The norm is computed modulo tau^T with T doubling from 64; truncation is
// a ring map, so the first nonzero result is exact. Identical branches give
// an infinite result once T exceeds the degree bound of the norm.
inline IntersectionResult intersection_multiplicity(const PuiseuxBranch &b1, const PuiseuxBranch &b2,
                                                    long hard_cap = truncation_cap())
{
    if (b1.field() != b2.field()) {
        throw invalid_input("branches over different fields");
    }
    const auto &field = b1.field();
    const std::size_t n = static_cast<std::size_t>(b2.m());
    if (n > 20) {
        throw resource_error("second branch multiplicity too large for the norm determinant");
    }
    const long m1 = b1.m();
    const long entry_bound = std::max(b1.max_exponent(), m1 * ((b2.max_exponent() + b2.m() - 1) / b2.m() + 1));
    const long degree_bound = entry_bound * static_cast<long>(n);
    for (long T = 64;; T *= 2) {
        const std::size_t len = static_cast<std::size_t>(std::min(T, degree_bound + 1));
        const TauPoly y1 = tau::y_series(b1, len);
        std::vector<std::vector<TauPoly>> mat(n, std::vector<TauPoly>(n, tau::zero(field, len)));
        for (std::size_t k = 0; k < n; ++k) {
            tau::add_into(mat[k][k], y1);
            for (const auto &t : b2.terms()) {
                const std::size_t idx = static_cast<std::size_t>(t.exponent) + k;
                const std::size_t row = idx % n;
                const std::size_t shift = static_cast<std::size_t>(m1) * (idx / n);
                if (shift < len) {
                    mat[row][k][shift] -= t.coeff;
                }
            }
        }
        const TauPoly det = detail::tau_determinant(mat, field, len);
        if (const auto o = tau::order(det)) {
            return {false, static_cast<long>(*o)};
        }
        if (static_cast<long>(len) > degree_bound) {
            return {true, 0};
        }
        if (T >= hard_cap) {
            throw resource_error("intersection multiplicity not determined below the truncation cap");
        }
    }
}

// Vertices of the trunk of the minimal resolution graph: dead ends sigma_i,
// rupture vertices tau_i, and the k-th vertex past the last rupture vertex
// (past sigma_0 for a smooth branch).
struct VertexId {
    enum class Kind { sigma, tau, trunk };
    Kind kind = Kind::sigma;
    std::size_t index = 0;

    static VertexId sigma(std::size_t i) { return {Kind::sigma, i}; }
    static VertexId tau(std::size_t i) { return {Kind::tau, i}; }
    static VertexId trunk(std::size_t k) { return {Kind::trunk, k}; }

    std::string name() const
    {
        switch (kind) {
        case Kind::sigma:
            return "sigma" + std::to_string(index);
        case Kind::tau:
            return "tau" + std::to_string(index);
        case Kind::trunk:
            break;
        }
        return "trunk" + std::to_string(index);
    }
    friend auto operator<=>(const VertexId &, const VertexId &) = default;
};

// Branch x = tau^(m/e), y = sum_{i < p} c_i tau^(i/e) + q tau^(p/e) where e
// is the gcd of m, p and the exponents below p. Without q, the truncation
// strictly below p.
inline PuiseuxBranch truncated_branch(const PuiseuxBranch &b, long p, std::optional<mpq_class> q)
{
    long e = b.m();
    for (const auto &t : b.terms()) {
        if (t.exponent < p) {
            e = std::gcd(e, t.exponent);
        }
    }
    if (q) {
        e = std::gcd(e, p);
    }
    std::vector<YTerm> terms;
    for (const auto &t : b.terms()) {
        if (t.exponent < p) {
            terms.push_back({t.exponent / e, t.coeff});
        }
    }
    if (q) {
        if (*q == 0) {
            throw invalid_input("generic curvette coefficient must be nonzero");
        }
        terms.push_back({p / e, FieldElement(b.field(), *q)});
    }
    return PuiseuxBranch(b.field(), b.m() / e, std::move(terms));
}

// Value m_v predicted from characteristic data.
inline long predicted_m_value(const CharData &cd, const VertexId &v)
{
    switch (v.kind) {
    case VertexId::Kind::sigma:
        return cd.m_sigma(v.index);
    case VertexId::Kind::tau:
        return cd.m_tau(v.index);
    case VertexId::Kind::trunk:
        break;
    }
    if (cd.g == 0) {
        return 1 + static_cast<long>(v.index);
    }
    return cd.m_tau(cd.g) + static_cast<long>(v.index);
}

inline constexpr int curvette_retries = 16;

// Curvette at a trunk vertex, defined over the field of b. Dead ends use the
// truncation of b below the next characteristic exponent; rupture and trunk
// vertices append a generic rational coefficient taken from 1, 2, 3, ...
// and accepted once the intersection number with b has the predicted value.
inline PuiseuxBranch curvette_at(const PuiseuxBranch &b, const VertexId &v)
{
    const CharData cd = char_data(b);
    const auto check = [&](const PuiseuxBranch &c) {
        const auto im = intersection_multiplicity(b, c);
        return !im.infinite && im.value == predicted_m_value(cd, v);
    };
    const auto field = b.field();
    switch (v.kind) {
    case VertexId::Kind::sigma: {
        if (v.index > cd.g) {
            throw invalid_input("vertex " + v.name() + " is not in the resolution graph");
        }
        if (v.index == 0) {
            for (int q = 1; q <= curvette_retries; ++q) {
                PuiseuxBranch c(field, 1, {{1, FieldElement(field, mpq_class(q))}});
                if (check(c)) {
                    return c;
                }
            }
            break;
        }
        PuiseuxBranch c = truncated_branch(b, cd.char_exponents[v.index], std::nullopt);
        if (check(c)) {
            return c;
        }
        break;
    }
    case VertexId::Kind::tau: {
        if (v.index == 0 || v.index > cd.g) {
            throw invalid_input("vertex " + v.name() + " is not in the resolution graph");
        }
        for (int q = 1; q <= curvette_retries; ++q) {
            PuiseuxBranch c = truncated_branch(b, cd.char_exponents[v.index], mpq_class(q));
            if (check(c)) {
                return c;
            }
        }
        break;
    }
    case VertexId::Kind::trunk: {
        if (v.index == 0) {
            throw invalid_input("trunk steps are counted from 1");
        }
        const long p = cd.char_exponents.back() + static_cast<long>(v.index);
        for (int q = 1; q <= curvette_retries; ++q) {
            PuiseuxBranch c = truncated_branch(b, p, mpq_class(q));
            if (check(c)) {
                return c;
            }
        }
        break;
    }
    }
    throw internal_error("no generic curvette found at " + v.name());
}

// Contact exponent at which curvette_at places its generic coefficient:
// two curvettes through generic points of the same divisor have exactly
// this contact. Dead ends past sigma_0 use a fixed truncation instead.
inline std::optional<mpq_class> curvette_level(const PuiseuxBranch &b, const VertexId &v)
{
    const CharData cd = char_data(b);
    switch (v.kind) {
    case VertexId::Kind::sigma:
        return v.index == 0 ? std::optional<mpq_class>(1) : std::nullopt;
    case VertexId::Kind::tau:
        return mpq_class(cd.char_exponents.at(v.index), b.m());
    case VertexId::Kind::trunk:
        break;
    }
    return mpq_class(cd.char_exponents.back() + static_cast<long>(v.index), b.m());
}

// m-values of the dead ends and rupture vertices, from characteristic data,
// each confirmed by intersecting b with a curvette at the vertex.
inline std::map<VertexId, long> m_values(const PuiseuxBranch &b)
{
    const CharData cd = char_data(b);
    std::map<VertexId, long> out;
    for (std::size_t i = 0; i <= cd.g; ++i) {
        out[VertexId::sigma(i)] = cd.m_sigma(i);
        if (i >= 1) {
            out[VertexId::tau(i)] = cd.m_tau(i);
        }
    }
    for (const auto &[v, value] : out) {
        const auto im = intersection_multiplicity(b, curvette_at(b, v));
        if (im.infinite || im.value != value) {
            throw internal_error("curvette intersection disagrees with characteristic data at " + v.name());
        }
    }
    return out;
}

} // namespace motivic

#endif
