#ifndef MOTIVIC_POINCARE_HPP
#define MOTIVIC_POINCARE_HPP

// Poincare series of a plane valuation from the data of the quotient
// resolution graph, classical and generalized (coefficients in Z[L]), for
// curve and divisorial valuations; the stepwise P^(j) recursion; and the
// two-valuation examples as executable fixtures.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <motivic/errors.hpp>
#include <motivic/galois.hpp>
#include <motivic/lseries.hpp>

namespace motivic
{

enum class SeriesKind { classical, generalized };
enum class ValuationKind { curve, divisorial };

struct SeriesRequest {
    GResolutionData data;
    std::size_t order = 0;
    SeriesKind kind = SeriesKind::generalized;
    ValuationKind valuation = ValuationKind::curve;
};

struct EngineOptions {
    // Asserts that every generalized coefficient is 1 + L + ... + L^(a-1)
    // for the matching classical coefficient a.
    bool verify_geometric = false;
};

namespace detail
{

inline std::size_t as_size(long v, const char *what)
{
    if (v < 0) {
        throw invalid_input(std::string(what) + " must be nonnegative");
    }
    return static_cast<std::size_t>(v);
}

inline void check_divisorial(const GResolutionData &data)
{
    if (!data.divisorial) {
        throw invalid_input("divisorial series requested but the data has no divisorial vertex");
    }
}

// Splittings that can contribute modulo t^(N+1); the list is ordered along
// the trunk, so consumption stops at the first M_rho > N.
inline std::vector<Splitting> contributing(const std::vector<Splitting> &splittings, std::size_t N)
{
    std::vector<Splitting> out;
    for (const auto &s : splittings) {
        if (static_cast<std::size_t>(s.M_rho) > N) {
            break;
        }
        out.push_back(s);
    }
    return out;
}

inline void add_dead_ends_and_ruptures(BinomialFactorization &f, const GResolutionData &data)
{
    for (long m : data.M_tau) {
        f.add(0, as_size(m, "M_tau"), 1);
    }
    for (long m : data.M_sigma) {
        f.add(0, as_size(m, "M_sigma"), -1);
    }
}

inline void add_splitting(BinomialFactorization &f, const Splitting &s)
{
    const std::size_t deg = as_size(s.deg, "deg"), ell = as_size(s.ell, "ell"), m = as_size(s.M_rho, "M_rho");
    f.add(ell * deg, ell * m, 1);
    f.add(deg, m, -1);
}

} // namespace detail

// Generalized curve series as a product of binomials, using the splittings
// with M_rho <= N.
inline BinomialFactorization curve_factorization(const GResolutionData &data, std::size_t N)
{
    BinomialFactorization f;
    detail::add_dead_ends_and_ruptures(f, data);
    for (const auto &s : detail::contributing(data.splittings, N)) {
        detail::add_splitting(f, s);
    }
    return f;
}

inline BinomialFactorization divisorial_factorization(const GResolutionData &data, std::size_t N)
{
    detail::check_divisorial(data);
    BinomialFactorization f = curve_factorization(data, N);
    f.add(detail::as_size(data.divisorial->deg_s, "deg_s"), detail::as_size(data.divisorial->M_delta, "M_delta"), -1);
    return f;
}

inline BinomialFactorization request_factorization(const SeriesRequest &r)
{
    BinomialFactorization f =
        r.valuation == ValuationKind::curve ? curve_factorization(r.data, r.order) : divisorial_factorization(r.data, r.order);
    return r.kind == SeriesKind::classical ? f.classical_shadow() : f;
}

namespace detail
{

inline void verify_geometric(const LSeries &generalized)
{
    if (coefficientwise_generalize(specialize_L(generalized, 1)) != generalized) {
        throw internal_error("generalized coefficients are not geometric sums of the classical ones");
    }
}

} // namespace detail

inline LSeries classical_curve(const GResolutionData &data, std::size_t N)
{
    return expand_binomial_product(curve_factorization(data, N).classical_shadow(), N);
}

inline LSeries classical_divisorial(const GResolutionData &data, std::size_t N)
{
    return expand_binomial_product(divisorial_factorization(data, N).classical_shadow(), N);
}

inline LSeries generalized_curve(const GResolutionData &data, std::size_t N, EngineOptions opts = {})
{
    LSeries s = expand_binomial_product(curve_factorization(data, N), N);
    if (opts.verify_geometric) {
        detail::verify_geometric(s);
    }
    return s;
}

inline LSeries generalized_divisorial(const GResolutionData &data, std::size_t N, EngineOptions opts = {})
{
    LSeries s = expand_binomial_product(divisorial_factorization(data, N), N);
    if (opts.verify_geometric) {
        detail::verify_geometric(s);
    }
    return s;
}

inline LSeries compute(const SeriesRequest &r, EngineOptions opts = {})
{
    if (r.valuation == ValuationKind::curve) {
        return r.kind == SeriesKind::classical ? classical_curve(r.data, r.order) : generalized_curve(r.data, r.order, opts);
    }
    return r.kind == SeriesKind::classical ? classical_divisorial(r.data, r.order)
                                           : generalized_divisorial(r.data, r.order, opts);
}

// Graph data whose splittings come from a stream: the stream is consumed
// while M_rho <= N and the result replaces the finite splitting list.
inline GResolutionData with_stream(GResolutionData data, const SplittingStream &stream, std::size_t N)
{
    data.splittings = take_splittings(stream, static_cast<long>(N));
    validate(data);
    return data;
}

// The first splitting vertex is the dead end sigma_0 exactly when its
// M-value is the multiplicity M_sigma_0: every other trunk vertex has a
// strictly larger value.
inline bool rho1_is_sigma0(const GResolutionData &data)
{
    return !data.splittings.empty() && data.splittings.front().M_rho == data.M_sigma.front();
}

namespace detail
{

// 1/(1 - L^a t^m) as an explicit geometric series.
inline LSeries inverse_binomial_series(std::size_t a, std::size_t m, std::size_t N)
{
    LSeries s(N);
    for (std::size_t k = 0; k * m <= N; ++k) {
        s[k * m] = LPolynomial::monomial(1, a * k);
    }
    return s;
}

inline LSeries binomial_series(std::size_t a, std::size_t m, std::size_t N)
{
    LSeries s = LSeries::one(N);
    if (m <= N) {
        s[m] = LPolynomial::monomial(-1, a);
    }
    return s;
}

} // namespace detail

// P^(j): the product over dead ends and rupture vertices times the
// first j-1 splitting factors, built by successive series multiplication.
// When rho_1 = sigma_0 the base case j = 1 is not a valid stage; the
// recursion then starts from P^(2) taken from the closed form.
inline LSeries stepwise_pj(const GResolutionData &data, std::size_t j, std::size_t N)
{
    const std::size_t s = data.splittings.size();
    if (j < 1 || j > s + 1) {
        throw invalid_input("stage j must lie in 1.." + std::to_string(s + 1));
    }
    LSeries p = LSeries::one(N);
    std::size_t first = 0;
    if (rho1_is_sigma0(data)) {
        if (j == 1) {
            throw invalid_input("stage 1 is undefined when the first splitting vertex is sigma_0");
        }
        GResolutionData prefix = data;
        prefix.splittings.resize(1);
        p = generalized_curve(prefix, N);
        first = 1;
    } else {
        for (long m : data.M_tau) {
            p = p * detail::binomial_series(0, detail::as_size(m, "M_tau"), N);
        }
        for (long m : data.M_sigma) {
            p = p * detail::inverse_binomial_series(0, detail::as_size(m, "M_sigma"), N);
        }
    }
    for (std::size_t k = first; k + 1 < j; ++k) {
        const auto &sp = data.splittings[k];
        const std::size_t deg = detail::as_size(sp.deg, "deg"), ell = detail::as_size(sp.ell, "ell"),
                          m = detail::as_size(sp.M_rho, "M_rho");
        p = p * detail::binomial_series(ell * deg, ell * m, N) * detail::inverse_binomial_series(deg, m, N);
    }
    return p;
}

// Coefficient bound a_v^(j) <= [K_{j-1} : K_0] at stage j (classical
// coefficients of P^(j), with deg of stage s+1 the top degree).
inline bool stepwise_bound_holds(const GResolutionData &data, std::size_t j, std::size_t N)
{
    const LSeries c = specialize_L(stepwise_pj(data, j, N), 1);
    const long bound = j <= data.splittings.size() ? data.splittings[j - 1].deg : data.top_degree();
    for (std::size_t v = 0; v <= N; ++v) {
        const mpz_class a = c[v].constant_term();
        if (a < 0 || a > bound) {
            return false;
        }
    }
    return true;
}

namespace fixtures
{

// Two transversal smooth branches: 1 + t1 t2 (L-1)/((1-t1)(1-t2)) with
// denominators cleared equals the given numerator; defaults to the
// expected 1 - t1 - t2 + L t1 t2. Also checks the fibre classes 1 at the
// origin and L - 1 on the open orbit through inclusion-exclusion.
inline bool example1(const std::optional<BivarPolynomial> &numerator = std::nullopt)
{
    const BivarPolynomial one = BivarPolynomial::constant(1);
    const BivarPolynomial t1{{{1, 0}, 1}}, t2{{{0, 1}, 1}};
    const BivarPolynomial lhs = (one - t1) * (one - t2) + BivarPolynomial{{{1, 1}, LPolynomial({-1, 1})}};
    const BivarPolynomial rhs =
        numerator ? *numerator : BivarPolynomial{{{0, 0}, 1}, {{1, 0}, -1}, {{0, 1}, -1}, {{1, 1}, LPolynomial::L()}};
    if (!bivar_identity_check(lhs, rhs)) {
        return false;
    }
    // F_0 = C* (a line minus the origin); F_v for v in Z^2_{>0} is (C*)^2,
    // the plane minus two coordinate lines.
    const auto origin = chi_g_inclusion_exclusion(2, {{0, 1}, {1, 0}, {2, 0}, {3, 0}});
    const auto open = chi_g_inclusion_exclusion(2, {{0, 2}, {1, 1}, {2, 1}, {3, 0}});
    return origin == LPolynomial(1) && open == LPolynomial({-1, 1});
}

// Two-blow-up example, closed form only: the numerator and denominators
// specialized along (t1, t2) = (t^a, t^b). Checks constant term 1 and that
// substituting L = 1 commutes with the expansion.
inline bool example2_smoke(std::size_t N)
{
    if (N < 5) {
        throw invalid_input("two-blow-up smoke test needs order >= 5");
    }
    const std::pair<std::size_t, std::size_t> weights[] = {{1, 1}, {1, 2}, {2, 3}};
    for (const auto &[a, b] : weights) {
        auto build = [&](bool with_L) {
            const std::size_t l = with_L ? 1 : 0;
            LSeries num(N);
            num[0] += LPolynomial(1);
            if (a + b <= N) {
                num[a + b] += LPolynomial(-1);
            }
            if (a + 2 * b <= N) {
                num[a + 2 * b] += LPolynomial(-1);
            }
            if (2 * a + 3 * b <= N) {
                num[2 * a + 3 * b] += LPolynomial::monomial(1, l);
            }
            const BinomialFactorization den{{0, a + b, -1}, {0, a + 2 * b, -1}, {l, a + b, -1}, {l, a + 2 * b, -1}};
            return num * expand_binomial_product(den, N);
        };
        const LSeries s = build(true);
        if (s[0] != LPolynomial(1)) {
            return false;
        }
        if (specialize_L(s, 1) != build(false)) {
            return false;
        }
    }
    return true;
}

// Graph data of the branch x = t^4, y = t^6 + t^7 (semigroup <4, 6, 13>)
// with the divisorial vertex of value M_delta (26: the last rupture vertex,
// 27: one step further along the trunk).
inline GResolutionData semigroup_4_6_13(std::optional<long> M_delta = std::nullopt)
{
    GResolutionData d;
    d.g = 2;
    d.M_sigma = {4, 6, 13};
    d.M_tau = {12, 26};
    if (M_delta) {
        return attach_divisorial(d, *M_delta);
    }
    return d;
}

// Closed forms for the two divisorial valuations of semigroup_4_6_13.
inline BinomialFactorization closed_form_classical(long M_delta)
{
    if (M_delta == 26) {
        return {{0, 12, 1}, {0, 4, -1}, {0, 6, -1}, {0, 13, -1}};
    }
    if (M_delta == 27) {
        return {{0, 12, 1}, {0, 26, 1}, {0, 4, -1}, {0, 6, -1}, {0, 13, -1}, {0, 27, -1}};
    }
    throw invalid_input("no closed form recorded for M_delta = " + std::to_string(M_delta));
}

inline BinomialFactorization closed_form_generalized(long M_delta)
{
    if (M_delta != 26 && M_delta != 27) {
        throw invalid_input("no closed form recorded for M_delta = " + std::to_string(M_delta));
    }
    return {{0, 12, 1}, {0, 26, 1}, {0, 4, -1}, {0, 6, -1}, {0, 13, -1}, {1, static_cast<std::size_t>(M_delta), -1}};
}

} // namespace fixtures

} // namespace motivic

#endif
