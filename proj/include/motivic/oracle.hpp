#ifndef MOTIVIC_ORACLE_HPP
#define MOTIVIC_ORACLE_HPP

// Brute-force dimensions a_v = dim_Q J(v)/J(v+1) for valuations on
// Q[[x, y]] by exact linear algebra on jets. A curve valuation is the
// tau-order of f(x(tau), y(tau)) along a branch; a divisorial valuation is
// the tau-order along the curvette family x = tau^m', y = y_0(tau) + c tau^k
// with c a free parameter.
//
// Only monomials x^a y^b with a*m + b*ord(y) <= v_max are used: monomials
// of larger value do not touch the tau-coefficients 0..v_max, so J(v) for
// v <= v_max is the kernel of the restricted coefficient map.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <motivic/branch.hpp>
#include <motivic/errors.hpp>
#include <motivic/linalg.hpp>
#include <motivic/lseries.hpp>

namespace motivic
{

struct OracleLimits {
    std::size_t max_cells = std::size_t{1} << 24; // rows x columns of the jet matrix
};

// Jet matrix with columns grouped into blocks, block v holding the
// coordinates of the tau^v coefficient.
struct JetMatrix {
    std::vector<linalg::SparseRow> rows;
    std::vector<std::pair<long, long>> monomials; // (a, b) per row
    std::size_t blocks = 0;
    std::size_t block_width = 0;
};

// a_v = rank(blocks 0..v) - rank(blocks 0..v-1), from the rows in the
// order given.
inline std::vector<std::size_t> prefix_rank_dims(const std::vector<linalg::SparseRow> &rows, std::size_t blocks,
                                                 std::size_t width)
{
    linalg::IncrementalEchelon ech;
    for (const auto &r : rows) {
        ech.insert(r);
    }
    std::vector<std::size_t> dims(blocks, 0);
    for (std::size_t c : ech.pivot_columns()) {
        ++dims[c / width];
    }
    return dims;
}

namespace detail
{

inline void check_cells(std::size_t rows, std::size_t cols, const OracleLimits &lim)
{
    if (cols != 0 && rows > lim.max_cells / cols) {
        throw resource_error("jet matrix of " + std::to_string(rows) + " x " + std::to_string(cols) +
                             " exceeds the cell budget " + std::to_string(lim.max_cells));
    }
}

inline std::vector<std::pair<long, long>> monomials_up_to(long m, std::optional<long> y_order, long v_max)
{
    std::vector<std::pair<long, long>> out;
    for (long a = 0; a * m <= v_max; ++a) {
        out.push_back({a, 0});
        if (!y_order) {
            continue;
        }
        for (long b = 1; a * m + b * *y_order <= v_max; ++b) {
            out.push_back({a, b});
        }
    }
    return out;
}

} // namespace detail

inline JetMatrix curve_jet_matrix(const PuiseuxBranch &b, long v_max, const OracleLimits &lim = {})
{
    if (v_max < 0) {
        throw invalid_input("v_max must be nonnegative");
    }
    const auto &field = b.field();
    const std::size_t d = field->degree();
    const std::size_t len = static_cast<std::size_t>(v_max) + 1;
    JetMatrix jm;
    jm.blocks = len;
    jm.block_width = d;
    jm.monomials = detail::monomials_up_to(b.m(), b.terms().empty() ? std::nullopt : std::optional<long>(b.y_order()), v_max);
    detail::check_cells(jm.monomials.size(), len * d, lim);

    const TauPoly y = tau::y_series(b, len);
    std::vector<TauPoly> ypow{tau::zero(field, len)};
    ypow[0][0] = FieldElement(field, mpq_class(1));
    for (const auto &[a, e] : jm.monomials) {
        while (static_cast<long>(ypow.size()) <= e) {
            ypow.push_back(tau::mul(ypow.back(), y, len));
        }
        std::map<std::size_t, mpq_class> row;
        const std::size_t shift = static_cast<std::size_t>(a * b.m());
        const TauPoly &yp = ypow[static_cast<std::size_t>(e)];
        for (std::size_t i = 0; i + shift < len; ++i) {
            const auto q = as_q_vector(yp[i]);
            for (std::size_t k = 0; k < d; ++k) {
                if (q[k] != 0) {
                    row[(i + shift) * d + k] = q[k];
                }
            }
        }
        jm.rows.push_back(linalg::integer_row(row));
    }
    return jm;
}

inline std::vector<std::size_t> curve_dims(const PuiseuxBranch &b, long v_max, const OracleLimits &lim = {})
{
    const JetMatrix jm = curve_jet_matrix(b, v_max, lim);
    return prefix_rank_dims(jm.rows, jm.blocks, jm.block_width);
}

// Generic curvette x = tau^m, y = sum fixed + c tau^free_exponent.
struct CurvetteFamily {
    FieldPtr field;
    long m = 1;
    std::vector<YTerm> fixed;
    long free_exponent = 1;
};

// Family of curvettes through a generic point of the divisor at a trunk
// vertex of b: sigma_0 (x = tau, y = c tau), a rupture vertex tau_i, or the
// k-th vertex past the last rupture vertex.
inline CurvetteFamily curvette_family(const PuiseuxBranch &b, const VertexId &v)
{
    const CharData cd = char_data(b);
    long p = 0;
    switch (v.kind) {
    case VertexId::Kind::sigma:
        if (v.index != 0) {
            throw invalid_input("divisorial valuations at dead ends other than sigma_0 are not supported");
        }
        return CurvetteFamily{b.field(), 1, {}, 1};
    case VertexId::Kind::tau:
        if (v.index == 0 || v.index > cd.g) {
            throw invalid_input("vertex " + v.name() + " is not in the resolution graph");
        }
        p = cd.char_exponents[v.index];
        break;
    case VertexId::Kind::trunk:
        if (v.index == 0) {
            throw invalid_input("trunk steps are counted from 1");
        }
        p = cd.char_exponents.back() + static_cast<long>(v.index);
        break;
    }
    const PuiseuxBranch t = truncated_branch(b, p, mpq_class(1));
    CurvetteFamily fam{b.field(), t.m(), t.terms(), t.terms().back().exponent};
    fam.fixed.pop_back();
    return fam;
}

// Vertex of the trunk of b whose divisorial valuation has M-value M.
inline VertexId vertex_for_m_value(const PuiseuxBranch &b, long M)
{
    const CharData cd = char_data(b);
    if (M == cd.m_sigma(0)) {
        return VertexId::sigma(0);
    }
    for (std::size_t i = 1; i <= cd.g; ++i) {
        if (M == cd.m_tau(i)) {
            return VertexId::tau(i);
        }
    }
    const long last = cd.g == 0 ? 1 : cd.m_tau(cd.g);
    if (M > last) {
        return VertexId::trunk(static_cast<std::size_t>(M - last));
    }
    throw invalid_input("no rupture or trunk vertex of the branch has M-value " + std::to_string(M));
}

struct DivisorialDims {
    std::vector<std::size_t> dims;
    bool certified = false;
};

// Rows have entries in K[c], flattened over Q by (tau, power of c, basis
// coordinate). The rank of such a block prefix is the dimension of the
// space of jets whose tau-coefficients vanish identically in c, which is
// the condition nu(f) >= v for the generic curvette. Certification redoes
// the computation with c evaluated at D+1 distinct rationals (D the largest
// c-degree); evaluation at D+1 points is injective on polynomials of degree
// <= D, so the ranks must coincide.
inline DivisorialDims divisorial_dims(const CurvetteFamily &fam, long v_max, const OracleLimits &lim = {})
{
    if (v_max < 0) {
        throw invalid_input("v_max must be nonnegative");
    }
    const auto &field = fam.field;
    const std::size_t d = field->degree();
    const std::size_t len = static_cast<std::size_t>(v_max) + 1;
    const long y_order = fam.fixed.empty() ? fam.free_exponent : std::min(fam.fixed.front().exponent, fam.free_exponent);
    const auto monomials = detail::monomials_up_to(fam.m, y_order, v_max);
    long D = 0;
    for (const auto &mono : monomials) {
        D = std::max(D, mono.second);
    }
    const std::size_t cw = static_cast<std::size_t>(D) + 1;
    detail::check_cells(monomials.size(), len * cw * d, lim);

    const FieldElement zero(field, mpq_class(0)), one(field, mpq_class(1));
    std::vector<CPoly> y(len);
    for (const auto &t : fam.fixed) {
        if (static_cast<std::size_t>(t.exponent) < len) {
            y[static_cast<std::size_t>(t.exponent)] = CPoly(t.coeff);
        }
    }
    if (static_cast<std::size_t>(fam.free_exponent) < len) {
        y[static_cast<std::size_t>(fam.free_exponent)] = y[static_cast<std::size_t>(fam.free_exponent)] + CPoly({zero, one});
    }
    auto mul = [&](const std::vector<CPoly> &a, const std::vector<CPoly> &b) {
        std::vector<CPoly> r(len);
        for (std::size_t i = 0; i < len; ++i) {
            if (a[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; i + j < len; ++j) {
                if (!b[j].is_zero()) {
                    r[i + j] = r[i + j] + a[i] * b[j];
                }
            }
        }
        return r;
    };
    std::vector<std::vector<CPoly>> ypow{std::vector<CPoly>(len)};
    ypow[0][0] = CPoly(one);

    std::vector<mpq_class> points;
    for (long k = 0; k <= D; ++k) {
        points.emplace_back(k + 1);
    }
    std::vector<linalg::SparseRow> generic_rows, evaluated_rows;
    for (const auto &[a, e] : monomials) {
        while (static_cast<long>(ypow.size()) <= e) {
            ypow.push_back(mul(ypow.back(), y));
        }
        const auto &yp = ypow[static_cast<std::size_t>(e)];
        const std::size_t shift = static_cast<std::size_t>(a * fam.m);
        std::map<std::size_t, mpq_class> grow, erow;
        for (std::size_t i = 0; i + shift < len; ++i) {
            const CPoly &entry = yp[i];
            const std::size_t base = (i + shift) * cw * d;
            for (std::size_t cp = 0; cp < entry.coeffs().size(); ++cp) {
                const auto q = as_q_vector(entry.coeffs()[cp]);
                for (std::size_t k = 0; k < d; ++k) {
                    if (q[k] != 0) {
                        grow[base + cp * d + k] = q[k];
                    }
                }
            }
            if (entry.is_zero()) {
                continue;
            }
            for (std::size_t pt = 0; pt < points.size(); ++pt) {
                const auto q = as_q_vector(entry.evaluate(field, points[pt]));
                for (std::size_t k = 0; k < d; ++k) {
                    if (q[k] != 0) {
                        erow[base + pt * d + k] = q[k];
                    }
                }
            }
        }
        generic_rows.push_back(linalg::integer_row(grow));
        evaluated_rows.push_back(linalg::integer_row(erow));
    }
    DivisorialDims out;
    out.dims = prefix_rank_dims(generic_rows, len, cw * d);
    out.certified = prefix_rank_dims(evaluated_rows, len, cw * d) == out.dims;
    return out;
}

inline DivisorialDims divisorial_dims(const PuiseuxBranch &b, long M_delta, long v_max, const OracleLimits &lim = {})
{
    return divisorial_dims(curvette_family(b, vertex_for_m_value(b, M_delta)), v_max, lim);
}

// sum_v (1 + L + ... + L^(a_v - 1)) t^v
inline LSeries oracle_generalized(const std::vector<std::size_t> &dims)
{
    if (dims.empty()) {
        throw invalid_input("empty dimension sequence");
    }
    LSeries s(dims.size() - 1);
    for (std::size_t v = 0; v < dims.size(); ++v) {
        s[v] = geometric_sum(dims[v]);
    }
    return s;
}

inline LSeries oracle_classical(const std::vector<std::size_t> &dims)
{
    return specialize_L(oracle_generalized(dims), 1);
}

} // namespace motivic

#endif
