#ifndef MOTIVIC_LINALG_HPP
#define MOTIVIC_LINALG_HPP

// Exact rank computations over Q on integer matrices.

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <motivic/errors.hpp>

namespace motivic::linalg
{

using SparseRow = std::map<std::size_t, mpz_class>; // column -> nonzero entry

// Row echelon form built one row at a time, fraction free: a new row is
// reduced against the stored pivot rows (keyed by leading column) via
// r <- p_lead * r - r_lead * p and divided by its content. The leading
// columns of the stored rows form the column rank profile, so the rank of
// the first c columns is the number of pivots with leading column < c.
class IncrementalEchelon
{
public:
    // Returns true when the row was independent of the rows seen so far.
    bool insert(SparseRow row)
    {
        strip(row);
        while (!row.empty()) {
            const auto lead = row.begin()->first;
            const auto it = m_pivots.find(lead);
            if (it == m_pivots.end()) {
                normalize(row);
                m_pivots.emplace(lead, std::move(row));
                return true;
            }
            const mpz_class a = it->second.begin()->second; // pivot lead
            const mpz_class b = row.begin()->second;
            for (auto &[c, v] : row) {
                v *= a;
            }
            for (const auto &[c, v] : it->second) {
                row[c] -= b * v;
            }
            strip(row);
            normalize(row);
        }
        return false;
    }

    std::size_t rank() const { return m_pivots.size(); }

    // Pivot (leading) columns in increasing order.
    std::vector<std::size_t> pivot_columns() const
    {
        std::vector<std::size_t> out;
        for (const auto &[c, r] : m_pivots) {
            out.push_back(c);
        }
        return out;
    }

    // Rank of the submatrix of the first `columns` columns.
    std::size_t prefix_rank(std::size_t columns) const
    {
        std::size_t n = 0;
        for (auto it = m_pivots.begin(); it != m_pivots.end() && it->first < columns; ++it) {
            ++n;
        }
        return n;
    }

private:
    static void strip(SparseRow &row)
    {
        for (auto it = row.begin(); it != row.end();) {
            it = it->second == 0 ? row.erase(it) : std::next(it);
        }
    }
    static void normalize(SparseRow &row)
    {
        if (row.empty()) {
            return;
        }
        mpz_class g = 0;
        for (const auto &[c, v] : row) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            if (g == 1) {
                return;
            }
        }
        for (auto &[c, v] : row) {
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
        }
    }

    std::map<std::size_t, SparseRow> m_pivots;
};

// Rank of a dense integer matrix by Bareiss fraction-free elimination.
inline std::size_t bareiss_rank(std::vector<std::vector<mpz_class>> a)
{
    const std::size_t rows = a.size();
    if (rows == 0) {
        return 0;
    }
    const std::size_t cols = a[0].size();
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) {
            ++p;
        }
        if (p == rows) {
            continue;
        }
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

// Scales a rational row to a primitive integer row.
inline SparseRow integer_row(const std::map<std::size_t, mpq_class> &row)
{
    mpz_class l = 1;
    for (const auto &[c, v] : row) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    }
    SparseRow out;
    for (const auto &[c, v] : row) {
        if (v != 0) {
            out[c] = v.get_num() * (l / v.get_den());
        }
    }
    return out;
}

} // namespace motivic::linalg

#endif
