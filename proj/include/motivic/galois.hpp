#ifndef MOTIVIC_GALOIS_HPP
#define MOTIVIC_GALOIS_HPP

// Galois orbits of a branch and the combinatorial data of the quotient of
// its resolution graph: M-values of dead ends, rupture and splitting
// vertices, and the tower of fields K_0 = Q < K_1 < ... < K_s cut out by the
// splitting points.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <motivic/branch.hpp>
#include <motivic/errors.hpp>

namespace motivic
{

struct Splitting {
    long M_rho = 0;
    long ell = 0;
    long deg = 0; // [K_{j-1} : K_0]
    friend bool operator==(const Splitting &, const Splitting &) = default;
};

struct Divisorial {
    long M_delta = 0;
    long deg_s = 0; // [K_s : K_0]
    friend bool operator==(const Divisorial &, const Divisorial &) = default;
};

struct GResolutionData {
    std::size_t g = 0;
    std::vector<long> M_sigma; // sigma_0 .. sigma_g
    std::vector<long> M_tau;   // tau_1 .. tau_g
    std::vector<Splitting> splittings;
    std::optional<Divisorial> divisorial;

    // [K_s : K_0] for the finite tower stored here.
    long top_degree() const
    {
        return splittings.empty() ? 1 : checked_mul(splittings.back().deg, splittings.back().ell);
    }

    static long checked_mul(long a, long b)
    {
        if (b != 0 && a > std::numeric_limits<long>::max() / b) {
            throw resource_error("field degree overflows");
        }
        return a * b;
    }

    friend bool operator==(const GResolutionData &, const GResolutionData &) = default;
};

// Checks the structural invariants; throws invalid_input on violations and
// returns the non-fatal remarks (equal consecutive M_rho).
inline std::vector<std::string> validate(const GResolutionData &d)
{
    std::vector<std::string> remarks;
    if (d.M_sigma.size() != d.g + 1) {
        throw invalid_input("expected g+1 = " + std::to_string(d.g + 1) + " values M_sigma, got " +
                            std::to_string(d.M_sigma.size()));
    }
    if (d.M_tau.size() != d.g) {
        throw invalid_input("expected g = " + std::to_string(d.g) + " values M_tau, got " + std::to_string(d.M_tau.size()));
    }
    for (long v : d.M_sigma) {
        if (v <= 0) {
            throw invalid_input("M_sigma values must be positive");
        }
    }
    for (long v : d.M_tau) {
        if (v <= 0) {
            throw invalid_input("M_tau values must be positive");
        }
    }
    long deg = 1;
    for (std::size_t j = 0; j < d.splittings.size(); ++j) {
        const auto &s = d.splittings[j];
        const std::string where = "splitting " + std::to_string(j + 1) + ": ";
        if (s.M_rho <= 0) {
            throw invalid_input(where + "M_rho must be positive");
        }
        if (s.ell < 2) {
            throw invalid_input(where + "ell must be at least 2");
        }
        if (s.deg != deg) {
            throw invalid_input(where + "deg must be " + std::to_string(deg) + " (product of the previous ell)");
        }
        if (j > 0) {
            const long prev = d.splittings[j - 1].M_rho;
            if (s.M_rho < prev) {
                throw invalid_input(where + "M_rho values must be non-decreasing along the trunk");
            }
            if (s.M_rho == prev) {
                remarks.push_back(where + "M_rho equals the previous splitting value");
            }
        }
        deg = GResolutionData::checked_mul(deg, s.ell);
    }
    if (d.divisorial) {
        if (d.divisorial->M_delta <= 0) {
            throw invalid_input("M_delta must be positive");
        }
        if (!d.splittings.empty() && d.divisorial->M_delta <= d.splittings.back().M_rho) {
            throw invalid_input("M_delta must exceed the last M_rho");
        }
        if (d.divisorial->deg_s != deg) {
            throw invalid_input("deg_s must be " + std::to_string(deg));
        }
    }
    return remarks;
}

inline GResolutionData attach_divisorial(GResolutionData data, long M_delta)
{
    data.divisorial = Divisorial{M_delta, data.top_degree()};
    validate(data);
    return data;
}

// Splitting data of an infinite tower, produced lazily in trunk order.
using SplittingStream = std::function<std::optional<Splitting>()>;

// Pulls splittings while M_rho <= N; the first splitting with M_rho > N
// ends the consumption (it and everything after contribute nothing
// modulo t^(N+1)).
inline std::vector<Splitting> take_splittings(const SplittingStream &stream, long N)
{
    std::vector<Splitting> out;
    while (auto s = stream()) {
        if (s->M_rho > N) {
            break;
        }
        out.push_back(*s);
    }
    return out;
}

struct BranchOrbit {
    PuiseuxBranch representative;
    std::vector<PuiseuxBranch> members; // members[0] is the representative
    std::size_t stabilizer_size = 1;
};

inline BranchOrbit orbit_of(const PuiseuxBranch &b)
{
    const auto &field = b.field();
    std::vector<PuiseuxBranch> members{b};
    for (std::size_t g = 1; g < field->group_order(); ++g) {
        PuiseuxBranch c = b.conjugate(g);
        const bool seen = std::any_of(members.begin(), members.end(), [&](const PuiseuxBranch &x) { return same_branch(x, c); });
        if (!seen) {
            members.push_back(std::move(c));
        }
    }
    if (field->group_order() % members.size() != 0) {
        throw internal_error("orbit size does not divide the group order");
    }
    const std::size_t stab = field->group_order() / members.size();
    return BranchOrbit{b, std::move(members), stab};
}

// Value on b of the Q-curve through the conjugates of the divisor carrying
// the curvette c: the sum of (b . c') over conjugates c' of c, one per
// divisor. Conjugates with contact >= level pass through the same divisor
// (at different points) and count once; without a level every distinct
// conjugate counts.
inline long orbit_intersection(const PuiseuxBranch &b, const PuiseuxBranch &c, const std::optional<mpq_class> &level = std::nullopt,
                               std::size_t *divisors = nullptr)
{
    const BranchOrbit o = orbit_of(c);
    std::vector<const PuiseuxBranch *> reps;
    for (const auto &member : o.members) {
        const bool same_divisor = level && std::any_of(reps.begin(), reps.end(), [&](const PuiseuxBranch *r) {
                                      const auto k = contact_order(*r, member);
                                      return !k || *k >= *level;
                                  });
        if (!same_divisor) {
            reps.push_back(&member);
        }
    }
    long total = 0;
    for (const auto *r : reps) {
        const auto im = intersection_multiplicity(b, *r);
        if (im.infinite) {
            throw internal_error("curvette coincides with a conjugate of the branch");
        }
        total += im.value;
    }
    if (divisors) {
        *divisors = reps.size();
    }
    return total;
}

namespace detail
{

// Curvette at the vertex where branches with contact exponent `level`
// separate from the representative: the common truncation plus a rational
// coefficient that avoids every member's coefficient at that exponent.
inline PuiseuxBranch splitting_curvette(const BranchOrbit &orbit, const mpq_class &level)
{
    const auto &rep = orbit.representative;
    const mpq_class pq = level * rep.m();
    if (pq.get_den() != 1) {
        throw internal_error("contact level is not an exponent of the representative");
    }
    const long p = pq.get_num().get_si();
    for (int q = 1; q <= curvette_retries; ++q) {
        PuiseuxBranch c = truncated_branch(rep, p, mpq_class(q));
        bool ok = true;
        for (const auto &member : orbit.members) {
            const auto k = contact_order(c, member);
            if (!k || *k > level) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return c;
        }
    }
    throw internal_error("no generic curvette found at a splitting vertex");
}

} // namespace detail

inline GResolutionData splitting_tower(const BranchOrbit &orbit)
{
    const auto &rep = orbit.representative;
    const auto &members = orbit.members;
    const std::size_t n = members.size();
    if (n == 0 || !same_branch(members[0], rep)) {
        throw invalid_input("orbit representative must be its first member");
    }

    // contact exponents with the representative, and the ultrametric check
    std::vector<mpq_class> contact(n);
    for (std::size_t k = 1; k < n; ++k) {
        const auto c = contact_order(rep, members[k]);
        if (!c) {
            throw internal_error("orbit members are not pairwise distinct");
        }
        contact[k] = *c;
    }
    for (std::size_t a = 1; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto c = contact_order(members[a], members[b]);
            if (!c) {
                throw internal_error("orbit members are not pairwise distinct");
            }
            const mpq_class lo = std::min(contact[a], contact[b]);
            if (*c < lo || (contact[a] != contact[b] && *c != lo)) {
                throw internal_error("contact orders of the orbit do not form a nested partition chain");
            }
        }
    }

    GResolutionData d;
    const CharData cd = char_data(rep);
    d.g = cd.g;
    for (std::size_t i = 0; i <= cd.g; ++i) {
        const auto sigma = VertexId::sigma(i), tau = VertexId::tau(i);
        d.M_sigma.push_back(orbit_intersection(rep, curvette_at(rep, sigma), curvette_level(rep, sigma)));
        if (i >= 1) {
            d.M_tau.push_back(orbit_intersection(rep, curvette_at(rep, tau), curvette_level(rep, tau)));
        }
    }

    std::set<mpq_class> levels(contact.begin() + 1, contact.end());
    for (const auto &level : levels) {
        const long before = 1 + std::count_if(contact.begin() + 1, contact.end(), [&](const mpq_class &c) { return c >= level; });
        const long after = 1 + std::count_if(contact.begin() + 1, contact.end(), [&](const mpq_class &c) { return c > level; });
        if (before % after != 0 || static_cast<long>(n) % before != 0) {
            throw internal_error("block sizes of the contact partition are not compatible");
        }
        Splitting s;
        s.ell = before / after;
        s.deg = static_cast<long>(n) / before;
        std::size_t divisors = 0;
        s.M_rho = orbit_intersection(rep, detail::splitting_curvette(orbit, level), level, &divisors);
        if (static_cast<long>(divisors) != s.deg) {
            throw internal_error("splitting curvette meets " + std::to_string(divisors) + " conjugate divisors, expected " +
                                 std::to_string(s.deg));
        }
        d.splittings.push_back(s);
    }
    validate(d);
    return d;
}

} // namespace motivic

#endif
