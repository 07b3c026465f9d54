#ifndef MOTIVIC_JSON_IO_HPP
#define MOTIVIC_JSON_IO_HPP

// JSON encodings of fields, branches, graph data and series.
//
//   rational      "p/q", "p" or an integer
//   field         {"minpoly": [a0, a1, ...], "automorphisms": [[...], ...]}
//   element       [c0, c1, ...] in the basis 1, alpha, alpha^2, ... or a rational
//   branch        {"kind": "branch", "field": F, "x_exponent": m,
//                  "y_terms": [[i, element], ...], "divisorial": {"M_delta": M} | null}
//   graph         {"kind": "graph", "g": g, "M_sigma": [...], "M_tau": [...],
//                  "splittings": [{"M_rho": r, "ell": l, "deg": d}, ...],
//                  "splitting_stream": {"M_rho": r, "ell": l, "scale": a, "shift": b} (optional),
//                  "divisorial": {"M_delta": M} | null}
//   document      a branch or graph payload, or {"input": payload, "field": F,
//                 "defaults": {"order": N}}
//
// A splitting stream continues the finite list without end: the k-th
// generated splitting has M_rho_{k+1} = a * M_rho_k + b and a constant ell.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include <motivic/branch.hpp>
#include <motivic/errors.hpp>
#include <motivic/galois.hpp>
#include <motivic/lseries.hpp>
#include <motivic/numfield.hpp>

namespace motivic::io
{

using json = nlohmann::ordered_json;

inline mpq_class parse_rational(const json &j)
{
    if (j.is_number_integer()) {
        return mpq_class(mpz_class(j.dump()));
    }
    if (!j.is_string()) {
        throw invalid_input("expected a rational (\"p/q\" or integer), got " + j.dump());
    }
    const std::string s = j.get<std::string>();
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0) {
        throw invalid_input("malformed rational \"" + s + "\"");
    }
    if (q.get_den() == 0) {
        throw invalid_input("zero denominator in \"" + s + "\"");
    }
    q.canonicalize();
    return q;
}

inline std::string rational_string(const mpq_class &q) { return q.get_str(); }

inline RatPoly parse_ratpoly(const json &j)
{
    if (!j.is_array()) {
        throw invalid_input("expected an array of rationals, got " + j.dump());
    }
    RatPoly p;
    for (const auto &c : j) {
        p.push_back(parse_rational(c));
    }
    return p;
}

inline json ratpoly_json(const RatPoly &p)
{
    json a = json::array();
    for (const auto &c : p) {
        a.push_back(rational_string(c));
    }
    return a;
}

inline FieldPtr parse_field(const json &j)
{
    if (!j.is_object() || !j.contains("minpoly")) {
        throw invalid_input("field needs a \"minpoly\" array");
    }
    std::vector<RatPoly> autos;
    if (j.contains("automorphisms")) {
        for (const auto &a : j.at("automorphisms")) {
            autos.push_back(parse_ratpoly(a));
        }
    }
    return make_field(parse_ratpoly(j.at("minpoly")), std::move(autos));
}

inline json field_json(const FieldPtr &f)
{
    json autos = json::array();
    for (const auto &a : f->automorphisms()) {
        autos.push_back(ratpoly_json(a));
    }
    return json{{"minpoly", ratpoly_json(f->minpoly())}, {"automorphisms", autos}};
}

inline FieldElement parse_element(const FieldPtr &f, const json &j)
{
    if (j.is_array()) {
        RatPoly c = parse_ratpoly(j);
        if (c.size() > f->degree()) {
            throw invalid_input("field element has more coordinates than the field degree");
        }
        return FieldElement(f, c);
    }
    return FieldElement(f, parse_rational(j));
}

inline long parse_long(const json &j, const char *what)
{
    if (!j.is_number_integer()) {
        throw invalid_input(std::string(what) + " must be an integer, got " + j.dump());
    }
    return j.get<long>();
}

inline std::optional<long> parse_divisorial(const json &j)
{
    if (!j.contains("divisorial") || j.at("divisorial").is_null()) {
        return std::nullopt;
    }
    return parse_long(j.at("divisorial").at("M_delta"), "M_delta");
}

struct BranchInput {
    PuiseuxBranch branch;
    std::optional<long> M_delta;
};

inline BranchInput parse_branch(const json &j, const FieldPtr &fallback_field = nullptr)
{
    FieldPtr f = j.contains("field") ? parse_field(j.at("field")) : fallback_field;
    if (!f) {
        throw invalid_input("branch input requires a field");
    }
    std::vector<YTerm> terms;
    for (const auto &t : j.at("y_terms")) {
        if (!t.is_array() || t.size() != 2) {
            throw invalid_input("y term must be [exponent, coefficient], got " + t.dump());
        }
        terms.push_back({parse_long(t[0], "y exponent"), parse_element(f, t[1])});
    }
    return {PuiseuxBranch(f, parse_long(j.at("x_exponent"), "x_exponent"), std::move(terms)), parse_divisorial(j)};
}

inline json branch_json(const PuiseuxBranch &b)
{
    json terms = json::array();
    for (const auto &t : b.terms()) {
        terms.push_back(json::array({t.exponent, ratpoly_json(t.coeff.coords())}));
    }
    return json{{"kind", "branch"}, {"field", field_json(b.field())}, {"x_exponent", b.m()}, {"y_terms", terms}};
}

struct StreamSpec {
    long first = 0;
    long ell = 2;
    long scale = 1;
    long shift = 1;
};

struct GraphInput {
    GResolutionData data; // divisorial deg_s filled in from the finite tower
    std::optional<long> M_delta;
    std::optional<StreamSpec> stream;

    // Splittings: the finite list, then the generated continuation.
    SplittingStream splittings() const
    {
        auto state = std::make_shared<std::pair<std::size_t, Splitting>>(0, Splitting{});
        const auto finite = data.splittings;
        const auto spec = stream;
        const long top = data.top_degree();
        return [state, finite, spec, top]() -> std::optional<Splitting> {
            auto &[k, last] = *state;
            if (k < finite.size()) {
                return finite[k++];
            }
            if (!spec) {
                return std::nullopt;
            }
            Splitting next;
            if (k == finite.size()) {
                next = Splitting{spec->first, spec->ell, top};
            } else {
                next = Splitting{spec->scale * last.M_rho + spec->shift, spec->ell,
                                 GResolutionData::checked_mul(last.deg, last.ell)};
            }
            ++k;
            last = next;
            return next;
        };
    }
};

inline GraphInput parse_graph(const json &j)
{
    GraphInput in;
    auto &d = in.data;
    const long g = parse_long(j.at("g"), "g");
    if (g < 0) {
        throw invalid_input("g must be nonnegative");
    }
    d.g = static_cast<std::size_t>(g);
    for (const auto &v : j.at("M_sigma")) {
        d.M_sigma.push_back(parse_long(v, "M_sigma"));
    }
    for (const auto &v : j.at("M_tau")) {
        d.M_tau.push_back(parse_long(v, "M_tau"));
    }
    if (j.contains("splittings")) {
        for (const auto &s : j.at("splittings")) {
            d.splittings.push_back(
                {parse_long(s.at("M_rho"), "M_rho"), parse_long(s.at("ell"), "ell"), parse_long(s.at("deg"), "deg")});
        }
    }
    if (j.contains("splitting_stream") && !j.at("splitting_stream").is_null()) {
        const auto &s = j.at("splitting_stream");
        StreamSpec spec;
        spec.first = parse_long(s.at("M_rho"), "M_rho");
        spec.ell = parse_long(s.at("ell"), "ell");
        spec.scale = parse_long(s.value("scale", json(1)), "scale");
        spec.shift = parse_long(s.value("shift", json(1)), "shift");
        if (spec.ell < 2 || spec.scale < 1 || spec.shift < 0 || (spec.scale == 1 && spec.shift == 0)) {
            throw invalid_input("splitting stream must have ell >= 2 and strictly increasing M_rho");
        }
        if (!d.splittings.empty() && spec.first < d.splittings.back().M_rho) {
            throw invalid_input("splitting stream must continue after the last listed splitting");
        }
        in.stream = spec;
        if (j.contains("divisorial") && !j.at("divisorial").is_null()) {
            throw invalid_input("an infinite splitting tower has no divisorial vertex");
        }
    }
    in.M_delta = parse_divisorial(j);
    if (in.M_delta) {
        d = attach_divisorial(d, *in.M_delta);
    }
    validate(d);
    return in;
}

inline json graph_json(const GResolutionData &d)
{
    json sp = json::array();
    for (const auto &s : d.splittings) {
        sp.push_back(json{{"M_rho", s.M_rho}, {"ell", s.ell}, {"deg", s.deg}});
    }
    json out{{"kind", "graph"}, {"g", d.g}, {"M_sigma", d.M_sigma}, {"M_tau", d.M_tau}, {"splittings", sp}};
    out["divisorial"] = d.divisorial ? json{{"M_delta", d.divisorial->M_delta}} : json(nullptr);
    return out;
}

struct InputDocument {
    std::optional<BranchInput> branch;
    std::optional<GraphInput> graph;
    std::optional<long> default_order;
};

inline InputDocument parse_document(const json &doc)
{
    if (!doc.is_object()) {
        throw invalid_input("input document must be a JSON object");
    }
    const json &payload = doc.contains("input") ? doc.at("input") : doc;
    if (!payload.is_object()) {
        throw invalid_input("\"input\" must be a JSON object");
    }
    std::string kind = payload.value("kind", std::string());
    if (kind.empty()) {
        if (payload.contains("x_exponent")) {
            kind = "branch";
        } else if (payload.contains("M_sigma")) {
            kind = "graph";
        }
    }
    InputDocument out;
    if (kind == "branch") {
        FieldPtr f = doc.contains("field") ? parse_field(doc.at("field")) : nullptr;
        out.branch = parse_branch(payload, f);
    } else if (kind == "graph") {
        out.graph = parse_graph(payload);
    } else {
        throw invalid_input("input must be a branch or a graph payload");
    }
    if (doc.contains("defaults") && doc.at("defaults").contains("order")) {
        const long n = parse_long(doc.at("defaults").at("order"), "order");
        if (n < 0) {
            throw invalid_input("order must be nonnegative");
        }
        out.default_order = n;
    }
    return out;
}

inline json lpoly_json(const LPolynomial &p)
{
    json a = json::array();
    for (const auto &c : p.coeffs()) {
        if (c.fits_slong_p()) {
            a.push_back(c.get_si());
        } else {
            a.push_back(c.get_str());
        }
    }
    return a;
}

inline LPolynomial parse_lpoly(const json &j)
{
    std::vector<mpz_class> c;
    for (const auto &x : j) {
        const mpq_class q = parse_rational(x);
        if (q.get_den() != 1) {
            throw invalid_input("series coefficients must be integers");
        }
        c.push_back(q.get_num());
    }
    return LPolynomial(c);
}

inline json series_json(const LSeries &s, const std::string &kind, const std::string &valuation, const std::string &factored)
{
    json coeffs = json::array();
    for (const auto &c : s.coeffs()) {
        coeffs.push_back(lpoly_json(c));
    }
    return json{{"order", s.order()}, {"kind", kind}, {"valuation", valuation}, {"coefficients", coeffs}, {"factored", factored}};
}

inline LSeries parse_series(const json &j)
{
    const long n = parse_long(j.at("order"), "order");
    const auto &coeffs = j.at("coefficients");
    if (n < 0 || coeffs.size() != static_cast<std::size_t>(n) + 1) {
        throw invalid_input("series needs order + 1 coefficients");
    }
    LSeries s(static_cast<std::size_t>(n));
    for (std::size_t v = 0; v < coeffs.size(); ++v) {
        s[v] = parse_lpoly(coeffs[v]);
    }
    return s;
}

} // namespace motivic::io

#endif
