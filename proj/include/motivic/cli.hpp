#ifndef MOTIVIC_CLI_HPP
#define MOTIVIC_CLI_HPP

// Command line front end: compute, verify, fixtures.
// Exit status: 0 success, 1 invalid input or failed check, 2 resource cap.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <motivic/errors.hpp>
#include <motivic/galois.hpp>
#include <motivic/json_io.hpp>
#include <motivic/oracle.hpp>
#include <motivic/poincare.hpp>

namespace motivic::cli
{

struct Settings {
    std::string input;
    std::optional<long> order;
    std::string series = "generalized";
    std::string valuation = "curve";
    std::string format = "coefficients";
    std::string against = "all";
    std::string graph_override;
    std::size_t max_cells = OracleLimits{}.max_cells;
    long max_truncation = default_hard_cap;
};

inline io::json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw invalid_input("cannot open " + path);
    }
    try {
        return io::json::parse(in);
    } catch (const io::json::parse_error &e) {
        throw invalid_input(path + ": " + e.what());
    }
}

// Graph data for the formulas together with the branch, when there is one.
struct Resolved {
    GResolutionData data;
    std::optional<PuiseuxBranch> branch;
    std::optional<long> branch_M_delta; // m-value of the divisorial vertex on the branch itself
    std::size_t order = 0;
};

inline std::size_t resolve_order(const Settings &s, const io::InputDocument &doc)
{
    std::optional<long> n = s.order ? s.order : doc.default_order;
    if (!n) {
        throw invalid_input("no --order given and the input has no default order");
    }
    if (*n < 0) {
        throw invalid_input("order must be nonnegative");
    }
    return static_cast<std::size_t>(*n);
}

// Branch mode: the orbit's quotient graph; a divisorial vertex is named by
// its m-value on the branch and carries the orbit sum as M_delta.
inline GResolutionData branch_graph(const PuiseuxBranch &b, std::optional<long> m_delta)
{
    GResolutionData d = splitting_tower(orbit_of(b));
    if (m_delta) {
        const VertexId v = vertex_for_m_value(b, *m_delta);
        d = attach_divisorial(d, orbit_intersection(b, curvette_at(b, v), curvette_level(b, v)));
    }
    return d;
}

// Non-fatal validation remarks go to `notes` as "note: ..." lines.
inline Resolved resolve(const Settings &s, const io::json &j, std::ostream &notes)
{
    const io::InputDocument doc = io::parse_document(j);
    Resolved r;
    r.order = resolve_order(s, doc);
    if (doc.branch) {
        r.branch = doc.branch->branch;
        r.branch_M_delta = doc.branch->M_delta;
        r.data = branch_graph(*r.branch, r.branch_M_delta);
    } else {
        r.data = doc.graph->stream ? with_stream(doc.graph->data, doc.graph->splittings(), r.order) : doc.graph->data;
    }
    for (const auto &remark : validate(r.data)) {
        notes << "note: " << remark << '\n';
    }
    return r;
}

inline SeriesKind parse_kind(const std::string &s) { return s == "classical" ? SeriesKind::classical : SeriesKind::generalized; }
inline ValuationKind parse_valuation(const std::string &s)
{
    return s == "divisorial" ? ValuationKind::divisorial : ValuationKind::curve;
}

inline int cmd_compute(const Settings &s, std::ostream &out, std::ostream &err)
{
    const Resolved r = resolve(s, read_json_file(s.input), err);
    const SeriesRequest req{r.data, r.order, parse_kind(s.series), parse_valuation(s.valuation)};
    const LSeries series = compute(req);
    const std::string factored = render_factored(request_factorization(req));
    if (s.format == "factored") {
        out << factored << '\n';
    } else if (s.format == "json") {
        out << io::series_json(series, s.series, s.valuation, factored).dump(2) << '\n';
    } else {
        out << series.to_string();
    }
    return 0;
}

struct CheckTable {
    std::ostream &out;
    bool all_pass = true;

    void row(const std::string &name, bool pass, const std::string &detail = "")
    {
        all_pass = all_pass && pass;
        out << (pass ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) {
            out << "  (" << detail << ")";
        }
        out << '\n';
    }
};

inline void verify_specialize(const GResolutionData &d, std::size_t N, CheckTable &t)
{
    const LSeries gc = generalized_curve(d, N), cc = classical_curve(d, N);
    t.row("specialize: curve L=1 gives classical", specialize_L(gc, 1) == cc);
    t.row("specialize: curve coefficients are geometric sums", coefficientwise_generalize(cc) == gc);
    if (d.divisorial) {
        const LSeries gd = generalized_divisorial(d, N), cd = classical_divisorial(d, N);
        t.row("specialize: divisorial L=1 gives classical", specialize_L(gd, 1) == cd);
        t.row("specialize: divisorial coefficients are geometric sums", coefficientwise_generalize(cd) == gd);
        const BinomialFactorization extra{
            {static_cast<std::size_t>(d.divisorial->deg_s), static_cast<std::size_t>(d.divisorial->M_delta), -1}};
        t.row("specialize: divisorial = curve / (1 - L^deg_s t^M_delta)", gd == gc * expand_binomial_product(extra, N));
    }
}

inline void verify_stepwise(const GResolutionData &d, std::size_t N, CheckTable &t)
{
    const std::size_t s = d.splittings.size();
    t.row("stepwise: P^(s+1) equals the closed form", stepwise_pj(d, s + 1, N) == generalized_curve(d, N),
          "s = " + std::to_string(s) + (rho1_is_sigma0(d) ? ", starting from P^(2)" : ""));
    for (std::size_t j = rho1_is_sigma0(d) ? 2 : 1; j <= s + 1; ++j) {
        t.row("stepwise: coefficient bound at stage " + std::to_string(j), stepwise_bound_holds(d, j, N));
    }
}

inline void compare_table(std::ostream &out, const std::string &title, const LSeries &formula, const LSeries &oracle,
                          CheckTable &t)
{
    out << title << "\n  v  formula  oracle  match\n";
    std::optional<std::size_t> first_bad;
    for (std::size_t v = 0; v <= formula.order(); ++v) {
        const bool ok = formula[v] == oracle[v];
        if (!ok && !first_bad) {
            first_bad = v;
        }
        out << "  " << v << "  " << formula[v].to_string() << "  " << oracle[v].to_string() << "  " << (ok ? "yes" : "NO")
            << '\n';
    }
    t.row(title, !first_bad, first_bad ? "first mismatch at v = " + std::to_string(*first_bad) : "");
}

inline void verify_oracle(const Resolved &r, const GResolutionData &d, const Settings &s, std::ostream &out, CheckTable &t)
{
    const OracleLimits lim{s.max_cells};
    const long N = static_cast<long>(r.order);
    const auto dims = curve_dims(*r.branch, N, lim);
    compare_table(out, "oracle: classical curve series", classical_curve(d, r.order), oracle_classical(dims), t);
    compare_table(out, "oracle: generalized curve series", generalized_curve(d, r.order), oracle_generalized(dims), t);
    if (r.branch_M_delta && d.divisorial) {
        const auto dd = divisorial_dims(*r.branch, *r.branch_M_delta, N, lim);
        t.row("oracle: divisorial genericity certified", dd.certified);
        compare_table(out, "oracle: classical divisorial series", classical_divisorial(d, r.order),
                      oracle_classical(dd.dims), t);
        compare_table(out, "oracle: generalized divisorial series", generalized_divisorial(d, r.order),
                      oracle_generalized(dd.dims), t);
    }
}

inline int cmd_verify(const Settings &s, std::ostream &out, std::ostream &err)
{
    const Resolved r = resolve(s, read_json_file(s.input), err);
    GResolutionData d = r.data;
    if (!s.graph_override.empty()) {
        const io::InputDocument g = io::parse_document(read_json_file(s.graph_override));
        if (!g.graph) {
            throw invalid_input("--graph expects a graph payload");
        }
        d = g.graph->stream ? with_stream(g.graph->data, g.graph->splittings(), r.order) : g.graph->data;
    }
    const bool want_oracle = s.against == "oracle" || s.against == "all";
    if (s.against == "oracle" && !r.branch) {
        throw invalid_input("oracle unavailable for this input");
    }
    CheckTable t{out};
    if (s.against == "specialize" || s.against == "all") {
        verify_specialize(d, r.order, t);
    }
    if (s.against == "stepwise" || s.against == "all") {
        verify_stepwise(d, r.order, t);
    }
    if (want_oracle) {
        if (r.branch) {
            verify_oracle(r, d, s, out, t);
        } else {
            out << "SKIP oracle  (graph-mode input has no branch)\n";
        }
    }
    return t.all_pass ? 0 : 1;
}

inline int cmd_fixtures(std::ostream &out)
{
    CheckTable t{out};
    t.row("two transversal smooth branches: identity and fibre classes", fixtures::example1());
    const BivarPolynomial perturbed{{{0, 0}, 1}, {{1, 0}, -1}, {{0, 1}, -1}, {{1, 1}, LPolynomial({0, 0, 1})}};
    t.row("two transversal smooth branches: perturbed numerator is rejected", !fixtures::example1(perturbed));
    t.row("two-blow-up closed form: smoke test", fixtures::example2_smoke(20));
    for (long M : {26L, 27L}) {
        const auto d = fixtures::semigroup_4_6_13(M);
        const std::string name = "<4,6,13> with M_delta = " + std::to_string(M);
        t.row(name + ": classical series", classical_divisorial(d, 60) ==
                                               expand_binomial_product(fixtures::closed_form_classical(M), 60));
        t.row(name + ": generalized series", generalized_divisorial(d, 60) ==
                                                 expand_binomial_product(fixtures::closed_form_generalized(M), 60));
        t.row(name + ": factored form", divisorial_factorization(d, 60) == fixtures::closed_form_generalized(M),
              render_factored(divisorial_factorization(d, 60)));
    }
    return t.all_pass ? 0 : 1;
}

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Poincare series of plane valuations over subfields of C"};
    app.require_subcommand(1);
    Settings s;
    app.add_option("--max-cells", s.max_cells, "Cell budget of the jet matrices used by the oracle");
    app.add_option("--max-truncation", s.max_truncation, "Largest tau-truncation tried for intersection numbers");

    auto *compute_cmd = app.add_subcommand("compute", "Print a Poincare series");
    compute_cmd->add_option("--input", s.input, "Input document (JSON)")->required();
    compute_cmd->add_option("--order", s.order, "Truncation order N");
    compute_cmd->add_option("--series", s.series)->check(CLI::IsMember({"classical", "generalized"}));
    compute_cmd->add_option("--valuation", s.valuation)->check(CLI::IsMember({"curve", "divisorial"}));
    compute_cmd->add_option("--format", s.format)->check(CLI::IsMember({"coefficients", "factored", "json"}));

    auto *verify_cmd = app.add_subcommand("verify", "Check the formulas against independent computations");
    verify_cmd->add_option("--input", s.input, "Input document (JSON)")->required();
    verify_cmd->add_option("--order", s.order, "Truncation order N");
    verify_cmd->add_option("--against", s.against)->check(CLI::IsMember({"oracle", "stepwise", "specialize", "all"}));
    verify_cmd->add_option("--graph", s.graph_override, "Graph data to use for the formulas instead of the input's");

    auto *fixtures_cmd = app.add_subcommand("fixtures", "Run the built-in worked examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << e.what() << '\n';
        return 1;
    }

    const long saved_cap = truncation_cap();
    truncation_cap() = s.max_truncation;
    int status = 0;
    try {
        if (compute_cmd->parsed()) {
            status = cmd_compute(s, out, err);
        } else if (verify_cmd->parsed()) {
            status = cmd_verify(s, out, err);
        } else if (fixtures_cmd->parsed()) {
            status = cmd_fixtures(out);
        }
    } catch (const invalid_input &e) {
        err << "error: " << e.what() << '\n';
        status = 1;
    } catch (const io::json::exception &e) {
        err << "error: " << e.what() << '\n';
        status = 1;
    } catch (const resource_error &e) {
        err << "resource limit: " << e.what() << '\n';
        status = 2;
    }
    truncation_cap() = saved_cap;
    return status;
}

} // namespace motivic::cli

#endif
