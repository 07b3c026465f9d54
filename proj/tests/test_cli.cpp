#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include <motivic/cli.hpp>

using namespace motivic;

namespace
{

struct Result {
    int status;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "motivic");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string input(const std::string &name) { return std::string(MOTIVIC_INPUTS_DIR) + "/" + name; }

std::string temp_file(const std::string &name, const std::string &content)
{
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST(Cli, FactoredDivisorialOutput)
{
    const auto r = run({"compute", "--input", input("graph_4_6_13_delta26.json"), "--series", "generalized", "--valuation",
                        "divisorial", "--order", "30", "--format", "factored"});
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "(1 - t^12)(1 - t^26) / ((1 - t^4)(1 - t^6)(1 - t^13)(1 - L*t^26))\n");
}

TEST(Cli, CuspCoefficientLines)
{
    const auto r = run({"compute", "--input", input("cusp.json"), "--series", "classical", "--order", "8"});
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "0: 1\n1: 0\n2: 1\n3: 1\n4: 1\n5: 1\n6: 1\n7: 1\n8: 1\n");
}

TEST(Cli, JsonRoundTripAndDeterminism)
{
    const std::vector<std::string> args{"compute", "--input", input("sqrt2_sqrt3_tower.json"), "--order", "12", "--format", "json"};
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto parsed = io::parse_series(io::json::parse(a.out));
    const auto doc = io::parse_document(cli::read_json_file(input("sqrt2_sqrt3_tower.json")));
    const auto data = cli::branch_graph(doc.branch->branch, std::nullopt);
    EXPECT_EQ(parsed, generalized_curve(data, 12));
}

TEST(Cli, GraphAndBranchJsonRoundTrip)
{
    const auto d = fixtures::semigroup_4_6_13(27);
    const auto back = io::parse_document(io::graph_json(d));
    ASSERT_TRUE(back.graph);
    EXPECT_EQ(back.graph->data, d);
    const auto doc = io::parse_document(cli::read_json_file(input("cusp_pair.json")));
    const auto &b = doc.branch->branch;
    const auto again = io::parse_document(io::branch_json(b));
    const auto &c = again.branch->branch;
    EXPECT_EQ(c.field()->minpoly(), b.field()->minpoly());
    EXPECT_EQ(c.m(), b.m());
    ASSERT_EQ(c.terms().size(), b.terms().size());
    for (std::size_t i = 0; i < b.terms().size(); ++i) {
        EXPECT_EQ(c.terms()[i].exponent, b.terms()[i].exponent);
        EXPECT_EQ(as_q_vector(c.terms()[i].coeff), as_q_vector(b.terms()[i].coeff));
    }
}

TEST(Cli, DefaultOrderFromDocument)
{
    const auto r = run({"compute", "--input", input("branch_4_6_7.json"), "--valuation", "divisorial", "--format", "factored"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "(1 - t^12)(1 - t^26) / ((1 - t^4)(1 - t^6)(1 - t^13)(1 - L*t^26))\n");
}

TEST(Cli, InputErrors)
{
    EXPECT_EQ(run({"compute", "--input", input("cusp.json")}).status, 1); // no order anywhere
    EXPECT_EQ(run({"compute", "--input", input("no_such_file.json"), "--order", "3"}).status, 1);
    const auto bad = run({"compute", "--input", temp_file("bad.json", "{\"kind\": \"graph\",\n  \"g\": "), "--order", "3"});
    EXPECT_EQ(bad.status, 1);
    EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
    const auto invalid = temp_file("invalid.json", R"({"kind":"graph","g":0,"M_sigma":[1],"M_tau":[],"splittings":[{"M_rho":1,"ell":1,"deg":1}]})");
    EXPECT_EQ(run({"compute", "--input", invalid, "--order", "3"}).status, 1);
    const auto nonprimitive = temp_file("np.json", R"({"kind":"branch","field":{"minpoly":["0","1"]},"x_exponent":2,"y_terms":[[4,"1"]]})");
    EXPECT_EQ(run({"compute", "--input", nonprimitive, "--order", "3"}).status, 1);
    EXPECT_EQ(run({"compute", "--input", input("cusp.json"), "--order", "3", "--format", "xml"}).status, 1);
    EXPECT_EQ(run({}).status, 1);
    EXPECT_EQ(run({"compute", "--input", input("cusp.json"), "--order", "5", "--valuation", "divisorial"}).status, 1);
}

TEST(Cli, ResourceCap)
{
    EXPECT_EQ(run({"--max-cells", "10", "verify", "--input", input("cusp.json"), "--order", "30", "--against", "oracle"}).status, 2);
}

TEST(Cli, VerifySuites)
{
    const auto all = run({"verify", "--input", input("sqrt2_lines.json"), "--against", "all", "--order", "20"});
    EXPECT_EQ(all.status, 0) << all.out;
    EXPECT_EQ(all.out.find("FAIL"), std::string::npos);
    EXPECT_EQ(run({"verify", "--input", input("cusp_pair.json"), "--order", "25"}).status, 0);
    EXPECT_EQ(run({"verify", "--input", input("branch_4_6_7.json")}).status, 0);
    EXPECT_EQ(run({"verify", "--input", input("infinite_tower.json"), "--order", "40", "--against", "stepwise"}).status, 0);
    // graph-only input has nothing to substitute into
    const auto g = run({"verify", "--input", input("graph_4_6_13_delta26.json"), "--against", "oracle", "--order", "10"});
    EXPECT_EQ(g.status, 1);
    EXPECT_NE(g.err.find("oracle unavailable"), std::string::npos);
}

TEST(Cli, OracleDetectsMutatedGraph)
{
    const auto mutated =
        temp_file("mut.json", R"({"kind":"graph","g":0,"M_sigma":[1],"M_tau":[],"splittings":[{"M_rho":1,"ell":3,"deg":1}]})");
    const auto r = run({"verify", "--input", input("sqrt2_lines.json"), "--against", "oracle", "--order", "6", "--graph", mutated});
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("FAIL oracle: classical curve series  (first mismatch at v = 2)"), std::string::npos) << r.out;
}

TEST(Cli, Fixtures)
{
    const auto r = run({"fixtures"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("PASS two transversal smooth branches: identity"), std::string::npos);
    EXPECT_NE(r.out.find("M_delta = 26"), std::string::npos);
    EXPECT_NE(r.out.find("M_delta = 27"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, EqualSplittingValuesAreNotedNotRejected)
{
    const auto path = temp_file("eq.json", R"({"kind":"graph","g":0,"M_sigma":[1],"M_tau":[],
        "splittings":[{"M_rho":1,"ell":2,"deg":1},{"M_rho":1,"ell":2,"deg":2}]})");
    const auto r = run({"compute", "--input", path, "--order", "4"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.err.find("note: splitting 2: M_rho equals the previous splitting value"), std::string::npos) << r.err;
}
