#include <random>

#include <gtest/gtest.h>

#include <motivic/poincare.hpp>

using namespace motivic;

namespace
{

GResolutionData graph(std::size_t g, std::vector<long> sigma, std::vector<long> tau, std::vector<Splitting> s)
{
    GResolutionData d;
    d.g = g;
    d.M_sigma = std::move(sigma);
    d.M_tau = std::move(tau);
    d.splittings = std::move(s);
    return d;
}

LSeries classical(const std::vector<long> &coeffs)
{
    LSeries s(coeffs.size() - 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        s[i] = LPolynomial(coeffs[i]);
    }
    return s;
}

const GResolutionData cusp = graph(1, {2, 3}, {6}, {});
const GResolutionData sqrt2_pair = graph(0, {1}, {}, {{1, 2, 1}});
const GResolutionData cusp_pair = graph(1, {2, 3}, {6}, {{7, 2, 1}});
const GResolutionData two_step = graph(0, {1}, {}, {{1, 2, 1}, {3, 2, 2}});

} // namespace

TEST(ClassicalCurve, Examples)
{
    EXPECT_EQ(classical_curve(cusp, 8), classical({1, 0, 1, 1, 1, 1, 1, 1, 1}));
    EXPECT_EQ(classical_curve(sqrt2_pair, 3), classical({1, 2, 2, 2}));
    for (const auto &d : {cusp, sqrt2_pair, cusp_pair, two_step}) {
        EXPECT_TRUE(classical_curve(d, 0).is_one());
        EXPECT_TRUE(classical_curve(d, 20).is_classical());
    }
}

TEST(GeneralizedCurve, Examples)
{
    const auto s = generalized_curve(sqrt2_pair, 3);
    EXPECT_EQ(s[0], LPolynomial(1));
    for (std::size_t v = 1; v <= 3; ++v) {
        EXPECT_EQ(s[v], LPolynomial({1, 1}));
    }
    EXPECT_EQ(s, expand_binomial_product({{2, 2, 1}, {0, 1, -1}, {1, 1, -1}}, 3));
    EXPECT_EQ(generalized_curve(cusp, 30), classical_curve(cusp, 30));
}

TEST(Divisorial, SemigroupFourSixThirteenClosedForms)
{
    for (long M : {26L, 27L}) {
        const auto d = fixtures::semigroup_4_6_13(M);
        EXPECT_EQ(classical_divisorial(d, 60), expand_binomial_product(fixtures::closed_form_classical(M), 60));
        EXPECT_EQ(generalized_divisorial(d, 60), expand_binomial_product(fixtures::closed_form_generalized(M), 60));
        EXPECT_TRUE(classical_divisorial(d, 0).is_one());
    }
    EXPECT_EQ(render_factored(divisorial_factorization(fixtures::semigroup_4_6_13(26), 30)),
              "(1 - t^12)(1 - t^26) / ((1 - t^4)(1 - t^6)(1 - t^13)(1 - L*t^26))");
    // the classical form for 26 cancels (1 - t^26) against the divisorial factor
    EXPECT_EQ(render_factored(divisorial_factorization(fixtures::semigroup_4_6_13(26), 30).classical_shadow()),
              "(1 - t^12) / ((1 - t^4)(1 - t^6)(1 - t^13))");
    EXPECT_THROW(classical_divisorial(cusp, 5), invalid_input);
    EXPECT_THROW(generalized_divisorial(cusp, 5), invalid_input);
}

TEST(Stepwise, TelescopesToClosedForm)
{
    EXPECT_EQ(stepwise_pj(cusp, 1, 20), expand_binomial_product({{0, 6, 1}, {0, 2, -1}, {0, 3, -1}}, 20));
    EXPECT_EQ(stepwise_pj(sqrt2_pair, 2, 20), generalized_curve(sqrt2_pair, 20));
    EXPECT_THROW(stepwise_pj(sqrt2_pair, 1, 20), invalid_input);
    EXPECT_THROW(stepwise_pj(cusp, 2, 20), invalid_input);
    EXPECT_THROW(stepwise_pj(cusp, 0, 20), invalid_input);
    for (const auto &d : {cusp, cusp_pair, two_step}) {
        EXPECT_EQ(stepwise_pj(d, d.splittings.size() + 1, 40), generalized_curve(d, 40));
        for (std::size_t j = rho1_is_sigma0(d) ? 2 : 1; j <= d.splittings.size() + 1; ++j) {
            EXPECT_TRUE(stepwise_bound_holds(d, j, 40)) << j;
        }
    }
}

TEST(Invariants, SpecializationAndGeometricSums)
{
    for (const auto &d : {cusp, sqrt2_pair, cusp_pair, two_step}) {
        const auto g = generalized_curve(d, 40, {true});
        EXPECT_EQ(specialize_L(g, 1), classical_curve(d, 40));
        const auto dd = attach_divisorial(d, 41);
        const auto gd = generalized_divisorial(dd, 60);
        EXPECT_EQ(specialize_L(gd, 1), classical_divisorial(dd, 60));
        EXPECT_EQ(gd, generalized_curve(d, 60) * expand_binomial_product({{static_cast<std::size_t>(dd.top_degree()), 41, -1}}, 60));
    }
}

TEST(Invariants, GeometricCheckCatchesNonGeometricData)
{
    // deg = 2 at the first splitting: the t coefficient of
    // (1 - L^4 t^2)/((1 - t)(1 - L^2 t)) is 1 + L^2
    EXPECT_THROW(generalized_curve(graph(0, {1}, {}, {{1, 2, 2}}), 5, {true}), internal_error);
    EXPECT_NO_THROW(generalized_curve(graph(0, {1}, {}, {{1, 3, 1}}), 5, {true}));
}

TEST(Stream, TruncationAtOrderAndTwiceOrderAgree)
{
    auto make = [] {
        auto state = std::make_shared<std::pair<long, long>>(1, 1);
        return SplittingStream([state]() -> std::optional<Splitting> {
            Splitting s{state->first, 2, state->second};
            state->first = 2 * state->first + 1;
            state->second *= 2;
            return s;
        });
    };
    const std::size_t N = 30;
    const auto base = graph(0, {1}, {}, {});
    const auto a = with_stream(base, make(), N);
    const auto b = with_stream(base, make(), 2 * N);
    EXPECT_LT(a.splittings.size(), b.splittings.size());
    EXPECT_EQ(generalized_curve(a, N), generalized_curve(b, 2 * N).truncated(N));
    EXPECT_EQ(generalized_curve(b, N), generalized_curve(a, N));
}

TEST(Fixtures, ExampleOne)
{
    EXPECT_TRUE(fixtures::example1());
    const BivarPolynomial perturbed{{{0, 0}, 1}, {{1, 0}, -1}, {{0, 1}, -1}, {{1, 1}, LPolynomial({0, 0, 1})}};
    EXPECT_FALSE(fixtures::example1(perturbed));
}

TEST(Fixtures, ExampleTwoSmoke)
{
    EXPECT_TRUE(fixtures::example2_smoke(5));
    EXPECT_TRUE(fixtures::example2_smoke(20));
    EXPECT_THROW(fixtures::example2_smoke(4), invalid_input);
}
