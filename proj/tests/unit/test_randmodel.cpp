#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fkpp/errors.hpp"
#include "fkpp/grid.hpp"
#include "fkpp/random_model.hpp"
#include "fkpp/test_problem.hpp"
#include "fkpp/truncated_normal.hpp"
#include "oracles.hpp"

namespace fkpp {
namespace {

const TruncatedNormal kReactionLaw{0.75, 0.08, 0.01, 1.0};

TEST(RandomVariableSpec, DeterministicDrawIsExact) {
    RandomStream stream(1, 2);
    EXPECT_EQ(sample_amplitude(RandomVariableSpec::deterministic(0.75), stream), 0.75);
}

TEST(RandomVariableSpec, RejectsInvalidLaws) {
    EXPECT_THROW(RandomVariableSpec::deterministic(NAN), ModelError);
    EXPECT_THROW(RandomVariableSpec::truncated_normal(0, 0, -1, 1), ModelError);
    EXPECT_THROW(RandomVariableSpec::truncated_normal(0, 1, 1, 1), ModelError);
    EXPECT_THROW(RandomVariableSpec::truncated_normal(0, 1, -INFINITY, 1), ModelError);
}

TEST(TruncatedNormal, ClosedFormMeanMatchesQuadrature) {
    for (const auto& law : {kReactionLaw, TruncatedNormal{0, 1, -1, 1}, TruncatedNormal{0, 1, 3, 4},
                            TruncatedNormal{2, 0.5, -1, 1.2}}) {
        EXPECT_NEAR(truncnorm::mean(law), testing::truncated_normal_mean_oracle(law), 1e-12);
    }
    EXPECT_NEAR(truncnorm::mean(kReactionLaw), 0.7497580042, 1e-10);
}

TEST(TruncatedNormal, SampleMeanOfReactionLaw) {
    const auto spec = RandomVariableSpec::truncated_normal(0.75, 0.08, 0.01, 1.0);
    RandomStream stream(2024, 7);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += sample_amplitude(spec, stream);
    EXPECT_NEAR(sum / n, testing::truncated_normal_mean_oracle(kReactionLaw), 3e-4);
}

TEST(TruncatedNormal, DrawsStayInsideOpenSupport) {
    const auto spec = RandomVariableSpec::truncated_normal(0, 1, -1, 1);
    RandomStream stream(5, 0);
    for (int i = 0; i < 100000; ++i) {
        const double v = sample_amplitude(spec, stream);
        ASSERT_GT(v, -1.0);
        ASSERT_LT(v, 1.0);
    }
}

double ks_statistic(const TruncatedNormal& law, std::uint64_t seed, int n, bool rejection) {
    RandomStream stream(seed, 0);
    std::vector<double> x(n);
    for (auto& v : x) v = rejection ? truncnorm::sample_by_rejection(law, stream, 100000) : truncnorm::sample(law, stream);
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = truncnorm::cdf(law, x[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

struct KsCase {
    TruncatedNormal law;
    bool rejection;
};

class TruncatedNormalKs : public ::testing::TestWithParam<KsCase> {};

TEST_P(TruncatedNormalKs, EmpiricalCdfWithinOnePercentBand) {
    const int n = 100000;
    EXPECT_LE(ks_statistic(GetParam().law, 99, n, GetParam().rejection), 1.63 / std::sqrt(n));
}

INSTANTIATE_TEST_SUITE_P(
    Laws, TruncatedNormalKs,
    ::testing::Values(KsCase{kReactionLaw, false}, KsCase{{0, 1, -1, 1}, false}, KsCase{{0, 1, 4, 9}, false},
                      KsCase{{0, 1, -40, -38}, false}, KsCase{{1, 1e-3, 0.9999, 1.00005}, false},
                      KsCase{kReactionLaw, true}, KsCase{{0, 1, 2, 2.1}, true}, KsCase{{0, 1, 1, 8}, true},
                      KsCase{{0, 1, -6, -5}, true}));

TEST(TruncatedNormal, FarTailFallsBackWithoutLosingSupport) {
    const TruncatedNormal law{0, 1, 50, 51};
    RandomStream stream(3, 3);
    for (int i = 0; i < 1000; ++i) {
        const double v = truncnorm::sample(law, stream);
        ASSERT_GE(v, 50.0);
        ASSERT_LE(v, 51.0);
    }
}

TEST(TruncatedNormal, RejectionBudgetExhaustionIsReported) {
    RandomStream stream(0, 0);
    EXPECT_THROW(truncnorm::sample_by_rejection(kReactionLaw, stream, 0), SamplingError);
}

TEST(TruncatedNormal, StreamsAreReproducible) {
    RandomStream a(11, 42), b(11, 42), c(11, 43);
    const double x = truncnorm::sample(kReactionLaw, a);
    EXPECT_EQ(x, truncnorm::sample(kReactionLaw, b));
    EXPECT_NE(x, truncnorm::sample(kReactionLaw, c));
}

TEST(CoefficientBounds, Examples) {
    const Grid1D grid(1.0, 10);
    const auto one = RandomVariableSpec::deterministic(1.0);
    const Interval d = coefficient_bounds(CoefficientProcess(shape_by_name("one_plus_x_squared"), one), grid);
    EXPECT_DOUBLE_EQ(d.lower, 1.0);
    EXPECT_DOUBLE_EQ(d.upper, 2.0);
    const Interval b = coefficient_bounds(CoefficientProcess(shape_by_name("identity_x"), one), grid);
    EXPECT_DOUBLE_EQ(b.lower, 0.0);
    EXPECT_DOUBLE_EQ(b.upper, 1.0);
    const Interval a = coefficient_bounds(
        CoefficientProcess(shape_by_name("constant"), RandomVariableSpec::truncated_normal(0.75, 0.08, 0.01, 1)),
        grid);
    EXPECT_DOUBLE_EQ(a.lower, 0.01);
    EXPECT_DOUBLE_EQ(a.upper, 1.0);
}

TEST(CoefficientBounds, DeclaredBoundsMustContainValues) {
    const Grid1D grid(1.0, 10);
    const auto one = RandomVariableSpec::deterministic(1.0);
    EXPECT_NO_THROW(
        coefficient_bounds(CoefficientProcess(shape_by_name("one_plus_x_squared"), one, Interval{1, 2}), grid));
    EXPECT_THROW(
        coefficient_bounds(CoefficientProcess(shape_by_name("one_plus_x_squared"), one, Interval{1, 1}), grid),
        ModelError);
}

TEST(CoefficientProcess, DrawsRespectDeclaredBounds) {
    const Grid1D grid(1.0, 20);
    const CoefficientProcess proc(shape_by_name("one_plus_x_squared"),
                                  RandomVariableSpec::truncated_normal(1.0, 0.5, 0.2, 1.5), Interval{0.2, 3.0});
    const Interval declared = *proc.declared_bounds();
    for (int s = 0; s < 10000; ++s) {
        RandomStream stream(8, s);
        const double amp = sample_amplitude(proc.amplitude(), stream);
        for (int i = 0; i < grid.size(); ++i) {
            const double v = proc(grid.node(i), amp);
            ASSERT_GE(v, declared.lower);
            ASSERT_LE(v, declared.upper);
        }
    }
}

TEST(CoefficientProcess, Separability) {
    std::mt19937_64 rng(17);
    for (const char* name : {"one_plus_x_squared", "identity_x", "x_squared", "sin_pi_x", "one_minus_x"}) {
        const CoefficientProcess proc(shape_by_name(name), RandomVariableSpec::truncated_normal(0, 2, -3, 3));
        for (int s = 0; s < 50; ++s) {
            RandomStream stream(1, s);
            const double amp = sample_amplitude(proc.amplitude(), stream);
            for (int j = 0; j < 20; ++j) {
                const double x = testing::uniform(rng, 0.01, 0.99);
                const double shape = proc.shape()(x);
                if (std::abs(shape) < 1e-12) continue;
                ASSERT_NEAR(proc(x, amp) / shape, amp, 1e-13 * std::max(1.0, std::abs(amp)));
            }
        }
    }
}

TEST(Shapes, UnknownNameIsAConfigError) { EXPECT_THROW(shape_by_name("cosh"), ConfigError); }

TEST(Coherence, TestProblemIsCoherentAcrossSupport) {
    const Model m = make_test_problem();
    std::vector<AmplitudeDraws> draws;
    for (int j = 0; j <= 100; ++j) {
        AmplitudeDraws d = m.mean_draws();
        d[Role::reaction] = 0.01 + 0.99 * j / 100.0;
        draws.push_back(d);
    }
    const CoherenceReport r = check_coherence(m.initial, m.boundary, 1.0, draws);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.left_gap, 0.0);
    EXPECT_EQ(r.right_gap, 0.0);
}

TEST(Coherence, DetectsMismatch) {
    const InitialProcess zero{"zero", [](double, const AmplitudeDraws&) { return 0.0; }};
    const BoundaryProcess one{"one", [](double, const AmplitudeDraws&) { return 1.0; },
                              [](double, const AmplitudeDraws&) { return 0.0; }};
    const AmplitudeDraws d[] = {AmplitudeDraws{}};
    const CoherenceReport r = check_coherence(zero, one, 1.0, d);
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.left_gap, 1.0);
    EXPECT_EQ(r.right_gap, 0.0);
}

TEST(Coherence, ConstantHalfPasses) {
    const InitialProcess half{"half", [](double, const AmplitudeDraws&) { return 0.5; }};
    const BoundaryProcess bnd = make_boundary({"constant", 0.5}, {"constant", 0.5}, half, 1.0);
    const AmplitudeDraws d[] = {AmplitudeDraws{}};
    EXPECT_TRUE(check_coherence(half, bnd, 1.0, d).passed);
}

TEST(Boundary, RelaxStartsAtInitialTrace) {
    const InitialProcess init = separable_initial(shape_by_name("one_minus_x"));
    const BoundaryProcess bnd = make_boundary({"relax", 0, 0.2, 3.0}, {"match_initial"}, init, 1.0);
    AmplitudeDraws s;
    s[Role::initial] = 0.8;
    EXPECT_DOUBLE_EQ(bnd.left(0.0, s), 0.8);
    EXPECT_NEAR(bnd.left(1.0, s), 0.2 + 0.6 * std::exp(-3.0), 1e-15);
    EXPECT_DOUBLE_EQ(bnd.right(0.7, s), 0.0);
    EXPECT_THROW(make_boundary({"relax", 0, 0, -1}, {}, init, 1.0), ConfigError);
    EXPECT_THROW(make_boundary({"table"}, {}, init, 1.0), ConfigError);
}

TEST(ModelBounds, TestProblemConstants) {
    const ModelBounds b = model_bounds(make_test_problem(), Grid1D(1.0, 10));
    EXPECT_DOUBLE_EQ(b.d1, 1.0);
    EXPECT_DOUBLE_EQ(b.d2, 2.0);
    EXPECT_DOUBLE_EQ(b.b1, 1.0);
    EXPECT_DOUBLE_EQ(b.a1, 0.01);
    EXPECT_DOUBLE_EQ(b.a2, 1.0);
}

TEST(ModelBounds, RejectsDegenerateDiffusionAndNegativeReaction) {
    Model m = make_test_problem();
    m.diffusion = CoefficientProcess(shape_by_name("identity_x"), RandomVariableSpec::deterministic(1.0));
    EXPECT_THROW(model_bounds(m, Grid1D(1.0, 10)), ModelError);
    m = make_test_problem(RandomVariableSpec::truncated_normal(0, 1, -1, 1));
    EXPECT_THROW(model_bounds(m, Grid1D(1.0, 10)), ModelError);
}

TEST(Model, RandomRolesAndMeanDraws) {
    const Model m = make_test_problem();
    ASSERT_EQ(m.random_roles().size(), 1u);
    EXPECT_EQ(m.random_roles()[0], Role::reaction);
    EXPECT_NEAR(m.mean_draws().reaction(), 0.7497580042, 1e-10);
    EXPECT_EQ(m.mean_draws().diffusion(), 1.0);
}

}  // namespace
}  // namespace fkpp
