#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "fkpp/convergence.hpp"
#include "fkpp/errors.hpp"
#include "fkpp/test_problem.hpp"
#include "fkpp/truncated_normal.hpp"
#include "oracles.hpp"

namespace fkpp {
namespace {

TEST(ExactSolution, PointValues) {
    for (double a : {0.01, 0.5, 0.75, 1.0}) EXPECT_EQ(exact_solution(0.0, 0.0, a), 0.25);
    EXPECT_NEAR(exact_solution(1.0, 0.0, 0.75), 0.17869318374862708, 1e-15);
    EXPECT_NEAR(exact_solution(0.0, 0.01, 0.75), 0.25156493630411236, 1e-15);
}

TEST(ExactSolution, AsinhAgreesWithLogForm) {
    for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        const double log_form = std::log(x + std::sqrt(x * x + 1.0));
        const double e = std::exp(-5.0 * 0.75 * 0.003 / 6.0 + std::sqrt(0.75 / 6.0) * log_form);
        ASSERT_NEAR(exact_solution(x, 0.003, 0.75), 1.0 / ((1 + e) * (1 + e)), 1e-14);
    }
}

TEST(ExactSolution, IncreasingInTimeAndInsideUnitInterval) {
    std::mt19937_64 rng(12);
    for (int j = 0; j < 2000; ++j) {
        const double x = testing::uniform(rng, 0, 1);
        const double a = testing::uniform(rng, 0.01, 1);
        const double t = testing::uniform(rng, 0, 1);
        const double dt = testing::uniform(rng, 1e-3, 1);
        const double u = exact_solution(x, t, a);
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_LT(u, exact_solution(x, t + dt, a));
    }
}

TEST(ExactMoments, DeterministicLawCollapses) {
    const auto law = RandomVariableSpec::deterministic(0.75);
    for (double x : {0.0, 0.3, 1.0}) {
        EXPECT_NEAR(exact_moments(x, 0.01, law, Moment::mean), exact_solution(x, 0.01, 0.75), 1e-12);
        EXPECT_EQ(exact_moments(x, 0.01, law, Moment::std), 0.0);
    }
}

TEST(ExactMoments, OriginAtTimeZeroIsDeterministic) {
    EXPECT_NEAR(exact_moments(0, 0, reference_reaction_law(), Moment::mean), 0.25, 1e-14);
    EXPECT_NEAR(exact_moments(0, 0, reference_reaction_law(), Moment::std), 0.0, 1e-12);
}

TEST(ExactMoments, AgreeWithIndependentQuadrature) {
    const TruncatedNormal law{0.75, 0.08, 0.01, 1.0};
    using GK = boost::math::quadrature::gauss_kronrod<long double, 61>;
    for (double x : {0.0, 0.5, 1.0}) {
        auto pdf = [&](long double a) { return static_cast<long double>(truncnorm::pdf(law, static_cast<double>(a))); };
        const long double m1 = GK::integrate(
            [&](long double a) { return exact_solution(x, 0.01, static_cast<double>(a)) * pdf(a); }, 0.01L, 1.0L, 15,
            1e-18L);
        const long double var = GK::integrate(
            [&](long double a) {
                const long double d = exact_solution(x, 0.01, static_cast<double>(a)) - m1;
                return d * d * pdf(a);
            },
            0.01L, 1.0L, 15, 1e-18L);
        EXPECT_NEAR(exact_moments(x, 0.01, reference_reaction_law(), Moment::mean), static_cast<double>(m1), 1e-12);
        EXPECT_NEAR(exact_moments(x, 0.01, reference_reaction_law(), Moment::std), std::sqrt(static_cast<double>(var)),
                    1e-11);
        EXPECT_NEAR(exact_moments(x, 0.01, reference_reaction_law(), Moment::second),
                    static_cast<double>(var + m1 * m1), 1e-12);
    }
}

TEST(ExactMoments, RegressionConstantsAtOrigin) {
    EXPECT_NEAR(exact_moments(0, 0.01, reference_reaction_law(), Moment::mean), 0.251564457918051, 1e-12);
    EXPECT_NEAR(exact_moments(0, 0.01, reference_reaction_law(), Moment::std), 0.000166392102376, 1e-12);
}

TEST(ExactMoments, GoldenFile) {
    std::ifstream in(std::string(FKPP_GOLDEN_DIR) + "/reference_T0.01.csv");
    ASSERT_TRUE(in) << "golden file missing";
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x,mean_exact,std_exact");
    const ExactStatistics e = exact_statistics(Grid1D(1.0, 10), 0.01, reference_reaction_law());
    int i = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        double x, mean, std;
        char c1, c2;
        row >> x >> c1 >> mean >> c2 >> std;
        ASSERT_LT(i, 11);
        EXPECT_NEAR(e.x(i), x, 1e-12);
        EXPECT_NEAR(e.mean(i), mean, 1e-12);
        EXPECT_NEAR(e.std(i), std, 1e-14);
        ++i;
    }
    EXPECT_EQ(i, 11);
}

TEST(AdaptiveQuadrature, BudgetExhaustion) {
    EXPECT_NEAR(adaptive_gauss_legendre([](double x) { return std::exp(x); }, 0, 1, 1e-14), std::exp(1.0) - 1, 1e-14);
    EXPECT_THROW(adaptive_gauss_legendre([](double x) { return x < 0.3 ? 0.0 : 1.0; }, 0, 1, 1e-300, 10),
                 NumericalError);
}

TEST(ErrorReport, SelfComparisonIsZero) {
    const Grid1D grid(1.0, 10);
    const TimeMesh mesh(0.01, 5);
    const ExactStatistics e = exact_statistics(grid, 0.01, reference_reaction_law());
    EnsembleStats s;
    s.mean = Matrix::Zero(11, 6);
    s.std = Matrix::Zero(11, 6);
    s.mean.col(5) = e.mean;
    s.std.col(5) = e.std;
    const ErrorReport r = error_report(s, grid, mesh, reference_reaction_law());
    EXPECT_EQ(r.max_mean_error, 0.0);
    EXPECT_EQ(r.max_std_error, 0.0);
    EXPECT_THROW(error_report(s, Grid1D(1.0, 20), mesh, reference_reaction_law()), ConfigError);
}

TEST(ErrorReport, RefinedRunIsMoreAccurate) {
    const Model m = make_test_problem();
    const auto law = reference_reaction_law();
    const SchemeConfig coarse{Grid1D(1.0, 10), TimeMesh(0.01, 5), Collocation{64}, false, 0};
    const SchemeConfig fine{Grid1D(1.0, 20), TimeMesh(0.01, 20), Collocation{64}, false, 0};
    const ErrorReport rc = error_report(run_ensemble(m, coarse), coarse.grid, coarse.mesh, law);
    const ErrorReport rf = error_report(run_ensemble(m, fine), fine.grid, fine.mesh, law);
    EXPECT_LE(rc.max_mean_error, 2e-3);
    EXPECT_LT(rf.max_mean_error, rc.max_mean_error);
    for (Eigen::Index i = 0; i < rc.mean_error.size(); ++i) EXPECT_GE(rc.mean_error(i), 0.0);
}

TEST(Convergence, SingleLevelHasNoOrder) {
    ConvergenceSetup s;
    s.levels = 1;
    const auto rows = convergence_study(Refinement::spatial, s);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_FALSE(rows[0].observed_order);
}

TEST(Convergence, SpatialOrderIsTwo) {
    const auto rows = convergence_study(Refinement::spatial, ConvergenceSetup{});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_DOUBLE_EQ(rows[2].h, 0.025);
    for (std::size_t j = 1; j < rows.size(); ++j) EXPECT_GE(*rows[j].observed_order, 1.8);
}

TEST(Convergence, TemporalErrorsDecrease) {
    const auto rows = convergence_study(Refinement::temporal, ConvergenceSetup{});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_DOUBLE_EQ(rows[2].k, 0.0005);
    EXPECT_LT(rows[1].max_error, rows[0].max_error);
    EXPECT_LT(rows[2].max_error, rows[1].max_error);
}

TEST(Convergence, TemporalOrderOnFineGrid) {
    ConvergenceSetup s;
    s.h = 0.01;
    s.horizon = 0.1;
    s.allow_inadmissible = true;
    const auto rows = convergence_study(Refinement::temporal, s);
    for (std::size_t j = 1; j < rows.size(); ++j) EXPECT_GE(*rows[j].observed_order, 0.9);
}

TEST(Convergence, GateFailureAtALevel) {
    ConvergenceSetup s;
    s.k = 0.003;
    s.horizon = 0.012;
    EXPECT_THROW(convergence_study(Refinement::spatial, s), InadmissibleStepError);
}

}  // namespace
}  // namespace fkpp
