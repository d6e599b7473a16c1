#include "fkpp/test_problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fkpp/errors.hpp"
#include "fkpp/gauss_legendre.hpp"

namespace fkpp {

double exact_solution(double x, double t, double a) {
    const double e = std::exp(-5.0 * a * t / 6.0 + std::sqrt(a / 6.0) * std::asinh(x));
    return 1.0 / ((1.0 + e) * (1.0 + e));
}

RandomVariableSpec reference_reaction_law() { return RandomVariableSpec::truncated_normal(0.75, 0.08, 0.01, 1.0); }

Model make_test_problem(const RandomVariableSpec& reaction_law) {
    InitialProcess init{"exact_trace", [](double x, const AmplitudeDraws& s) {
                            return exact_solution(x, 0.0, s.reaction());
                        }};
    BoundaryProcess bnd{"exact_trace",
                        [](double t, const AmplitudeDraws& s) { return exact_solution(0.0, t, s.reaction()); },
                        [](double t, const AmplitudeDraws& s) { return exact_solution(1.0, t, s.reaction()); }};
    return Model{
        .name = kTestProblemName,
        .length = 1.0,
        .diffusion = CoefficientProcess(shape_by_name("one_plus_x_squared"), RandomVariableSpec::deterministic(1.0)),
        .advection = CoefficientProcess(shape_by_name("identity_x"), RandomVariableSpec::deterministic(1.0)),
        .reaction = CoefficientProcess(shape_by_name("constant"), reaction_law),
        .initial_amplitude = RandomVariableSpec::deterministic(1.0),
        .initial = std::move(init),
        .boundary = std::move(bnd),
        .quoted_bounds = ModelBounds{1.0, 1.0, 1.0, 0.0, 1.0},
    };
}

double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b, double tol,
                               int max_intervals) {
    static const QuadratureRule unit = gauss_legendre(20);
    struct Panel {
        double value, magnitude;
    };
    auto panel = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        Panel p{0.0, 0.0};
        for (std::size_t j = 0; j < unit.nodes.size(); ++j) {
            const double v = unit.weights[j] * f(mid + half * unit.nodes[j]);
            p.value += v;
            p.magnitude += std::abs(v);
        }
        p.value *= half;
        p.magnitude *= half;
        return p;
    };
    struct Segment {
        double lo, hi, value;
    };
    // Differences below a few dozen ulps of the panel magnitude are rounding noise.
    constexpr double kNoise = 64 * std::numeric_limits<double>::epsilon();
    std::vector<Segment> stack{{a, b, panel(a, b).value}};
    double total = 0.0;
    int used = 1;
    const double width = b - a;
    while (!stack.empty()) {
        const Segment seg = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (seg.lo + seg.hi);
        const Panel left = panel(seg.lo, mid);
        const Panel right = panel(mid, seg.hi);
        const double refined = left.value + right.value;
        const double allowed =
            std::max(tol * (seg.hi - seg.lo) / width, kNoise * (left.magnitude + right.magnitude));
        if (std::abs(refined - seg.value) <= allowed) {
            total += refined;
            continue;
        }
        if (++used > max_intervals) throw NumericalError("adaptive quadrature: subdivision budget exhausted");
        stack.push_back({seg.lo, mid, left.value});
        stack.push_back({mid, seg.hi, right.value});
    }
    return total;
}

double exact_moments(double x, double t, const RandomVariableSpec& law, Moment which, double tol) {
    if (!law.is_random()) {
        const double u = exact_solution(x, t, law.mean());
        switch (which) {
            case Moment::mean: return u;
            case Moment::second: return u * u;
            case Moment::std: return 0.0;
        }
    }
    const Interval s = law.support();
    auto mean_integrand = [&](double a) { return exact_solution(x, t, a) * law.density(a); };
    const double mean = adaptive_gauss_legendre(mean_integrand, s.lower, s.upper, tol);
    if (which == Moment::mean) return mean;
    if (which == Moment::second) {
        return adaptive_gauss_legendre(
            [&](double a) {
                const double u = exact_solution(x, t, a);
                return u * u * law.density(a);
            },
            s.lower, s.upper, tol);
    }
    auto spread = [&](double a) {
        const double d = exact_solution(x, t, a) - mean;
        return d * d * law.density(a);
    };
    // An error e in the variance moves the std by about e / (2 std), so the variance
    // tolerance scales with a first estimate of the std.
    const double rough = std::sqrt(std::max(0.0, adaptive_gauss_legendre(spread, s.lower, s.upper, tol)));
    const double var = adaptive_gauss_legendre(spread, s.lower, s.upper, tol * std::max(tol, rough));
    return std::sqrt(std::max(0.0, var));
}

ExactStatistics exact_statistics(const Grid1D& grid, double t, const RandomVariableSpec& law) {
    ExactStatistics e;
    e.x.resize(grid.size());
    e.mean.resize(grid.size());
    e.std.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        e.x(i) = grid.node(i);
        e.mean(i) = exact_moments(e.x(i), t, law, Moment::mean);
        e.std(i) = exact_moments(e.x(i), t, law, Moment::std);
    }
    return e;
}

ErrorReport error_report(const EnsembleStats& stats, const Grid1D& grid, const TimeMesh& mesh,
                         const RandomVariableSpec& law) {
    if (stats.mean.rows() != grid.size() || stats.mean.cols() != mesh.levels()) {
        throw ConfigError("error report: statistics were produced on a different grid or time mesh");
    }
    const ExactStatistics exact = exact_statistics(grid, mesh.level(mesh.steps()), law);
    ErrorReport r;
    r.x = exact.x;
    r.mean_error = (stats.mean.col(mesh.steps()) - exact.mean).cwiseAbs();
    r.std_error = (stats.std.col(mesh.steps()) - exact.std).cwiseAbs();
    r.max_mean_error = r.mean_error.maxCoeff();
    r.max_std_error = r.std_error.maxCoeff();
    return r;
}

}  // namespace fkpp
