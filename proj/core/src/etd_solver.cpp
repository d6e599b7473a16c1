#include "fkpp/etd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fkpp/errors.hpp"
#include "fkpp/random_stream.hpp"
#include "fkpp/system_matrix.hpp"

namespace fkpp {
namespace {

constexpr double kRangeTolerance = 1e-12;
constexpr double kBoundaryTolerance = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void note_quoted(StepSizeReport& report, const char* name, double quoted, double computed) {
    if (std::abs(quoted - computed) > 1e-12 * std::max(1.0, std::abs(computed))) {
        report.notes.push_back(std::string("quoted ") + name + " = " + fmt(quoted) + " differs from computed " +
                               name + " = " + fmt(computed) + "; the gate uses the computed value");
    }
}

}  // namespace

StepSizeReport stepsize_gate(const ModelBounds& bounds, double h, double k) {
    if (!(bounds.d1 > 0.0) || !(bounds.d2 >= bounds.d1) || !(bounds.b1 >= 0.0) || !(bounds.a2 >= 0.0)) {
        throw ModelError("step-size gate: need d1 > 0, d2 >= d1, b1 >= 0, a2 >= 0");
    }
    if (!(h > 0.0) || !(k > 0.0)) throw ConfigError("step-size gate: h and k must be positive");
    StepSizeReport r;
    r.bounds = bounds;
    r.h_used = h;
    r.k_used = k;
    r.h_max = bounds.b1 == 0.0 ? std::numeric_limits<double>::infinity() : 2.0 * bounds.d1 / bounds.b1;
    r.k_max = h * h / (2.0 * bounds.d2 + bounds.a2 * h * h);
    r.admissible = h <= r.h_max && k < r.k_max;
    if (!(h <= r.h_max)) r.notes.push_back("h = " + fmt(h) + " exceeds h_max = " + fmt(r.h_max));
    if (!(k < r.k_max)) r.notes.push_back("k = " + fmt(k) + " is not below k_max = " + fmt(r.k_max));
    return r;
}

StepSizeReport stepsize_gate(const Model& model, const Grid1D& grid, const TimeMesh& mesh) {
    const ModelBounds bounds = model_bounds(model, grid);
    StepSizeReport r = stepsize_gate(bounds, grid.spacing(), mesh.step());
    if (model.quoted_bounds) {
        const ModelBounds& q = *model.quoted_bounds;
        note_quoted(r, "d1", q.d1, bounds.d1);
        note_quoted(r, "d2", q.d2, bounds.d2);
        note_quoted(r, "b1", q.b1, bounds.b1);
        note_quoted(r, "a2", q.a2, bounds.a2);
    }
    return r;
}

Vector discretize_initial(const InitialProcess& init, const BoundaryProcess& bnd, const Grid1D& grid,
                          const AmplitudeDraws& sample) {
    const int n = grid.intervals();
    Vector u(n + 1);
    u(0) = bnd.left(0.0, sample);
    for (int i = 1; i < n; ++i) u(i) = init(grid.node(i), sample);
    u(n) = bnd.right(0.0, sample);
    for (int i = 0; i <= n; ++i) {
        if (!(u(i) >= -kRangeTolerance && u(i) <= 1.0 + kRangeTolerance)) {
            throw ModelError("initial condition leaves [0, 1] at x=" + fmt(grid.node(i)) + " (value " +
                             fmt(u(i)) + ")");
        }
    }
    return u;
}

Vector reaction_vector(const Vector& u, const Vector& reaction, const BoundaryProcess& bnd, int level, double k,
                       const AmplitudeDraws& sample) {
    const Eigen::Index n = u.size() - 1;
    if (reaction.size() != u.size()) throw ConfigError("reaction vector: dimension mismatch");
    const double t0 = level * k;
    const double t1 = (level + 1) * k;
    Vector g(u.size());
    g(0) = (bnd.left(t1, sample) - bnd.left(t0, sample)) / k;
    g(n) = (bnd.right(t1, sample) - bnd.right(t0, sample)) / k;
    for (Eigen::Index i = 1; i < n; ++i) g(i) = reaction(i) * u(i) * (1.0 - u(i));
    return g;
}

Vector etd_step(const Vector& u, const PropagatorPair& p, const Vector& g, double k) {
    if (u.size() != p.full.rows() || g.size() != u.size()) throw ConfigError("etd step: dimension mismatch");
    Vector next = p.full * u;
    next.noalias() += k * (p.lambda * g);
    return next;
}

SampleSolver::SampleSolver(const Model& model, const Grid1D& grid, const TimeMesh& mesh, SolveOptions options)
    : model_(model), grid_(grid), mesh_(mesh), options_(std::move(options)) {
    report_ = stepsize_gate(model_, grid_, mesh_);
    if (!report_.admissible && !options_.allow_inadmissible) {
        std::string why = "step sizes fail the positivity gate";
        for (const auto& n : report_.notes) why += "; " + n;
        throw InadmissibleStepError(why);
    }
    if (!model_.diffusion.amplitude().is_random() && !model_.advection.amplitude().is_random()) {
        shared_ = propagators(model_.mean_draws());
    }
}

std::shared_ptr<const PropagatorPair> SampleSolver::propagators(const AmplitudeDraws& draws) const {
    if (shared_) return shared_;
    const double delta = draws.diffusion();
    const double rho = draws.advection();
    const SystemMatrix m = build_system_matrix(
        grid_, [&](double x) { return model_.diffusion(x, delta); },
        [&](double x) { return model_.advection(x, rho); });
    return std::make_shared<const PropagatorPair>(build_propagators(m, mesh_.step()));
}

SampleTrajectory SampleSolver::solve(std::int64_t sample_id) const {
    RandomStream stream(options_.master_seed, static_cast<std::uint64_t>(sample_id));
    return solve_with(model_.draw(stream), sample_id);
}

SampleTrajectory SampleSolver::solve_with(const AmplitudeDraws& draws, std::int64_t sample_id) const {
    const AmplitudeDraws one[] = {draws};
    const CoherenceReport coherence = check_coherence(model_.initial, model_.boundary, grid_.length(), one);
    if (!coherence.passed) {
        throw ModelError("initial and boundary conditions disagree at the corners (gaps " +
                         fmt(coherence.left_gap) + ", " + fmt(coherence.right_gap) + ")");
    }

    const int n = grid_.intervals();
    const double k = mesh_.step();
    const auto prop = propagators(draws);

    Vector reaction(n + 1);
    for (int i = 0; i <= n; ++i) reaction(i) = model_.reaction(grid_.node(i), draws.reaction());

    SampleTrajectory traj;
    traj.sample_id = sample_id;
    traj.draws = draws;
    traj.guarded = report_.admissible;
    traj.values.resize(n + 1, mesh_.levels());

    Vector u = discretize_initial(model_.initial, model_.boundary, grid_, draws);
    traj.values.col(0) = u;
    for (int level = 0; level < mesh_.steps(); ++level) {
        const Vector g = reaction_vector(u, reaction, model_.boundary, level, k, draws);
        u = etd_step(u, *prop, g, k);
        traj.values.col(level + 1) = u;
    }

    if (!traj.values.allFinite()) {
        throw NumericalError("non-finite values in trajectory");
    }
    traj.max_violation = std::max({0.0, -traj.values.minCoeff(), traj.values.maxCoeff() - 1.0});
    if (traj.max_violation > 0.0) {
        const std::string msg = "solution leaves [0, 1] by " + fmt(traj.max_violation);
        if (traj.guarded && traj.max_violation > kRangeTolerance) {
            throw NumericalError(msg + " under admissible step sizes");
        }
        if (!traj.guarded && options_.warn) options_.warn("sample " + std::to_string(sample_id) + ": " + msg);
    }

    for (int level = 1; level < mesh_.levels(); ++level) {
        const double t = mesh_.level(level);
        const double left = std::abs(traj.values(0, level) - model_.boundary.left(t, draws));
        const double right = std::abs(traj.values(n, level) - model_.boundary.right(t, draws));
        if (left > kBoundaryTolerance || right > kBoundaryTolerance) {
            throw NumericalError("boundary values drifted from the boundary data at level " +
                                 std::to_string(level));
        }
    }
    return traj;
}

SampleTrajectory solve_sample(const Model& model, const Grid1D& grid, const TimeMesh& mesh, std::int64_t sample_id,
                              const SolveOptions& options) {
    return SampleSolver(model, grid, mesh, options).solve(sample_id);
}

}  // namespace fkpp
