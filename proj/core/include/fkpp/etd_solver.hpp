#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "fkpp/grid.hpp"
#include "fkpp/linalg.hpp"
#include "fkpp/matrix_exp.hpp"
#include "fkpp/random_model.hpp"

namespace fkpp {

/// Outcome of the step-size gate.
///
/// h_max = 2 d1 / b1 keeps M Metzler (infinite for pure diffusion, b1 = 0).
/// k_max = h^2 / (2 d2 + a2 h^2) keeps the scheme monotone.
/// The h condition is non-strict, the k condition strict.
struct StepSizeReport {
    double h_max = std::numeric_limits<double>::infinity();
    double k_max = 0.0;
    double h_used = 0.0;
    double k_used = 0.0;
    bool admissible = false;
    ModelBounds bounds{};
    std::vector<std::string> notes;
};

/// Throws ModelError when the bounds are out of order (d1 <= 0, d2 < d1, b1 < 0, a2 < 0)
/// and ConfigError for non-positive steps.
StepSizeReport stepsize_gate(const ModelBounds& bounds, double h, double k);

/// Computes the bounds from the model over `grid` and adds a note for every constant
/// quoted with the model that disagrees with the computed one.
StepSizeReport stepsize_gate(const Model& model, const Grid1D& grid, const TimeMesh& mesh);

/// u^0 = [Phi_1(0), Phi_0(x_1), ..., Phi_0(x_{N-1}), Phi_2(0)].
/// Throws ModelError for an entry outside [0, 1] by more than 1e-12.
Vector discretize_initial(const InitialProcess& init, const BoundaryProcess& bnd, const Grid1D& grid,
                          const AmplitudeDraws& sample);

/// g^n: boundary entries are the forward differences (Phi(t^{n+1}) - Phi(t^n)) / k,
/// interior entries the logistic term A(x_i) u_i (1 - u_i).
/// `reaction` holds A(x_i, sample) for every node.
Vector reaction_vector(const Vector& u, const Vector& reaction, const BoundaryProcess& bnd, int level,
                       double k, const AmplitudeDraws& sample);

/// exp(M k) u + k Lambda g.
Vector etd_step(const Vector& u, const PropagatorPair& p, const Vector& g, double k);

/// One realization's surface u[i][n], rows are nodes, columns time levels.
struct SampleTrajectory {
    Matrix values;
    std::int64_t sample_id = 0;
    AmplitudeDraws draws;
    /// False when the run went ahead under an inadmissible step-size report.
    bool guarded = true;
    /// Worst excursion outside [0, 1]; zero for a bounded trajectory.
    double max_violation = 0.0;
};

struct SolveOptions {
    bool allow_inadmissible = false;
    std::uint64_t master_seed = 0;
    /// Called with a description when an unguarded run leaves [0, 1].
    std::function<void(const std::string&)> warn;
};

/// Everything a realization needs that does not depend on its amplitudes can be prepared
/// once and shared read-only across samples.
class SampleSolver {
public:
    /// Runs the step-size gate; throws InadmissibleStepError unless admissible or overridden.
    SampleSolver(const Model& model, const Grid1D& grid, const TimeMesh& mesh, SolveOptions options = {});

    const StepSizeReport& report() const noexcept { return report_; }
    const Grid1D& grid() const noexcept { return grid_; }
    const TimeMesh& mesh() const noexcept { return mesh_; }
    const Model& model() const noexcept { return model_; }

    /// Draws amplitudes from the (master seed, sample_id) stream and solves.
    SampleTrajectory solve(std::int64_t sample_id) const;

    /// Solves with amplitudes fixed by the caller (collocation nodes, tests).
    SampleTrajectory solve_with(const AmplitudeDraws& draws, std::int64_t sample_id = 0) const;

    /// Propagators for the given amplitudes; cached when diffusion and advection are deterministic.
    std::shared_ptr<const PropagatorPair> propagators(const AmplitudeDraws& draws) const;

private:
    Model model_;
    Grid1D grid_;
    TimeMesh mesh_;
    SolveOptions options_;
    StepSizeReport report_;
    std::shared_ptr<const PropagatorPair> shared_;
};

/// Convenience wrapper: one seeded realization of `model`.
SampleTrajectory solve_sample(const Model& model, const Grid1D& grid, const TimeMesh& mesh,
                              std::int64_t sample_id, const SolveOptions& options = {});

}  // namespace fkpp
