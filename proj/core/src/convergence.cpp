#include "fkpp/convergence.hpp"

#include <cmath>

#include "fkpp/errors.hpp"
#include "fkpp/etd_solver.hpp"
#include "fkpp/test_problem.hpp"

namespace fkpp {

std::vector<RefinementRow> convergence_study(Refinement kind, const ConvergenceSetup& setup) {
    if (setup.levels < 1) throw ConfigError("convergence study: need at least one level");
    const Model model = make_test_problem(RandomVariableSpec::deterministic(setup.a));
    std::vector<RefinementRow> rows;
    double h = setup.h;
    double k = setup.k;
    for (int level = 0; level < setup.levels; ++level) {
        const Grid1D grid = Grid1D::from_spacing(setup.length, h);
        const TimeMesh mesh = TimeMesh::from_step(setup.horizon, k);
        SolveOptions options;
        options.allow_inadmissible = setup.allow_inadmissible;
        const SampleSolver solver(model, grid, mesh, options);
        const SampleTrajectory traj = solver.solve_with(model.mean_draws());
        double err = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
            err = std::max(err, std::abs(traj.values(i, mesh.steps()) -
                                         exact_solution(grid.node(i), mesh.level(mesh.steps()), setup.a)));
        }
        RefinementRow row{grid.spacing(), mesh.step(), err, std::nullopt};
        if (!rows.empty()) row.observed_order = std::log2(rows.back().max_error / err);
        rows.push_back(row);
        if (kind == Refinement::spatial) {
            h *= 0.5;
            k *= 0.25;
        } else {
            k *= 0.5;
        }
    }
    return rows;
}

}  // namespace fkpp
