#pragma once

#include <optional>
#include <vector>

namespace fkpp {

struct RefinementRow {
    double h;
    double k;
    double max_error;
    /// log2(previous error / this error); empty on the first row.
    std::optional<double> observed_order;
};

enum class Refinement {
    temporal,  // h fixed, k halved
    spatial,   // h halved, k quartered
};

struct ConvergenceSetup {
    double a = 0.75;
    double length = 1.0;
    double h = 0.1;
    double k = 0.002;
    double horizon = 0.01;
    int levels = 3;
    bool allow_inadmissible = false;
};

/// Deterministic test problem at fixed a, solved on successively refined meshes; the error is
/// the max over nodes at t = horizon against exact_solution.
/// Throws InadmissibleStepError at the first level failing the gate, unless overridden.
std::vector<RefinementRow> convergence_study(Refinement kind, const ConvergenceSetup& setup);

}  // namespace fkpp
