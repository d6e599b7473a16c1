#pragma once

#include "fkpp/linalg.hpp"
#include "fkpp/system_matrix.hpp"

namespace fkpp {

/// exp(A t) by scaling and squaring with a Pade kernel.
/// Throws NumericalError on non-finite input or overflow, ConfigError if A is not square or t < 0.
Matrix matrix_exp(const Eigen::Ref<const Matrix>& a, double t = 1.0);

/// Propagators of one ETD step of size k for a fixed operator M.
struct PropagatorPair {
    Matrix full;    // exp(M k)
    Matrix half;    // exp(M k / 2), computed directly
    Matrix lambda;  // (I + 4 exp(M k/2) + exp(M k)) / 6, Simpson's rule for (1/k) int_0^k exp(M z) dz
    double step = 0.0;
};

PropagatorPair build_propagators(const Eigen::Ref<const Matrix>& m, double k);
PropagatorPair build_propagators(const SystemMatrix& m, double k);

/// Reference value of int_0^k exp(M z) dz by composite Simpson, doubling the panel count
/// from `panels` until successive results differ by less than `tolerance` in the inf-norm.
/// Throws NumericalError when `max_doublings` are not enough.
Matrix integral_exp_oracle(const Eigen::Ref<const Matrix>& m, double k, int panels = 64,
                           double tolerance = 1e-12, int max_doublings = 8);

}  // namespace fkpp
