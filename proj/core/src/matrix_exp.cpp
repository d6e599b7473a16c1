#include "fkpp/matrix_exp.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "fkpp/errors.hpp"

namespace fkpp {

Matrix matrix_exp(const Eigen::Ref<const Matrix>& a, double t) {
    if (a.rows() != a.cols()) throw ConfigError("matrix_exp: matrix must be square");
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("matrix_exp: t must be finite and >= 0");
    if (!a.allFinite()) throw NumericalError("matrix_exp: non-finite input entries");
    if (a.size() == 0) return Matrix(0, 0);
    if (t == 0.0) return Matrix::Identity(a.rows(), a.cols());
    const Matrix scaled = a * t;
    Matrix result = scaled.exp();
    if (!result.allFinite()) throw NumericalError("matrix_exp: result overflowed");
    return result;
}

PropagatorPair build_propagators(const Eigen::Ref<const Matrix>& m, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("propagators: step must be positive");
    PropagatorPair p;
    p.step = k;
    p.full = matrix_exp(m, k);
    p.half = matrix_exp(m, 0.5 * k);
    p.lambda = (Matrix::Identity(m.rows(), m.cols()) + 4.0 * p.half + p.full) / 6.0;
    return p;
}

PropagatorPair build_propagators(const SystemMatrix& m, double k) { return build_propagators(m.dense(), k); }

namespace {

Matrix composite_simpson(const Eigen::Ref<const Matrix>& m, double k, int panels) {
    const double dz = k / panels;
    Matrix acc = Matrix::Identity(m.rows(), m.cols()) + matrix_exp(m, k);
    for (int j = 1; j < panels; ++j) acc += (j % 2 == 1 ? 4.0 : 2.0) * matrix_exp(m, j * dz);
    return acc * (dz / 3.0);
}

}  // namespace

Matrix integral_exp_oracle(const Eigen::Ref<const Matrix>& m, double k, int panels, double tolerance,
                           int max_doublings) {
    if (panels < 64 || panels % 2 != 0) throw ConfigError("integral oracle: panels must be even and >= 64");
    if (!(k >= 0.0)) throw ConfigError("integral oracle: k must be >= 0");
    Matrix coarse = composite_simpson(m, k, panels);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        Matrix fine = composite_simpson(m, k, panels);
        const double change = (fine - coarse).cwiseAbs().rowwise().sum().maxCoeff();
        if (change < tolerance) return fine;
        coarse = std::move(fine);
    }
    throw NumericalError("integral oracle: no convergence within the panel budget");
}

}  // namespace fkpp
