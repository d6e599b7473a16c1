#include "fkpp/system_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fkpp/errors.hpp"

namespace fkpp {

SystemMatrix::SystemMatrix(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup)
    : sub_(std::move(sub)), diag_(std::move(diag)), sup_(std::move(sup)) {
    if (sub_.size() != diag_.size() || sup_.size() != diag_.size() || diag_.size() < 2) {
        throw ConfigError("system matrix: band lengths must agree");
    }
    const std::size_t last = diag_.size() - 1;
    for (std::size_t r : {std::size_t{0}, last}) {
        if (sub_[r] != 0.0 || diag_[r] != 0.0 || sup_[r] != 0.0) {
            throw ConfigError("system matrix: boundary rows must be zero");
        }
    }
}

Matrix SystemMatrix::dense() const {
    const int n = dimension();
    Matrix m = Matrix::Zero(n, n);
    for (int i = 1; i + 1 < n; ++i) {
        m(i, i - 1) = sub_[i];
        m(i, i) = diag_[i];
        m(i, i + 1) = sup_[i];
    }
    return m;
}

double SystemMatrix::max_relative_row_sum() const {
    double worst = 0.0;
    for (int i = 1; i + 1 < dimension(); ++i) {
        const double scale = std::abs(diag_[i]);
        const double sum = std::abs(sub_[i] + diag_[i] + sup_[i]);
        worst = std::max(worst, scale > 0.0 ? sum / scale : sum);
    }
    return worst;
}

SystemMatrix build_system_matrix(const Grid1D& grid, const std::function<double(double)>& diffusion,
                                 const std::function<double(double)>& advection) {
    const int n = grid.intervals();
    const double h = grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    std::vector<double> sub(n + 1, 0.0), diag(n + 1, 0.0), sup(n + 1, 0.0);
    for (int i = 1; i < n; ++i) {
        const double x = grid.node(i);
        const double d = diffusion(x);
        const double b = advection(x);
        if (!(d > 0.0) || !std::isfinite(d) || !std::isfinite(b)) {
            std::ostringstream os;
            os << "system matrix: diffusion must be positive and finite at interior node x=" << x
               << " (got D=" << d << ", B=" << b << ")";
            throw ModelError(os.str());
        }
        const double drift = 0.5 * b * h;
        sub[i] = (d - drift) * inv_h2;
        diag[i] = -2.0 * d * inv_h2;
        sup[i] = (d + drift) * inv_h2;
    }
    return SystemMatrix(std::move(sub), std::move(diag), std::move(sup));
}

bool is_metzler(const SystemMatrix& m) {
    for (int i = 1; i + 1 < m.dimension(); ++i) {
        if (m.sub(i) < 0.0 || m.sup(i) < 0.0) return false;
    }
    return true;
}

double inf_norm(const Eigen::Ref<const Matrix>& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

double log_norm_inf(const Eigen::Ref<const Matrix>& a) {
    if (a.rows() != a.cols()) throw ConfigError("log_norm_inf: matrix must be square");
    if (a.size() == 0) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double row = a(i, i);
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (j != i) row += std::abs(a(i, j));
        }
        best = std::max(best, row);
    }
    return best;
}

}  // namespace fkpp
