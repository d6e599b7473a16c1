#pragma once

#include <functional>
#include <vector>

#include "fkpp/grid.hpp"
#include "fkpp/linalg.hpp"

namespace fkpp {

/// Semidiscrete operator M of the central-difference method of lines: tridiagonal,
/// scaled by 1/h^2, with identically zero first and last rows.
///
/// Bands are stored with length n+1; entries 0 and n stay zero.
class SystemMatrix {
public:
    SystemMatrix(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup);

    int dimension() const noexcept { return static_cast<int>(diag_.size()); }
    double sub(int i) const { return sub_.at(i); }
    double diag(int i) const { return diag_.at(i); }
    double sup(int i) const { return sup_.at(i); }

    Matrix dense() const;

    /// max_i |sub+diag+sup| / |diag| over interior rows.
    double max_relative_row_sum() const;

private:
    std::vector<double> sub_;
    std::vector<double> diag_;
    std::vector<double> sup_;
};

inline constexpr double kRowSumTolerance = 1e-12;

/// Interior rows: ((D - B h/2), -2D, (D + B h/2)) / h^2 at x_i.
/// Throws ModelError when D(x_i) <= 0 at an interior node.
SystemMatrix build_system_matrix(const Grid1D& grid, const std::function<double(double)>& diffusion,
                                 const std::function<double(double)>& advection);

/// Nonnegative off-diagonal entries, i.e. |B(x_i)| h / 2 <= D(x_i) on every interior row.
bool is_metzler(const SystemMatrix& m);

double inf_norm(const Eigen::Ref<const Matrix>& a);

/// mu_inf[A] = max_i (a_ii + sum_{j != i} |a_ij|). Requires a square matrix.
double log_norm_inf(const Eigen::Ref<const Matrix>& a);

}  // namespace fkpp
