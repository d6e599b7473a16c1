#include "fkpp/grid.hpp"

#include <cmath>
#include <string>

#include "fkpp/errors.hpp"

namespace fkpp {

Grid1D::Grid1D(double length, int n) : length_(length), n_(n), h_(0.0) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ConfigError("grid: length must be positive and finite");
    }
    if (n < 3) {
        throw ConfigError("grid: need at least 3 intervals, got " + std::to_string(n));
    }
    h_ = length / n;
}

Grid1D Grid1D::from_spacing(double length, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid: spacing must be positive");
    const double ratio = length / h;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * ratio || n > 1e7) {
        throw ConfigError("grid: length is not an integer multiple of h");
    }
    return Grid1D(length, static_cast<int>(n));
}

TimeMesh::TimeMesh(double horizon, int steps) : horizon_(horizon), steps_(steps), k_(0.0) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ConfigError("time mesh: horizon must be positive and finite");
    }
    if (steps < 1) throw ConfigError("time mesh: need at least one step");
    k_ = horizon / steps;
}

TimeMesh TimeMesh::from_step(double horizon, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("time mesh: step must be positive");
    const double ratio = horizon / k;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * ratio || n > 1e9) {
        throw ConfigError("time mesh: horizon is not an integer multiple of k");
    }
    return TimeMesh(horizon, static_cast<int>(n));
}

}  // namespace fkpp
