#pragma once

#include <vector>

namespace fkpp {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b] (Newton iteration on the three-term recurrence).
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

}  // namespace fkpp
