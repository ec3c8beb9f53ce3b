#pragma once

#include <vector>

namespace qmetro {

struct QuadPoint {
  double x;
  double w;
};

/// Gauss-Legendre rule with n nodes on [a, b]. Exact for polynomials of
/// degree <= 2n - 1.
std::vector<QuadPoint> gauss_legendre(int n, double a, double b);

}  // namespace qmetro
