#include "qmetro/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "qmetro/errors.hpp"

namespace qmetro {

// Nodes are the roots of P_n, found by Newton iteration from the Chebyshev
// initial guess; weights are 2 / ((1 - x^2) P_n'(x)^2).
std::vector<QuadPoint> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("gauss_legendre: need at least one node");
  if (!(b > a)) throw ValidationError("gauss_legendre: empty interval");

  std::vector<QuadPoint> pts(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_n and P_n' via the three-term recurrence.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    pts[i] = {x, w};
    pts[n - 1 - i] = {-x, w};
  }
  // Odd n: pin the middle node to exactly zero.
  if (n % 2 == 1) pts[half - 1].x = 0.0;

  const double mid = 0.5 * (a + b), scale = 0.5 * (b - a);
  for (auto& p : pts) {
    p.x = mid + scale * p.x;
    p.w *= scale;
  }
  return pts;
}

}  // namespace qmetro
