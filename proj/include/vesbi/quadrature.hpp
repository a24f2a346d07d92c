#pragma once

// Quadrature rules: the 8th-order hybrid Gauss-trapezoid (Alpert) rule for
// 2*pi-periodic integrands with a logarithmic singularity, and small
// Gauss-Legendre rules used for interpolatory integration weights.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "vesbi/spectral.hpp"

namespace vesbi {

// Auxiliary node/weight set of the 8th-order log-singular Gauss-trapezoid
// rule (Alpert 1999): error O(h^8 log h). Nodes are offsets in units of the
// grid spacing, placed symmetrically on both sides of the singularity; the
// trapezoid part starts regularStart grid points away. The 17-digit values
// are the solution of the defining moment equations, regenerated with
// scripts/gen_log_quadrature.py and matching the published set.
struct AlpertRule {
  int order = 8;
  int regularStart = 5;  // "a": first plain trapezoid node
  std::vector<double> auxiliaryNodes = {
      6.5318157085679183e-03, 9.0867445846577286e-02, 3.9679665333758777e-01,
      1.0278566405256457e+00, 1.9452885929092660e+00, 2.9801479338896397e+00,
      3.9988613499511230e+00};
  std::vector<double> auxiliaryWeights = {
      2.4621941989952032e-02, 1.7013158668541781e-01, 4.6092563586500772e-01,
      7.9472911486218943e-01, 1.0087104143379326e+00, 1.0360936497262156e+00,
      1.0047876565332848e+00};

  static const AlpertRule& order8() {
    static const AlpertRule rule;
    return rule;
  }
};

// Integrates a 2*pi-periodic integrand with a log singularity at s = center.
// f is sampled at arbitrary parameters (callers interpolate as needed).
inline double alpertIntegrate(const std::function<double(double)>& f, int n,
                              double center, const AlpertRule& rule = AlpertRule::order8()) {
  if (n < 2 * rule.regularStart + 2)
    throw std::invalid_argument("alpertIntegrate: grid too coarse for the rule");
  const double h = 2.0 * M_PI / n;
  double acc = 0.0;
  for (int k = rule.regularStart; k <= n - rule.regularStart; ++k)
    acc += f(center + k * h);
  for (std::size_t l = 0; l < rule.auxiliaryNodes.size(); ++l) {
    const double d = rule.auxiliaryNodes[l] * h;
    acc += rule.auxiliaryWeights[l] * (f(center + d) + f(center + 2.0 * M_PI - d));
  }
  return acc * h;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gaussLegendre(int n, VectorXd& nodes, VectorXd& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    nodes[n - 1 - i] = t;
    weights[n - 1 - i] = 2.0 / ((1.0 - t * t) * pp * pp);
  }
}

}  // namespace vesbi
