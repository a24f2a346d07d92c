#pragma once

// Stokes layer potentials on spectral curves: self-interaction single layer
// with the log-singular hybrid rule, smooth cross interactions with the
// trapezoid rule, interpolation-based near-singular evaluation, and the
// wall double-layer potential.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "vesbi/curve.hpp"
#include "vesbi/quadrature.hpp"

namespace vesbi {

// Recoverable solver events (collisions, blown solves) that reject a time
// step rather than abort the run.
struct StepRejection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NearParams {
  double zoneFactor = 5.0;  // near zone width in units of arclength spacing
  int upsampleFactor = 16;
  int interpPoints = 6;  // ray points beyond the on-curve limit
  // Ray-node spacing in units of the arclength spacing. Targets farther than
  // one node spacing from the curve are evaluated by the upsampled trapezoid
  // directly (already at quadrature accuracy there); only closer targets use
  // the interpolation, whose nodes must sit no closer to the curve than the
  // upsampled trapezoid stays accurate.
  double interpSpacingFactor = 0.3;

  double rayNodeSpacing(double ds) const { return interpSpacingFactor * ds; }
};

struct PointList {
  ArrayXd x, y;
  int size() const { return static_cast<int>(x.size()); }
};

struct VelocityList {
  ArrayXd x, y;
  VelocityList() = default;
  explicit VelocityList(int n) : x(ArrayXd::Zero(n)), y(ArrayXd::Zero(n)) {}
};

// ---------------------------------------------------------------------------
// kernels

// Smooth factor r (x) r / rho^2 of the Stokeslet.
inline void stokesSmoothKernel(double rx, double ry, double& kxx, double& kxy,
                               double& kyy) {
  const double rho2 = rx * rx + ry * ry;
  kxx = rx * rx / rho2;
  kxy = rx * ry / rho2;
  kyy = ry * ry / rho2;
}

// ---------------------------------------------------------------------------
// self single layer: dense matrix with the Alpert rule on the log kernel and
// the trapezoid rule (diagonal limit t (x) t) on the smooth part.

struct LayerMatrix {
  MatrixXd kxx, kxy, kyy;  // pointwise-symmetric 2x2 kernel blocks

  void apply(const ArrayXd& fx, const ArrayXd& fy, ArrayXd& ux, ArrayXd& uy) const {
    ux = (kxx * fx.matrix() + kxy * fy.matrix()).array();
    uy = (kxy * fx.matrix() + kyy * fy.matrix()).array();
  }
};

namespace detail {

struct AlpertStencils {
  std::vector<double> offsets;        // signed offsets in parameter units
  std::vector<double> weights;        // matching auxiliary weights
  std::vector<ArrayXd> interpRows;    // circulant interpolation stencils
};

inline const AlpertStencils& alpertStencils(int n) {
  static std::map<int, AlpertStencils> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const AlpertRule& rule = AlpertRule::order8();
  const double h = 2.0 * M_PI / n;
  AlpertStencils s;
  for (std::size_t l = 0; l < rule.auxiliaryNodes.size(); ++l) {
    for (int sign : {+1, -1}) {
      const double delta = sign * rule.auxiliaryNodes[l] * h;
      s.offsets.push_back(delta);
      s.weights.push_back(rule.auxiliaryWeights[l]);
      s.interpRows.push_back(shiftStencil(n, delta));
    }
  }
  return cache.emplace(n, std::move(s)).first->second;
}

}  // namespace detail

inline LayerMatrix selfLayerMatrix(const VesicleCurve& curve, const CurveGeometry& geom) {
  const int n = curve.n();
  const double h = curve.parameterSpacing();
  const double pre = 1.0 / (4.0 * M_PI);
  const AlpertRule& rule = AlpertRule::order8();
  if (n < 2 * rule.regularStart + 2)
    throw std::invalid_argument("selfLayerMatrix: N too small for the quadrature rule");

  LayerMatrix g;
  g.kxx = MatrixXd::Zero(n, n);
  g.kxy = MatrixXd::Zero(n, n);
  g.kyy = MatrixXd::Zero(n, n);

  // smooth part: spectrally accurate trapezoid, tangent outer product on the
  // diagonal
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      const double w = pre * geom.jacobian[m] * h;
      double kxx, kxy, kyy;
      if (m == j) {
        kxx = geom.tangentX[j] * geom.tangentX[j];
        kxy = geom.tangentX[j] * geom.tangentY[j];
        kyy = geom.tangentY[j] * geom.tangentY[j];
      } else {
        stokesSmoothKernel(curve.x[j] - curve.x[m], curve.y[j] - curve.y[m], kxx, kxy, kyy);
      }
      g.kxx(j, m) += w * kxx;
      g.kxy(j, m) += w * kxy;
      g.kyy(j, m) += w * kyy;
    }
  }

  // log part, regular trapezoid tail of the hybrid rule
  for (int j = 0; j < n; ++j) {
    for (int k = rule.regularStart; k <= n - rule.regularStart; ++k) {
      const int m = (j + k) % n;
      const double rx = curve.x[j] - curve.x[m];
      const double ry = curve.y[j] - curve.y[m];
      const double w = -0.5 * std::log(rx * rx + ry * ry) * pre * geom.jacobian[m] * h;
      g.kxx(j, m) += w;
      g.kyy(j, m) += w;
    }
  }

  // log part, auxiliary nodes: kernel at interpolated curve points, density
  // folded through the interpolation stencil
  const auto& aux = detail::alpertStencils(n);
  for (std::size_t l = 0; l < aux.offsets.size(); ++l) {
    const double delta = aux.offsets[l];
    const ArrayXd xs = shiftSamples(curve.x, delta);
    const ArrayXd ys = shiftSamples(curve.y, delta);
    const ArrayXd xps = shiftSamples(geom.xPrime, delta);
    const ArrayXd yps = shiftSamples(geom.yPrime, delta);
    const ArrayXd jacS = (xps.square() + yps.square()).sqrt();
    const ArrayXd& row = aux.interpRows[l];
    for (int j = 0; j < n; ++j) {
      const double rx = curve.x[j] - xs[j];
      const double ry = curve.y[j] - ys[j];
      const double w =
          -0.5 * std::log(rx * rx + ry * ry) * pre * jacS[j] * aux.weights[l] * h;
      for (int m = 0; m < n; ++m) {
        const double c = w * row[m];
        const int col = (j + m) % n;
        g.kxx(j, col) += c;
        g.kyy(j, col) += c;
      }
    }
  }
  return g;
}

// On-curve single-layer velocity at the tracker points.
inline VelocityList selfSingleLayer(const VesicleCurve& curve, const ArrayXd& fx,
                                    const ArrayXd& fy) {
  if (fx.size() != curve.x.size() || fy.size() != curve.y.size())
    throw std::invalid_argument("selfSingleLayer: density size mismatch");
  const CurveGeometry geom = geometry(curve);
  const LayerMatrix g = selfLayerMatrix(curve, geom);
  VelocityList out(curve.n());
  g.apply(fx, fy, out.x, out.y);
  return out;
}

// ---------------------------------------------------------------------------
// trapezoid evaluation off the source curve (single layer)

inline void singleLayerTrapezoidPoint(const ArrayXd& sx, const ArrayXd& sy,
                                      const ArrayXd& weight,  // jac * h / (4 pi)
                                      const ArrayXd& fx, const ArrayXd& fy,
                                      double tx, double ty, double& ux, double& uy) {
  const int n = static_cast<int>(sx.size());
  double ax = 0.0, ay = 0.0;
  for (int m = 0; m < n; ++m) {
    const double rx = tx - sx[m];
    const double ry = ty - sy[m];
    const double rho2 = rx * rx + ry * ry;
    const double logw = -0.5 * std::log(rho2);
    const double rdotf = (rx * fx[m] + ry * fy[m]) / rho2;
    ax += weight[m] * (logw * fx[m] + rx * rdotf);
    ay += weight[m] * (logw * fy[m] + ry * rdotf);
  }
  ux = ax;
  uy = ay;
}

// ---------------------------------------------------------------------------
// source apparatus: cached fine discretization + interpolation data used for
// cross and near-singular evaluation

struct SourceApparatus {
  // coarse
  CVector specX, specY;  // spectra of the coarse positions
  double ds = 0.0;       // coarse arclength spacing
  double nearWidth = 0.0;
  // fine (upsampled)
  ArrayXd fineX, fineY, fineJac;
  ArrayXd fineWeightSL;            // jac * h_fine / (4 pi)
  ArrayXd fineNormalX, fineNormalY;  // for double-layer sources
  ArrayXd fineWeightDL;            // jac * h_fine / pi
  // bounding box inflated by the near width
  double boxLoX = 0, boxHiX = 0, boxLoY = 0, boxHiY = 0;

  static SourceApparatus build(const VesicleCurve& curve, const CurveGeometry& geom,
                               const NearParams& np = NearParams{}) {
    SourceApparatus s;
    s.curve = &curve;
    s.geom = &geom;
    s.specX = spectrum(curve.x);
    s.specY = spectrum(curve.y);
    s.ds = geom.arclengthSpacing;
    s.nearWidth = np.zoneFactor * s.ds;
    const int f = np.upsampleFactor;
    s.fineX = upsampleSamples(curve.x, f);
    s.fineY = upsampleSamples(curve.y, f);
    const ArrayXd fxp = upsampleSamples(geom.xPrime, f);
    const ArrayXd fyp = upsampleSamples(geom.yPrime, f);
    s.fineJac = (fxp.square() + fyp.square()).sqrt();
    const double hFine = 2.0 * M_PI / s.fineX.size();
    s.fineWeightSL = s.fineJac * hFine / (4.0 * M_PI);
    s.fineNormalX = fyp / s.fineJac;
    s.fineNormalY = -fxp / s.fineJac;
    s.fineWeightDL = s.fineJac * hFine / M_PI;
    s.boxLoX = s.fineX.minCoeff() - s.nearWidth;
    s.boxHiX = s.fineX.maxCoeff() + s.nearWidth;
    s.boxLoY = s.fineY.minCoeff() - s.nearWidth;
    s.boxHiY = s.fineY.maxCoeff() + s.nearWidth;
    return s;
  }

  bool mayBeNear(double tx, double ty) const {
    return tx >= boxLoX && tx <= boxHiX && ty >= boxLoY && ty <= boxHiY;
  }
};

struct NearTarget {
  int index = -1;      // position in the caller's target list
  double param = 0.0;  // parameter of the nearest curve point
  double dist = 0.0;
  double baseX = 0.0, baseY = 0.0;
  double rayX = 0.0, rayY = 0.0;  // unit direction base -> target
};

// Distance from a point to the curve via the fine discretization, refined by
// a parabolic fit through the three closest fine samples.
inline NearTarget locateNearestPoint(const SourceApparatus& s, double tx, double ty) {
  const int nf = static_cast<int>(s.fineX.size());
  int best = 0;
  double bestD2 = std::numeric_limits<double>::max();
  for (int m = 0; m < nf; ++m) {
    const double dx = tx - s.fineX[m];
    const double dy = ty - s.fineY[m];
    const double d2 = dx * dx + dy * dy;
    if (d2 < bestD2) {
      bestD2 = d2;
      best = m;
    }
  }
  const double hf = 2.0 * M_PI / nf;
  auto d2at = [&](int m) {
    const int mm = (m % nf + nf) % nf;
    const double dx = tx - s.fineX[mm];
    const double dy = ty - s.fineY[mm];
    return dx * dx + dy * dy;
  };
  const double dm = d2at(best - 1), d0 = bestD2, dp = d2at(best + 1);
  double shift = 0.0;
  const double denom = dm - 2.0 * d0 + dp;
  if (denom > 0.0) shift = std::clamp(0.5 * (dm - dp) / denom, -0.5, 0.5);

  NearTarget t;
  t.param = hf * (best + shift);
  t.baseX = trigEval(s.specX, t.param);
  t.baseY = trigEval(s.specY, t.param);
  const double rx = tx - t.baseX;
  const double ry = ty - t.baseY;
  t.dist = std::hypot(rx, ry);
  if (t.dist < 1e-12 * s.ds)
    throw StepRejection("near-singular evaluation: target collides with the source curve");
  t.rayX = rx / t.dist;
  t.rayY = ry / t.dist;
  return t;
}

// Barycentric Lagrange interpolation on the equispaced ray nodes 0, ds, ...,
// m*ds evaluated at distance d in [0, m*ds].
inline double lagrangeRayInterp(const std::vector<double>& values, double ds, double d) {
  const int m = static_cast<int>(values.size()) - 1;
  double num = 0.0, den = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= m; ++i) {
    const double xi = i * ds;
    if (std::abs(d - xi) < 1e-14 * ds) return values[i];
    const double w = ((i % 2 == 0) ? binom : -binom) / (d - xi);
    num += w * values[i];
    den += w;
    binom = binom * (m - i) / (i + 1.0);
  }
  return num / den;
}

// Near-singular evaluation of the single-layer potential. Targets farther
// than one ray-node spacing from the curve use the upsampled trapezoid
// directly; closer targets Lagrange-interpolate between the on-curve limit
// (from the hybrid-rule values) and fine trapezoid values along the outward
// ray.
inline void nearSingularPoint(const SourceApparatus& s, const CVector& specUx,
                              const CVector& specUy, const ArrayXd& fineFx,
                              const ArrayXd& fineFy, const NearTarget& t,
                              const NearParams& np, double& ux, double& uy) {
  const double spacing = np.rayNodeSpacing(s.ds);
  if (t.dist >= spacing) {
    const double px = t.baseX + t.dist * t.rayX;
    const double py = t.baseY + t.dist * t.rayY;
    singleLayerTrapezoidPoint(s.fineX, s.fineY, s.fineWeightSL, fineFx, fineFy, px, py,
                              ux, uy);
    return;
  }
  std::vector<double> vx(np.interpPoints + 1), vy(np.interpPoints + 1);
  vx[0] = trigEval(specUx, t.param);
  vy[0] = trigEval(specUy, t.param);
  for (int i = 1; i <= np.interpPoints; ++i) {
    const double px = t.baseX + i * spacing * t.rayX;
    const double py = t.baseY + i * spacing * t.rayY;
    singleLayerTrapezoidPoint(s.fineX, s.fineY, s.fineWeightSL, fineFx, fineFy, px, py,
                              vx[i], vy[i]);
  }
  ux = lagrangeRayInterp(vx, spacing, t.dist);
  uy = lagrangeRayInterp(vy, spacing, t.dist);
}

// ---------------------------------------------------------------------------
// public cross / near-singular single-layer operations

// Plain trapezoid evaluation; rejects targets inside the near zone.
inline VelocityList crossSingleLayer(const VesicleCurve& source, const ArrayXd& fx,
                                     const ArrayXd& fy, const PointList& targets,
                                     const NearParams& np = NearParams{}) {
  const CurveGeometry geom = geometry(source);
  const SourceApparatus s = SourceApparatus::build(source, geom, np);
  const double h = source.parameterSpacing();
  const ArrayXd weight = geom.jacobian * h / (4.0 * M_PI);
  VelocityList out(targets.size());
  for (int i = 0; i < targets.size(); ++i) {
    if (s.mayBeNear(targets.x[i], targets.y[i])) {
      const NearTarget t = locateNearestPoint(s, targets.x[i], targets.y[i]);
      if (t.dist < s.nearWidth)
        throw std::invalid_argument(
            "crossSingleLayer: target inside the near zone; use nearSingularEval");
    }
    singleLayerTrapezoidPoint(source.x, source.y, weight, fx, fy, targets.x[i],
                              targets.y[i], out.x[i], out.y[i]);
  }
  return out;
}

inline VelocityList nearSingularEval(const VesicleCurve& source, const ArrayXd& fx,
                                     const ArrayXd& fy, const PointList& targets,
                                     const NearParams& np = NearParams{}) {
  const CurveGeometry geom = geometry(source);
  const SourceApparatus s = SourceApparatus::build(source, geom, np);
  const LayerMatrix selfMat = selfLayerMatrix(source, geom);
  ArrayXd onX, onY;
  selfMat.apply(fx, fy, onX, onY);
  const CVector specUx = spectrum(onX);
  const CVector specUy = spectrum(onY);
  const ArrayXd fineFx = upsampleSamples(fx, np.upsampleFactor);
  const ArrayXd fineFy = upsampleSamples(fy, np.upsampleFactor);
  VelocityList out(targets.size());
  for (int i = 0; i < targets.size(); ++i) {
    const NearTarget t = locateNearestPoint(s, targets.x[i], targets.y[i]);
    nearSingularPoint(s, specUx, specUy, fineFx, fineFy, t, np, out.x[i], out.y[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// double layer (wall potential)

inline void doubleLayerTrapezoidPoint(const ArrayXd& sx, const ArrayXd& sy,
                                      const ArrayXd& nx, const ArrayXd& ny,
                                      const ArrayXd& weight,  // jac * h / pi
                                      const ArrayXd& ex, const ArrayXd& ey,
                                      double tx, double ty, double& ux, double& uy) {
  const int n = static_cast<int>(sx.size());
  double ax = 0.0, ay = 0.0;
  for (int m = 0; m < n; ++m) {
    const double rx = tx - sx[m];
    const double ry = ty - sy[m];
    const double rho2 = rx * rx + ry * ry;
    const double rdotn = (rx * nx[m] + ry * ny[m]) / rho2;
    const double rdote = (rx * ex[m] + ry * ey[m]) / rho2;
    const double c = weight[m] * rdotn * rdote;
    ax += c * rx;
    ay += c * ry;
  }
  ux = ax;
  uy = ay;
}

// On-curve principal value matrix of the double layer; the kernel is smooth
// on the curve with diagonal limit -kappa/2 t (x) t.
inline LayerMatrix doubleLayerPVMatrix(const VesicleCurve& curve, const CurveGeometry& geom) {
  const int n = curve.n();
  const double h = curve.parameterSpacing();
  LayerMatrix g;
  g.kxx = MatrixXd::Zero(n, n);
  g.kxy = MatrixXd::Zero(n, n);
  g.kyy = MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) {
      const double w = geom.jacobian[m] * h / M_PI;
      if (m == j) {
        const double c = -0.5 * geom.curvature[j] * w;
        g.kxx(j, m) = c * geom.tangentX[j] * geom.tangentX[j];
        g.kxy(j, m) = c * geom.tangentX[j] * geom.tangentY[j];
        g.kyy(j, m) = c * geom.tangentY[j] * geom.tangentY[j];
      } else {
        const double rx = curve.x[j] - curve.x[m];
        const double ry = curve.y[j] - curve.y[m];
        const double rho2 = rx * rx + ry * ry;
        const double rdotn = (rx * geom.normalX[m] + ry * geom.normalY[m]) / rho2;
        const double c = w * rdotn / rho2;
        g.kxx(j, m) = c * rx * rx;
        g.kxy(j, m) = c * rx * ry;
        g.kyy(j, m) = c * ry * ry;
      }
    }
  }
  return g;
}

}  // namespace vesbi
