#pragma once

// Vesicle interfacial operators (bending, tension, surface divergence), the
// suspension state, background/wall flows, and assembly of the hydrodynamic
// velocity with all operators frozen at a linearization state.

#include <memory>
#include <optional>
#include <vector>

#include "vesbi/potentials.hpp"

namespace vesbi {

// ---------------------------------------------------------------------------
// interfacial operators, frozen at the geometry passed in

inline ArrayXd arclengthDerivative(const CurveGeometry& g, const ArrayXd& f) {
  return spectralDerivative(f, 1) / g.jacobian;
}

// Fourth arclength derivative, per component, with the frozen jacobian.
inline void bending(const CurveGeometry& g, const ArrayXd& fx, const ArrayXd& fy,
                    ArrayXd& outX, ArrayXd& outY) {
  outX = fx;
  outY = fy;
  for (int k = 0; k < 4; ++k) {
    outX = arclengthDerivative(g, outX);
    outY = arclengthDerivative(g, outY);
  }
}

// d/ds (sigma dx/ds) with x from curveRef and s-derivatives frozen at geomRef.
inline void tensionOp(const CurveGeometry& geomRef, const VesicleCurve& curveRef,
                      const ArrayXd& sigma, ArrayXd& outX, ArrayXd& outY) {
  const ArrayXd xs = spectralDerivative(curveRef.x, 1) / geomRef.jacobian;
  const ArrayXd ys = spectralDerivative(curveRef.y, 1) / geomRef.jacobian;
  outX = arclengthDerivative(geomRef, sigma * xs);
  outY = arclengthDerivative(geomRef, sigma * ys);
}

// dx/ds . df/ds with the frozen geometry.
inline ArrayXd surfaceDiv(const CurveGeometry& geomRef, const ArrayXd& fx,
                          const ArrayXd& fy) {
  return geomRef.tangentX * arclengthDerivative(geomRef, fx) +
         geomRef.tangentY * arclengthDerivative(geomRef, fy);
}

// ---------------------------------------------------------------------------
// walls

struct WallGeometry {
  // curves[0] is the outer boundary (counter-clockwise); the rest are inner
  // boundaries (clockwise). Dirichlet velocity samples per curve.
  std::vector<VesicleCurve> curves;
  std::vector<CurveGeometry> geoms;
  std::vector<ArrayXd> bcX, bcY;

  WallGeometry(std::vector<VesicleCurve> cs, std::vector<ArrayXd> bx, std::vector<ArrayXd> by)
      : curves(std::move(cs)), bcX(std::move(bx)), bcY(std::move(by)) {
    if (curves.empty()) throw CurveError("wall: needs at least the outer curve");
    geoms.reserve(curves.size());
    for (const auto& c : curves) geoms.push_back(geometry(c));
    if (geoms[0].area <= 0.0)
      throw CurveError("wall: outer curve must be counter-clockwise");
    for (std::size_t q = 1; q < curves.size(); ++q) {
      if (signedAreaOf(curves[q].x, curves[q].y) >= 0.0)
        throw CurveError("wall: inner curves must be clockwise");
      for (int i = 0; i < curves[q].n(); ++i) {
        if (windingNumber(curves[0].x, curves[0].y, curves[q].x[i], curves[q].y[i]) != 1)
          throw CurveError("wall: outer curve must enclose all inner curves");
      }
    }
    for (std::size_t q = 0; q < curves.size(); ++q) {
      if (bcX[q].size() != curves[q].n() || bcY[q].size() != curves[q].n())
        throw CurveError("wall: boundary data size mismatch");
    }
  }

  int curveCount() const { return static_cast<int>(curves.size()); }
  int totalPoints() const {
    int n = 0;
    for (const auto& c : curves) n += c.n();
    return n;
  }
  bool encloses(double px, double py) const {
    if (windingNumber(curves[0].x, curves[0].y, px, py) != 1) return false;
    for (std::size_t q = 1; q < curves.size(); ++q) {
      if (windingNumber(curves[q].x, curves[q].y, px, py) != 0) return false;
    }
    return true;
  }
};

// Stokeslet + rotlet at a completion point; both carry the single-layer
// prefactor so coefficient magnitudes stay comparable to the density.
inline void completionKernel(double rx, double ry, double fxc, double fyc, double torque,
                             double& ux, double& uy) {
  const double rho2 = rx * rx + ry * ry;
  const double pre = 1.0 / (4.0 * M_PI);
  const double logw = -0.5 * std::log(rho2);
  const double rdotf = (rx * fxc + ry * fyc) / rho2;
  ux = pre * (logw * fxc + rx * rdotf) + pre * torque * (-ry) / rho2;
  uy = pre * (logw * fyc + ry * rdotf) + pre * torque * rx / rho2;
}

// Precomputed wall machinery for a run: fine discretizations, the completed
// double-layer system matrix and its factorization, Dirichlet data.
struct WallApparatus {
  const WallGeometry* wall = nullptr;
  NearParams np;
  std::vector<SourceApparatus> src;   // per curve
  std::vector<LayerMatrix> pv;        // per curve, on-curve principal value
  std::vector<int> offset;            // stacked x-block offset per curve
  int totalPoints = 0;
  MatrixXd systemMatrix;              // -1/2 + D + N0 + completion
  Eigen::PartialPivLU<MatrixXd> lu;
  VectorXd dirichlet;                 // stacked boundary data
  std::vector<double> centerX, centerY;  // completion points of inner curves

  // per-curve stacked layout: [x values; y values]
  int xIndex(int c, int i) const { return offset[c] + i; }
  int yIndex(int c, int i) const { return offset[c] + wall->curves[c].n() + i; }

  explicit WallApparatus(const WallGeometry& w, const NearParams& nearParams = NearParams{})
      : wall(&w), np(nearParams) {
    const int nc = w.curveCount();
    offset.resize(nc);
    for (int c = 0; c < nc; ++c) {
      offset[c] = 2 * totalPoints;
      totalPoints += w.curves[c].n();
      src.push_back(SourceApparatus::build(w.curves[c], w.geoms[c], np));
      pv.push_back(doubleLayerPVMatrix(w.curves[c], w.geoms[c]));
    }
    centerX.assign(nc, 0.0);
    centerY.assign(nc, 0.0);
    for (int c = 1; c < nc; ++c) {
      centerX[c] = w.curves[c].x.mean();
      centerY[c] = w.curves[c].y.mean();
    }
    assemble();
    dirichlet.resize(2 * totalPoints);
    for (int c = 0; c < nc; ++c) {
      for (int i = 0; i < w.curves[c].n(); ++i) {
        dirichlet[xIndex(c, i)] = w.bcX[c][i];
        dirichlet[yIndex(c, i)] = w.bcY[c][i];
      }
    }
  }

  void assemble() {
    const int dim = 2 * totalPoints;
    const int nc = wall->curveCount();
    MatrixXd a = MatrixXd::Zero(dim, dim);

    for (int c = 0; c < nc; ++c) {
      const int n = wall->curves[c].n();
      // own-curve principal value with the fluid-side jump -1/2
      for (int i = 0; i < n; ++i) {
        for (int m = 0; m < n; ++m) {
          a(xIndex(c, i), xIndex(c, m)) += pv[c].kxx(i, m);
          a(xIndex(c, i), yIndex(c, m)) += pv[c].kxy(i, m);
          a(yIndex(c, i), xIndex(c, m)) += pv[c].kxy(i, m);
          a(yIndex(c, i), yIndex(c, m)) += pv[c].kyy(i, m);
        }
        a(xIndex(c, i), xIndex(c, i)) -= 0.5;
        a(yIndex(c, i), yIndex(c, i)) -= 0.5;
      }
      // other curves by plain trapezoid (walls are mutually well separated)
      for (int b = 0; b < nc; ++b) {
        if (b == c) continue;
        const VesicleCurve& sc = wall->curves[b];
        const CurveGeometry& sg = wall->geoms[b];
        const double h = sc.parameterSpacing();
        for (int i = 0; i < n; ++i) {
          const double tx = wall->curves[c].x[i];
          const double ty = wall->curves[c].y[i];
          for (int m = 0; m < sc.n(); ++m) {
            const double rx = tx - sc.x[m];
            const double ry = ty - sc.y[m];
            const double rho2 = rx * rx + ry * ry;
            const double rdotn = (rx * sg.normalX[m] + ry * sg.normalY[m]) / rho2;
            const double cmn = sg.jacobian[m] * h / M_PI * rdotn / rho2;
            a(xIndex(c, i), xIndex(b, m)) += cmn * rx * rx;
            a(xIndex(c, i), yIndex(b, m)) += cmn * rx * ry;
            a(yIndex(c, i), xIndex(b, m)) += cmn * rx * ry;
            a(yIndex(c, i), yIndex(b, m)) += cmn * ry * ry;
          }
        }
      }
    }

    // rank fix on the outer curve: n(x) (n(y) . eta(y)) ds
    {
      const VesicleCurve& oc = wall->curves[0];
      const CurveGeometry& og = wall->geoms[0];
      const double h = oc.parameterSpacing();
      for (int i = 0; i < oc.n(); ++i) {
        for (int m = 0; m < oc.n(); ++m) {
          const double w = og.jacobian[m] * h;
          a(xIndex(0, i), xIndex(0, m)) += og.normalX[i] * og.normalX[m] * w;
          a(xIndex(0, i), yIndex(0, m)) += og.normalX[i] * og.normalY[m] * w;
          a(yIndex(0, i), xIndex(0, m)) += og.normalY[i] * og.normalX[m] * w;
          a(yIndex(0, i), yIndex(0, m)) += og.normalY[i] * og.normalY[m] * w;
        }
      }
    }

    // Stokeslet/rotlet completion per inner curve, coefficients from moments
    // of the density on that curve
    for (int q = 1; q < nc; ++q) {
      const VesicleCurve& qc = wall->curves[q];
      const CurveGeometry& qg = wall->geoms[q];
      const double h = qc.parameterSpacing();
      const int nq = qc.n();
      // moments: rows (Fx, Fy, L), columns stacked density on curve q
      MatrixXd moments = MatrixXd::Zero(3, 2 * nq);
      for (int m = 0; m < nq; ++m) {
        const double w = qg.jacobian[m] * h / (2.0 * M_PI);
        moments(0, m) = w;
        moments(1, nq + m) = w;
        moments(2, m) = -(qc.y[m] - centerY[q]) * w;
        moments(2, nq + m) = (qc.x[m] - centerX[q]) * w;
      }
      // response of every wall point to (Fx, Fy, L)
      MatrixXd response = MatrixXd::Zero(dim, 3);
      for (int c = 0; c < nc; ++c) {
        for (int i = 0; i < wall->curves[c].n(); ++i) {
          const double rx = wall->curves[c].x[i] - centerX[q];
          const double ry = wall->curves[c].y[i] - centerY[q];
          double ux, uy;
          completionKernel(rx, ry, 1.0, 0.0, 0.0, ux, uy);
          response(xIndex(c, i), 0) = ux;
          response(yIndex(c, i), 0) = uy;
          completionKernel(rx, ry, 0.0, 1.0, 0.0, ux, uy);
          response(xIndex(c, i), 1) = ux;
          response(yIndex(c, i), 1) = uy;
          completionKernel(rx, ry, 0.0, 0.0, 1.0, ux, uy);
          response(xIndex(c, i), 2) = ux;
          response(yIndex(c, i), 2) = uy;
        }
      }
      a.block(0, offset[q], dim, 2 * nq) += response * moments;
    }

    systemMatrix = std::move(a);
    lu.compute(systemMatrix);
    // cheap singularity probe
    const VectorXd probe = VectorXd::Ones(dim);
    const VectorXd sol = lu.solve(probe);
    if (!(sol.array().isFinite().all()) ||
        (systemMatrix * sol - probe).norm() > 1e-6 * probe.norm())
      throw std::runtime_error("wall system is singular or ill-posed");
  }

  // completion coefficients (Fx, Fy, L) per inner curve for a given density
  std::vector<std::array<double, 3>> completionCoefficients(const VectorXd& eta) const {
    std::vector<std::array<double, 3>> out;
    const int nc = wall->curveCount();
    for (int q = 1; q < nc; ++q) {
      const VesicleCurve& qc = wall->curves[q];
      const CurveGeometry& qg = wall->geoms[q];
      const double h = qc.parameterSpacing();
      double fx = 0, fy = 0, torque = 0;
      for (int m = 0; m < qc.n(); ++m) {
        const double w = qg.jacobian[m] * h / (2.0 * M_PI);
        const double ex = eta[xIndex(q, m)];
        const double ey = eta[yIndex(q, m)];
        fx += w * ex;
        fy += w * ey;
        torque += w * ((qc.x[m] - centerX[q]) * ey - (qc.y[m] - centerY[q]) * ex);
      }
      out.push_back({fx, fy, torque});
    }
    return out;
  }

  // completion velocity at an arbitrary point
  void completionVelocity(const std::vector<std::array<double, 3>>& coeff, double tx,
                          double ty, double& ux, double& uy) const {
    ux = 0;
    uy = 0;
    for (std::size_t q = 0; q < coeff.size(); ++q) {
      double vx, vy;
      completionKernel(tx - centerX[q + 1], ty - centerY[q + 1], coeff[q][0], coeff[q][1],
                       coeff[q][2], vx, vy);
      ux += vx;
      uy += vy;
    }
  }

  // double layer + completion at fluid points far from every wall curve
  void fieldVelocityFar(const VectorXd& eta, double tx, double ty, double& ux,
                        double& uy) const {
    ux = 0;
    uy = 0;
    const auto coeff = completionCoefficients(eta);
    for (int c = 0; c < wall->curveCount(); ++c) {
      const int n = wall->curves[c].n();
      ArrayXd ex(n), ey(n);
      for (int i = 0; i < n; ++i) {
        ex[i] = eta[xIndex(c, i)];
        ey[i] = eta[yIndex(c, i)];
      }
      const double h = wall->curves[c].parameterSpacing();
      const ArrayXd w = wall->geoms[c].jacobian * h / M_PI;
      double vx, vy;
      doubleLayerTrapezoidPoint(wall->curves[c].x, wall->curves[c].y,
                                wall->geoms[c].normalX, wall->geoms[c].normalY, w, ex, ey,
                                tx, ty, vx, vy);
      ux += vx;
      uy += vy;
    }
    double cx, cy;
    completionVelocity(coeff, tx, ty, cx, cy);
    ux += cx;
    uy += cy;
  }
};

// Solves the completed double-layer system for given Dirichlet samples
// (right-hand side defaults to the wall's own boundary data).
struct WallSolution {
  VectorXd eta;
  std::vector<std::array<double, 3>> coefficients;
};

inline WallSolution wallSolve(const WallApparatus& app, const VectorXd& rhs) {
  WallSolution s;
  s.eta = app.lu.solve(rhs);
  if (!s.eta.array().isFinite().all())
    throw std::runtime_error("wallSolve: singular system");
  s.coefficients = app.completionCoefficients(s.eta);
  return s;
}

inline WallSolution wallSolve(const WallApparatus& app) {
  return wallSolve(app, app.dirichlet);
}

// ---------------------------------------------------------------------------
// background flow and suspension state

struct BackgroundFlow {
  enum class Kind { none, shear, extensional, confined };
  Kind kind = Kind::none;
  double rate = 1.0;
  std::shared_ptr<const WallGeometry> wall;

  bool confined() const { return kind == Kind::confined; }

  static BackgroundFlow noneFlow() { return BackgroundFlow{}; }
  static BackgroundFlow shearFlow(double rate) {
    return BackgroundFlow{Kind::shear, rate, nullptr};
  }
  static BackgroundFlow extensionalFlow(double rate) {
    return BackgroundFlow{Kind::extensional, rate, nullptr};
  }
  static BackgroundFlow confinedFlow(std::shared_ptr<const WallGeometry> w) {
    if (!w) throw std::invalid_argument("confined flow requires a wall");
    return BackgroundFlow{Kind::confined, 0.0, std::move(w)};
  }

  void eval(double x, double y, double& ux, double& uy) const {
    switch (kind) {
      case Kind::shear:
        ux = rate * y;
        uy = 0.0;
        break;
      case Kind::extensional:
        ux = -rate * x;
        uy = rate * y;
        break;
      default:
        ux = 0.0;
        uy = 0.0;
    }
  }
};

struct SuspensionState {
  std::vector<VesicleCurve> vesicles;
  std::vector<ArrayXd> tensions;
  VectorXd wallDensity;  // stacked wall layout; empty when unbounded
  double time = 0.0;

  int vesicleCount() const { return static_cast<int>(vesicles.size()); }
};

inline SuspensionState makeState(std::vector<VesicleCurve> curves, double time = 0.0) {
  SuspensionState s;
  s.vesicles = std::move(curves);
  for (const auto& c : s.vesicles) s.tensions.push_back(ArrayXd::Zero(c.n()));
  s.time = time;
  return s;
}

}  // namespace vesbi
