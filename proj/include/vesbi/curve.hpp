#pragma once

// Fourier-resolved closed curves in the plane and their differential
// geometry. Points are tracker points at uniform parameter spacing 2*pi/N;
// all derivatives are spectral and the trapezoid rule (spectrally accurate
// for periodic integrands) evaluates contour integrals.

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vesbi/spectral.hpp"

namespace vesbi {

struct CurveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double signedAreaOf(const ArrayXd& x, const ArrayXd& y) {
  const int n = static_cast<int>(x.size());
  const double h = 2.0 * M_PI / n;
  const ArrayXd xp = spectralDerivative(x, 1);
  const ArrayXd yp = spectralDerivative(y, 1);
  return 0.5 * h * (x * yp - y * xp).sum();
}

// O(N^2) pairwise segment crossing test on the tracker-point polygon.
inline bool polygonIsSimple(const ArrayXd& x, const ArrayXd& y) {
  const int n = static_cast<int>(x.size());
  auto seg = [&](int i, double& ax, double& ay, double& bx, double& by) {
    ax = x[i]; ay = y[i];
    const int j = (i + 1) % n;
    bx = x[j]; by = y[j];
  };
  auto orient = [](double ax, double ay, double bx, double by, double cx, double cy) {
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  };
  for (int i = 0; i < n; ++i) {
    double ax, ay, bx, by;
    seg(i, ax, ay, bx, by);
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the seam
      double cx, cy, dx, dy;
      seg(j, cx, cy, dx, dy);
      const double o1 = orient(ax, ay, bx, by, cx, cy);
      const double o2 = orient(ax, ay, bx, by, dx, dy);
      const double o3 = orient(cx, cy, dx, dy, ax, ay);
      const double o4 = orient(cx, cy, dx, dy, bx, by);
      if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return false;
    }
  }
  return true;
}

struct VesicleCurve {
  ArrayXd x, y;

  VesicleCurve() = default;

  // Checked construction: N even and >= 8, counter-clockwise orientation,
  // simple polygon.
  VesicleCurve(ArrayXd xs, ArrayXd ys) : x(std::move(xs)), y(std::move(ys)) {
    if (x.size() != y.size()) throw CurveError("curve: x/y size mismatch");
    const int n = static_cast<int>(x.size());
    if (n < 8 || n % 2 != 0) throw CurveError("curve: N must be even and >= 8");
    if (signedAreaOf(x, y) <= 0.0)
      throw CurveError("curve: orientation must be counter-clockwise (signed area > 0)");
    if (!polygonIsSimple(x, y)) throw CurveError("curve: self-intersecting");
  }

  // Skips the orientation/simplicity checks; for solver-internal states
  // (extrapolants, trial iterates) that are validated on acceptance instead.
  static VesicleCurve unchecked(ArrayXd xs, ArrayXd ys) {
    VesicleCurve c;
    c.x = std::move(xs);
    c.y = std::move(ys);
    if (c.x.size() != c.y.size() || c.x.size() % 2 != 0 || c.x.size() < 8)
      throw CurveError("curve: invalid point count");
    return c;
  }

  static VesicleCurve ellipse(double a, double b, double cx, double cy, int n,
                              double phase = 0.0) {
    ArrayXd xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * M_PI * i / n;
      const double ex = a * std::cos(t);
      const double ey = b * std::sin(t);
      xs[i] = cx + ex * std::cos(phase) - ey * std::sin(phase);
      ys[i] = cy + ex * std::sin(phase) + ey * std::cos(phase);
    }
    return VesicleCurve(std::move(xs), std::move(ys));
  }

  static VesicleCurve circle(double r, double cx, double cy, int n) {
    return ellipse(r, r, cx, cy, n);
  }

  int n() const { return static_cast<int>(x.size()); }
  double parameterSpacing() const { return 2.0 * M_PI / n(); }
};

struct CurveGeometry {
  ArrayXd xPrime, yPrime;      // d/dparameter
  ArrayXd tangentX, tangentY;  // unit tangent
  ArrayXd normalX, normalY;    // right-of-travel unit normal (outward for CCW)
  ArrayXd jacobian;            // ds/dparameter
  ArrayXd curvature;
  double arclengthSpacing = 0.0;
  double area = 0.0;
  double length = 0.0;
};

inline CurveGeometry geometry(const VesicleCurve& curve) {
  CurveGeometry g;
  const int n = curve.n();
  const double h = curve.parameterSpacing();
  g.xPrime = spectralDerivative(curve.x, 1);
  g.yPrime = spectralDerivative(curve.y, 1);
  const ArrayXd xpp = spectralDerivative(curve.x, 2);
  const ArrayXd ypp = spectralDerivative(curve.y, 2);
  g.jacobian = (g.xPrime.square() + g.yPrime.square()).sqrt();
  if ((g.jacobian <= 0.0).any())
    throw CurveError("geometry: degenerate parameterization (jacobian <= 0)");
  g.tangentX = g.xPrime / g.jacobian;
  g.tangentY = g.yPrime / g.jacobian;
  g.normalX = g.tangentY;
  g.normalY = -g.tangentX;
  g.curvature = (g.xPrime * ypp - g.yPrime * xpp) / g.jacobian.cube();
  g.length = h * g.jacobian.sum();
  g.area = 0.5 * h * (curve.x * g.yPrime - curve.y * g.xPrime).sum();
  g.arclengthSpacing = g.length / n;
  return g;
}

inline VesicleCurve upsample(const VesicleCurve& curve, int factor) {
  if (factor < 1) throw CurveError("upsample: factor must be >= 1");
  if (factor == 1) return curve;
  return VesicleCurve::unchecked(upsampleSamples(curve.x, factor),
                                 upsampleSamples(curve.y, factor));
}

// Plain text table: header "N=<int>", then N lines "x y" at 17 significant
// digits.
inline void writeCurve(std::ostream& out, const VesicleCurve& curve) {
  out << "N=" << curve.n() << "\n";
  char buf[80];
  for (int i = 0; i < curve.n(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.16e %.16e\n", curve.x[i], curve.y[i]);
    out << buf;
  }
}

inline void writeCurveFile(const std::string& path, const VesicleCurve& curve) {
  std::ofstream out(path);
  if (!out) throw CurveError("writeCurveFile: cannot open " + path);
  writeCurve(out, curve);
}

inline VesicleCurve readCurve(std::istream& in, bool checked = true) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("N=", 0) != 0)
    throw CurveError("readCurve: missing N= header");
  const int n = std::stoi(header.substr(2));
  ArrayXd xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    if (!(in >> xs[i] >> ys[i])) throw CurveError("readCurve: truncated point table");
  }
  in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
  return checked ? VesicleCurve(std::move(xs), std::move(ys))
                 : VesicleCurve::unchecked(std::move(xs), std::move(ys));
}

inline VesicleCurve readCurveFile(const std::string& path, bool checked = true) {
  std::ifstream in(path);
  if (!in) throw CurveError("readCurveFile: cannot open " + path);
  return readCurve(in, checked);
}

// Winding number of a closed polyline around a point (1 inside CCW curve).
inline int windingNumber(const ArrayXd& x, const ArrayXd& y, double px, double py) {
  const int n = static_cast<int>(x.size());
  double angle = 0.0;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double ax = x[i] - px, ay = y[i] - py;
    const double bx = x[j] - px, by = y[j] - py;
    angle += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
  }
  return static_cast<int>(std::lround(angle / (2.0 * M_PI)));
}

}  // namespace vesbi
