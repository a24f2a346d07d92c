#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "vesbi/curve.hpp"
#include "vesbi/spectral.hpp"

#include "oracles.hpp"

using namespace vesbi;

namespace {
ArrayXd sampled(int n, const std::function<double(double)>& f) {
  ArrayXd v(n);
  for (int i = 0; i < n; ++i) v[i] = f(2.0 * M_PI * i / n);
  return v;
}
}  // namespace

TEST_CASE("spectral derivative of cos is -sin") {
  const int n = 64;
  const ArrayXd d = spectralDerivative(sampled(n, [](double s) { return std::cos(s); }), 1);
  const ArrayXd expect = sampled(n, [](double s) { return -std::sin(s); });
  REQUIRE((d - expect).abs().maxCoeff() < 1e-12);
}

TEST_CASE("spectral derivative of a constant vanishes") {
  const ArrayXd d = spectralDerivative(ArrayXd::Constant(32, 1.0), 1);
  REQUIRE(d.abs().maxCoeff() < 1e-13);
}

TEST_CASE("spectral second derivative self-converges under refinement") {
  auto f = [](double s) { return std::exp(std::sin(s)); };
  const ArrayXd coarse = spectralDerivative(sampled(64, f), 2);
  const ArrayXd fine = spectralDerivative(sampled(128, f), 2);
  double maxDiff = 0.0;
  for (int i = 0; i < 64; ++i) maxDiff = std::max(maxDiff, std::abs(coarse[i] - fine[2 * i]));
  REQUIRE(maxDiff < 1e-10);
}

TEST_CASE("spectral derivative rejects bad arguments") {
  REQUIRE_THROWS_AS(spectralDerivative(ArrayXd::Zero(32), 0), std::invalid_argument);
  REQUIRE_THROWS_AS(spectralDerivative(ArrayXd::Zero(31), 1), std::invalid_argument);
}

TEST_CASE("repeated first derivatives match the second derivative") {
  const ArrayXd v = sampled(96, [](double s) { return std::exp(std::sin(s)) + 0.3 * std::cos(3 * s); });
  const ArrayXd twice = spectralDerivative(spectralDerivative(v, 1), 1);
  const ArrayXd second = spectralDerivative(v, 2);
  REQUIRE((twice - second).abs().maxCoeff() / second.abs().maxCoeff() < 1e-11);
}

TEST_CASE("shift and stencil interpolation agree with analytic shifts") {
  const int n = 48;
  auto f = [](double s) { return std::exp(std::cos(s)) + std::sin(2 * s); };
  const ArrayXd v = sampled(n, f);
  const double delta = 0.1234;
  const ArrayXd shifted = shiftSamples(v, delta);
  const ArrayXd stencil = shiftStencil(n, delta);
  for (int i = 0; i < n; i += 7) {
    REQUIRE(shifted[i] == Catch::Approx(f(2.0 * M_PI * i / n + delta)).margin(1e-12));
    double acc = 0.0;
    for (int m = 0; m < n; ++m) acc += stencil[m] * v[(i + m) % n];
    REQUIRE(acc == Catch::Approx(f(2.0 * M_PI * i / n + delta)).margin(1e-12));
  }
}

TEST_CASE("circle geometry is exact to roundoff") {
  const VesicleCurve c = VesicleCurve::circle(1.0, 0.0, 0.0, 32);
  const CurveGeometry g = geometry(c);
  REQUIRE(g.area == Catch::Approx(M_PI).margin(1e-12));
  REQUIRE(g.length == Catch::Approx(2.0 * M_PI).margin(1e-12));
  REQUIRE((g.curvature - 1.0).abs().maxCoeff() < 1e-12);
  // outward normal
  REQUIRE(g.normalX[0] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("ellipse geometry matches pi*a*b and the arclength integral") {
  const VesicleCurve c = VesicleCurve::ellipse(3.0, 1.0, 0.0, 0.0, 96);
  const CurveGeometry g = geometry(c);
  REQUIRE(g.area == Catch::Approx(3.0 * M_PI).margin(1e-11));
  const double lengthRef = oracle::integrate(
      [](double s) { return std::hypot(-3.0 * std::sin(s), std::cos(s)); }, 0.0, 2.0 * M_PI);
  REQUIRE(lengthRef == Catch::Approx(13.36489322).margin(1e-7));
  REQUIRE(g.length == Catch::Approx(lengthRef).margin(1e-11));
}

TEST_CASE("smooth polar shape matches oversampled trapezoid") {
  auto make = [](int n) {
    ArrayXd xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * M_PI * i / n;
      const double r = 1.0 + 0.1 * std::cos(4.0 * t);
      xs[i] = r * std::cos(t);
      ys[i] = r * std::sin(t);
    }
    return VesicleCurve(std::move(xs), std::move(ys));
  };
  const CurveGeometry g = geometry(make(96));
  const CurveGeometry gFine = geometry(make(960));
  REQUIRE(std::abs(g.area - gFine.area) / gFine.area < 1e-10);
  REQUIRE(std::abs(g.length - gFine.length) / gFine.length < 1e-10);
}

TEST_CASE("geometry rejects degenerate parameterizations") {
  // all points identical -> zero jacobian
  ArrayXd xs = ArrayXd::Zero(16), ys = ArrayXd::Zero(16);
  const VesicleCurve c = VesicleCurve::unchecked(xs, ys);
  REQUIRE_THROWS_AS(geometry(c), CurveError);
}

TEST_CASE("upsampling a band-limited curve is exact") {
  const VesicleCurve c = VesicleCurve::circle(1.0, 0.5, -0.25, 16);
  const VesicleCurve fine = upsample(c, 2);
  const VesicleCurve direct = VesicleCurve::circle(1.0, 0.5, -0.25, 32);
  REQUIRE((fine.x - direct.x).abs().maxCoeff() < 1e-13);
  REQUIRE((fine.y - direct.y).abs().maxCoeff() < 1e-13);
}

TEST_CASE("upsample factor 1 is the identity") {
  const VesicleCurve c = VesicleCurve::ellipse(2.0, 1.0, 0.0, 0.0, 24);
  const VesicleCurve same = upsample(c, 1);
  REQUIRE((same.x - c.x).abs().maxCoeff() == 0.0);
}

TEST_CASE("upsampled ellipse length matches direct construction") {
  const VesicleCurve coarse = VesicleCurve::ellipse(3.0, 1.0, 0.0, 0.0, 48);
  const VesicleCurve up = upsample(coarse, 4);
  const VesicleCurve direct = VesicleCurve::ellipse(3.0, 1.0, 0.0, 0.0, 192);
  REQUIRE(geometry(up).length == Catch::Approx(geometry(direct).length).margin(1e-11));
}

TEST_CASE("upsampling preserves area to roundoff") {
  const VesicleCurve c = VesicleCurve::ellipse(3.0, 1.0, 0.2, 0.1, 48);
  const double a0 = geometry(c).area;
  for (int k : {1, 2, 4}) {
    const double ak = geometry(upsample(c, k)).area;
    REQUIRE(std::abs(ak - a0) / a0 < 1e-12);
  }
}

TEST_CASE("closed-curve tangent integrates to zero") {
  const VesicleCurve c = VesicleCurve::ellipse(2.5, 1.5, 1.0, -2.0, 64);
  const CurveGeometry g = geometry(c);
  const double h = c.parameterSpacing();
  REQUIRE(std::abs((g.tangentX * g.jacobian).sum() * h) < 1e-11);
  REQUIRE(std::abs((g.tangentY * g.jacobian).sum() * h) < 1e-11);
}

TEST_CASE("construction rejects reversed orientation and self-intersection") {
  const VesicleCurve c = VesicleCurve::circle(1.0, 0.0, 0.0, 32);
  ArrayXd rx = c.x.reverse(), ry = c.y.reverse();
  REQUIRE(signedAreaOf(rx, ry) < 0.0);
  REQUIRE_THROWS_AS(VesicleCurve(rx, ry), CurveError);

  // figure-eight-ish curve
  ArrayXd xs(32), ys(32);
  for (int i = 0; i < 32; ++i) {
    const double t = 2.0 * M_PI * i / 32;
    xs[i] = std::sin(2 * t);
    ys[i] = std::sin(t);
  }
  REQUIRE_THROWS_AS(VesicleCurve(xs, ys), CurveError);
}

TEST_CASE("curve serialization round trip") {
  const VesicleCurve c = VesicleCurve::ellipse(1.7, 0.6, 0.3, -0.9, 24);
  std::stringstream ss;
  writeCurve(ss, c);
  const VesicleCurve back = readCurve(ss);
  REQUIRE((back.x - c.x).abs().maxCoeff() < 1e-15);
  REQUIRE((back.y - c.y).abs().maxCoeff() < 1e-15);
}

TEST_CASE("winding number distinguishes inside from outside") {
  const VesicleCurve c = VesicleCurve::circle(2.0, 0.0, 0.0, 64);
  REQUIRE(windingNumber(c.x, c.y, 0.3, 0.4) == 1);
  REQUIRE(windingNumber(c.x, c.y, 5.0, 0.0) == 0);
}
