#pragma once

// Spectral toolkit for smooth 2*pi-periodic samples on uniform grids:
// FFT derivatives, trigonometric interpolation, zero-padding upsampling.

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace vesbi {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Cplx = std::complex<double>;
using CVector = std::vector<Cplx>;

inline Eigen::FFT<double>& fftEngine() {
  static thread_local Eigen::FFT<double> engine;
  return engine;
}

// Unnormalized forward transform of real samples.
inline CVector spectrum(const ArrayXd& values) {
  const int n = static_cast<int>(values.size());
  CVector in(n), out(n);
  for (int i = 0; i < n; ++i) in[i] = Cplx(values[i], 0.0);
  fftEngine().fwd(out, in);
  return out;
}

// Inverse of spectrum(); imaginary parts are dropped.
inline ArrayXd fromSpectrum(const CVector& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  CVector out(n);
  CVector in = coeffs;
  fftEngine().inv(out, in);
  ArrayXd values(n);
  for (int i = 0; i < n; ++i) values[i] = out[i].real();
  return values;
}

// Signed mode number for bin k of an even-length transform.
inline int modeNumber(int k, int n) { return (k <= n / 2) ? k : k - n; }

// order-th derivative with respect to the uniform parameter. The Nyquist
// mode of odd-order derivatives is zeroed so results stay real.
inline void derivativeFilterInPlace(CVector& coeffs, int order) {
  const int n = static_cast<int>(coeffs.size());
  for (int k = 0; k < n; ++k) {
    const int m = modeNumber(k, n);
    if (m == n / 2 && order % 2 == 1) {
      coeffs[k] = 0.0;
    } else {
      Cplx factor = std::pow(Cplx(0.0, static_cast<double>(m)), order);
      coeffs[k] *= factor;
    }
  }
}

inline ArrayXd spectralDerivative(const ArrayXd& values, int order) {
  if (order < 1) throw std::invalid_argument("spectralDerivative: order must be >= 1");
  if (values.size() % 2 != 0) throw std::invalid_argument("spectralDerivative: N must be even");
  CVector coeffs = spectrum(values);
  derivativeFilterInPlace(coeffs, order);
  return fromSpectrum(coeffs);
}

// Trigonometric interpolation of real samples at an arbitrary parameter.
// The Nyquist mode is evaluated as cos(n*s/2).
inline double trigEval(const CVector& coeffs, double s) {
  const int n = static_cast<int>(coeffs.size());
  Cplx acc = coeffs[0];
  for (int k = 1; k < n / 2; ++k) {
    acc += coeffs[k] * std::exp(Cplx(0.0, k * s));
    acc += coeffs[n - k] * std::exp(Cplx(0.0, -static_cast<double>(k) * s));
  }
  acc += coeffs[n / 2] * std::cos(0.5 * n * s);
  return acc.real() / n;
}

// Zero-padding interpolation onto factor*N uniform points.
inline ArrayXd upsampleSamples(const ArrayXd& values, int factor) {
  if (factor < 1) throw std::invalid_argument("upsampleSamples: factor must be >= 1");
  if (factor == 1) return values;
  const int n = static_cast<int>(values.size());
  const int m = n * factor;
  CVector coeffs = spectrum(values);
  CVector padded(m, Cplx(0.0, 0.0));
  for (int k = 0; k < n; ++k) {
    const int mode = modeNumber(k, n);
    if (mode == n / 2) {
      // split the Nyquist cosine between +n/2 and -n/2 to keep samples real
      padded[n / 2] += 0.5 * coeffs[k];
      padded[m - n / 2] += 0.5 * coeffs[k];
    } else {
      padded[(mode + m) % m] = coeffs[k];
    }
  }
  ArrayXd out = fromSpectrum(padded);
  return out * static_cast<double>(factor);
}

// Circulant stencil w with f(s_m + delta) = sum_j w[j] f(s_{m+j mod N}),
// i.e. w[j] = D(delta - s_j) with D the periodic interpolation kernel.
inline ArrayXd shiftStencil(int n, double delta) {
  CVector phase(n), transformed(n);
  for (int k = 0; k < n; ++k) {
    const int m = modeNumber(k, n);
    if (m == n / 2) {
      phase[k] = Cplx(std::cos(0.5 * n * delta), 0.0);
    } else {
      phase[k] = std::exp(Cplx(0.0, m * delta));
    }
  }
  fftEngine().fwd(transformed, phase);
  ArrayXd w(n);
  for (int j = 0; j < n; ++j) w[j] = transformed[j].real() / n;
  return w;
}

// Samples of f(s + delta) from samples of f (exact for band-limited f).
inline ArrayXd shiftSamples(const ArrayXd& values, double delta) {
  const int n = static_cast<int>(values.size());
  CVector coeffs = spectrum(values);
  for (int k = 0; k < n; ++k) {
    const int m = modeNumber(k, n);
    if (m == n / 2) {
      coeffs[k] *= std::cos(0.5 * n * delta);
    } else {
      coeffs[k] *= std::exp(Cplx(0.0, m * delta));
    }
  }
  return fromSpectrum(coeffs);
}

// Dense matrix of the spectral d/ds operator on N uniform points (cached).
inline const MatrixXd& spectralDiffMatrix(int n) {
  static std::map<int, MatrixXd> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  MatrixXd d(n, n);
  ArrayXd basis = ArrayXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    basis[j] = 1.0;
    d.col(j) = spectralDerivative(basis, 1).matrix();
    basis[j] = 0.0;
  }
  return cache.emplace(n, std::move(d)).first->second;
}

}  // namespace vesbi
