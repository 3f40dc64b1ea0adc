#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "mwl/errors.hpp"
#include "mwl/jet.hpp"
#include "mwl/linalg.hpp"

namespace mwl {

// Light-cone model of Moebius geometry: points x in R^n lift to null vectors
// Y = ((1+|x|^2)/2, (1-|x|^2)/2, x) in the Lorentz space R^{n+2}_1 and
// conformal transformations act as Lorentz matrices.

/// <Y,Z> = -Y0 Z0 + Y1 Z1 + ... (signature -,+,...,+).
inline double lorentz_dot(const Vec& a, const Vec& b) {
  return -a[0] * b[0] + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

inline Mat lorentz_eta(int size) {
  Mat eta = Mat::Identity(size, size);
  eta(0, 0) = -1.0;
  return eta;
}

inline Vec light_cone_lift(const Vec& x) {
  Vec y(x.size() + 2);
  const double n2 = x.squaredNorm();
  y[0] = 0.5 * (1.0 + n2);
  y[1] = 0.5 * (1.0 - n2);
  y.tail(x.size()) = x;
  return y;
}

/// x = w / (Y0 + Y1) for a cone vector Y = (Y0, Y1, w).
inline Vec dehomogenize(const Vec& y) {
  const double denom = y[0] + y[1];
  if (std::abs(denom) <= 1e-9)
    throw InfinityError("point sent to infinity (|Y0+Y1| <= 1e-9)");
  return Vec(y.tail(y.size() - 2) / denom);
}

/// A Lorentz-group element acting on the light cone of R^{n+2}_1.
struct LorentzMatrix {
  Mat T;  // (n+2) x (n+2)

  int ambient_dim() const { return static_cast<int>(T.rows()) - 2; }

  double lorentz_defect() const {
    const Mat eta = lorentz_eta(static_cast<int>(T.rows()));
    return (T.transpose() * eta * T - eta).cwiseAbs().maxCoeff();
  }

  /// Future light-like vectors keep a positive time component.
  bool preserves_future() const {
    Vec probe = light_cone_lift(Vec::Zero(ambient_dim()));
    return (T * probe)[0] > 0.0;
  }

  LorentzMatrix operator*(const LorentzMatrix& other) const {
    return LorentzMatrix{T * other.T};
  }

  static LorentzMatrix identity(int n) {
    return LorentzMatrix{Mat::Identity(n + 2, n + 2)};
  }
};

namespace lorentz_detail {

// Null coordinates (nu, ubar, w) with nu = Y0+Y1, ubar = Y0-Y1 diagonalize
// the generators; conjugate back to the (Y0, Y1, x) basis.
inline Mat null_to_std(int n) {
  Mat c = Mat::Identity(n + 2, n + 2);
  c(0, 0) = 0.5;
  c(0, 1) = 0.5;
  c(1, 0) = 0.5;
  c(1, 1) = -0.5;
  return c;
}

inline Mat std_to_null(int n) {
  Mat c = Mat::Identity(n + 2, n + 2);
  c(0, 0) = 1.0;
  c(0, 1) = 1.0;
  c(1, 0) = 1.0;
  c(1, 1) = -1.0;
  return c;
}

inline LorentzMatrix from_null(int n, const Mat& t_null) {
  return LorentzMatrix{null_to_std(n) * t_null * std_to_null(n)};
}

}  // namespace lorentz_detail

/// Ambient rotation x -> R x.
inline LorentzMatrix lorentz_rotation(const Mat& r) {
  const int n = static_cast<int>(r.rows());
  Mat t = Mat::Identity(n + 2, n + 2);
  t.block(2, 2, n, n) = r;
  return LorentzMatrix{t};
}

/// Translation x -> x + b.
inline LorentzMatrix lorentz_translation(const Vec& b) {
  const int n = static_cast<int>(b.size());
  Mat t = Mat::Identity(n + 2, n + 2);
  // nu' = nu; ubar' = ubar + 2 b.w + |b|^2 nu; w' = w + nu b.
  t(1, 0) = b.squaredNorm();
  t.block(1, 2, 1, n) = 2.0 * b.transpose();
  t.block(2, 0, n, 1) = b;
  return lorentz_detail::from_null(n, t);
}

/// Dilation x -> lambda x, lambda > 0.
inline LorentzMatrix lorentz_dilation(int n, double lambda) {
  if (!(lambda > 0.0)) throw Error("dilation factor must be positive");
  Mat t = Mat::Identity(n + 2, n + 2);
  t(0, 0) = 1.0 / lambda;
  t(1, 1) = lambda;
  return lorentz_detail::from_null(n, t);
}

/// Sphere inversion x -> x/|x|^2: swaps the two null coordinates.
inline LorentzMatrix lorentz_inversion(int n) {
  Mat t = Mat::Identity(n + 2, n + 2);
  t(0, 0) = 0.0;
  t(1, 1) = 0.0;
  t(0, 1) = 1.0;
  t(1, 0) = 1.0;
  return lorentz_detail::from_null(n, t);
}

inline Vec apply_moebius(const LorentzMatrix& t, const Vec& x) {
  return dehomogenize(t.T * light_cone_lift(x));
}

/// Seeded random conformal transformation: rotation, translations, a
/// dilation and at most one inversion, composed as Lorentz matrices.
inline LorentzMatrix random_moebius(int n, uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  LorentzMatrix t = lorentz_rotation(random_rotation(n, rng));
  Vec b1 = random_unit_vector(n, rng) * (0.7 * unif(rng));
  t = lorentz_translation(b1) * t;
  t = lorentz_dilation(n, std::exp(0.6 * (2.0 * unif(rng) - 1.0))) * t;
  if (unif(rng) < 0.5) {
    // Shift before inverting so the unit-scale sample regions rarely cross
    // the inversion center.
    Vec shift = random_unit_vector(n, rng) * (1.5 + unif(rng));
    t = lorentz_translation(shift) * lorentz_inversion(n) *
        lorentz_translation(shift) * t;
  }
  Vec b2 = random_unit_vector(n, rng) * (0.7 * unif(rng));
  t = lorentz_translation(b2) * t;
  return t;
}

}  // namespace mwl
