#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "mwl/errors.hpp"

namespace mwl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Value, gradient and Hessian of one scalar quantity depending on m chart
/// coordinates. Arithmetic propagates all three exactly (truncated Taylor
/// series of order 2), so second fundamental forms built from jets carry no
/// discretization error.
struct Jet {
  double value = 0.0;
  Vec grad;  // length m
  Mat hess;  // m x m, kept symmetric by construction

  Jet() = default;
  explicit Jet(int dim)
      : value(0.0), grad(Vec::Zero(dim)), hess(Mat::Zero(dim, dim)) {}

  int dim() const { return static_cast<int>(grad.size()); }

  static Jet constant(double c, int dim) {
    Jet j(dim);
    j.value = c;
    return j;
  }

  /// The k-th chart coordinate (0-based) as a jet at the given value.
  static Jet variable(double x, int index, int dim) {
    Jet j(dim);
    j.value = x;
    j.grad[index] = 1.0;
    return j;
  }

  Jet operator-() const {
    Jet r(*this);
    r.value = -r.value;
    r.grad = -r.grad;
    r.hess = -r.hess;
    return r;
  }
};

using JetVec = std::vector<Jet>;

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a);
  r.value += b.value;
  r.grad += b.grad;
  r.hess += b.hess;
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  Jet r(a);
  r.value -= b.value;
  r.grad -= b.grad;
  r.hess -= b.hess;
  return r;
}

inline Jet operator+(const Jet& a, double c) {
  Jet r(a);
  r.value += c;
  return r;
}
inline Jet operator+(double c, const Jet& a) { return a + c; }
inline Jet operator-(const Jet& a, double c) { return a + (-c); }
inline Jet operator-(double c, const Jet& a) { return (-a) + c; }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.dim());
  r.value = a.value * b.value;
  r.grad = a.grad * b.value + b.grad * a.value;
  r.hess = a.hess * b.value + b.hess * a.value + a.grad * b.grad.transpose() +
           b.grad * a.grad.transpose();
  return r;
}

inline Jet operator*(const Jet& a, double c) {
  Jet r(a);
  r.value *= c;
  r.grad *= c;
  r.hess *= c;
  return r;
}
inline Jet operator*(double c, const Jet& a) { return a * c; }

/// Chain rule for w = F(u): needs F, F' and F'' at u.value.
inline Jet unary_chain(const Jet& u, double f, double fp, double fpp) {
  Jet r(u.dim());
  r.value = f;
  r.grad = fp * u.grad;
  r.hess = fp * u.hess + fpp * (u.grad * u.grad.transpose());
  return r;
}

inline Jet reciprocal(const Jet& u) {
  if (u.value == 0.0) throw EvalError("division by zero");
  const double inv = 1.0 / u.value;
  return unary_chain(u, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(const Jet& a, double c) {
  if (c == 0.0) throw EvalError("division by zero");
  return a * (1.0 / c);
}
inline Jet operator/(double c, const Jet& b) { return reciprocal(b) * c; }

inline Jet sin(const Jet& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return unary_chain(u, s, c, -s);
}

inline Jet cos(const Jet& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return unary_chain(u, c, -s, -c);
}

inline Jet tan(const Jet& u) { return sin(u) / cos(u); }

inline Jet exp(const Jet& u) {
  const double e = std::exp(u.value);
  return unary_chain(u, e, e, e);
}

inline Jet log(const Jet& u) {
  if (!(u.value > 0.0))
    throw EvalError("log of non-positive value (arg=" +
                    std::to_string(u.value) + ")");
  const double inv = 1.0 / u.value;
  return unary_chain(u, std::log(u.value), inv, -inv * inv);
}

inline Jet sqrt(const Jet& u) {
  if (!(u.value > 0.0))
    throw EvalError("sqrt of non-positive value (arg=" +
                    std::to_string(u.value) + ")");
  const double s = std::sqrt(u.value);
  return unary_chain(u, s, 0.5 / s, -0.25 / (s * u.value));
}

inline Jet atan(const Jet& u) {
  const double d = 1.0 + u.value * u.value;
  return unary_chain(u, std::atan(u.value), 1.0 / d,
                     -2.0 * u.value / (d * d));
}

/// Integer power by repeated multiplication; valid for any base sign.
inline Jet pow(const Jet& u, long long n) {
  if (n == 0) return Jet::constant(1.0, u.dim());
  if (n < 0) return reciprocal(pow(u, -n));
  Jet acc = u;
  for (long long i = 1; i < n; ++i) acc = acc * u;
  return acc;
}

/// Real power, base must be positive.
inline Jet pow(const Jet& u, double p) {
  if (p == std::floor(p) && std::abs(p) < 64.0)
    return pow(u, static_cast<long long>(p));
  if (!(u.value > 0.0))
    throw EvalError("pow with non-positive base and non-integer exponent");
  const double f = std::pow(u.value, p);
  return unary_chain(u, f, p * f / u.value,
                     p * (p - 1.0) * f / (u.value * u.value));
}

/// General power a^b. Falls back to exp(b*log a) when the exponent varies.
inline Jet pow(const Jet& a, const Jet& b) {
  const bool const_exp = b.grad.isZero(0.0) && b.hess.isZero(0.0);
  if (const_exp) return pow(a, b.value);
  return exp(b * log(a));
}

/// Lifts the chart coordinates of `point` to variable jets.
inline JetVec jet_variables(const Vec& point) {
  JetVec vars;
  vars.reserve(point.size());
  for (int i = 0; i < point.size(); ++i)
    vars.push_back(Jet::variable(point[i], i, static_cast<int>(point.size())));
  return vars;
}

inline double max_hessian_asymmetry(const Jet& j) {
  return (j.hess - j.hess.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace mwl
