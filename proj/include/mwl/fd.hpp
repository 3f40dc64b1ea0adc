#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "mwl/errors.hpp"
#include "mwl/jet.hpp"

namespace mwl {

/// Finite-difference configuration for third/fourth-order quantities that are
/// not reachable by the order-2 jets (Moebius form, Blaschke tensor, kappa).
struct FieldDerivativeSpec {
  double step = 1e-3;
  int richardson_levels = 2;  // 1, 2 or 3
  int scheme = 4;             // central difference order: 2 or 4

  void validate() const {
    if (!(step > 0.0)) throw Error("FieldDerivativeSpec: step must be > 0");
    if (richardson_levels < 1 || richardson_levels > 3)
      throw Error("FieldDerivativeSpec: richardson_levels must be 1, 2 or 3");
    if (scheme != 2 && scheme != 4)
      throw Error("FieldDerivativeSpec: scheme must be 2 or 4");
  }
};

using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;

namespace detail {

struct StencilTap {
  double offset;  // in units of h
  double weight;  // divided by h^order
};

/// Central first-derivative taps, error O(h^scheme).
inline std::vector<StencilTap> taps_first(int scheme) {
  if (scheme == 2) return {{1, 0.5}, {-1, -0.5}};
  return {{2, -1.0 / 12}, {1, 8.0 / 12}, {-1, -8.0 / 12}, {-2, 1.0 / 12}};
}

/// Central second-derivative taps (same axis), error O(h^scheme).
inline std::vector<StencilTap> taps_second(int scheme) {
  if (scheme == 2) return {{1, 1.0}, {0, -2.0}, {-1, 1.0}};
  return {{2, -1.0 / 12},
          {1, 16.0 / 12},
          {0, -30.0 / 12},
          {-1, 16.0 / 12},
          {-2, -1.0 / 12}};
}

/// Richardson tableau for step halving with an even error series starting at
/// h^base_order. Input: estimates d[j] at steps h/2^j.
inline Vec richardson(const std::vector<Vec>& d, int base_order) {
  std::vector<Vec> t = d;
  const int n = static_cast<int>(d.size());
  for (int k = 1; k < n; ++k) {
    const double f = std::pow(2.0, base_order + 2 * (k - 1));
    for (int j = n - 1; j >= k; --j) t[j] = (f * t[j] - t[j - 1]) / (f - 1.0);
  }
  return t[n - 1];
}

}  // namespace detail

/// d/du_axis of a vector field, all components at once.
inline Vec fd_partial(const VectorField& field, const Vec& point, int axis,
                      const FieldDerivativeSpec& spec) {
  spec.validate();
  const auto taps = detail::taps_first(spec.scheme);
  std::vector<Vec> levels;
  for (int lvl = 0; lvl < spec.richardson_levels; ++lvl) {
    const double h = spec.step / std::pow(2.0, lvl);
    Vec acc;
    for (const auto& t : taps) {
      Vec p = point;
      p[axis] += t.offset * h;
      Vec v = field(p) * (t.weight / h);
      acc = acc.size() ? Vec(acc + v) : v;
    }
    levels.push_back(acc);
  }
  return detail::richardson(levels, spec.scheme);
}

/// d^2/du_a du_b of a vector field. Same-axis uses the 1D second-derivative
/// stencil; mixed partials use the tensor product of first-derivative taps.
inline Vec fd_partial2(const VectorField& field, const Vec& point, int a,
                       int b, const FieldDerivativeSpec& spec) {
  spec.validate();
  std::vector<Vec> levels;
  for (int lvl = 0; lvl < spec.richardson_levels; ++lvl) {
    const double h = spec.step / std::pow(2.0, lvl);
    Vec acc;
    if (a == b) {
      for (const auto& t : detail::taps_second(spec.scheme)) {
        Vec p = point;
        p[a] += t.offset * h;
        Vec v = field(p) * (t.weight / (h * h));
        acc = acc.size() ? Vec(acc + v) : v;
      }
    } else {
      const auto taps = detail::taps_first(spec.scheme);
      for (const auto& ta : taps)
        for (const auto& tb : taps) {
          Vec p = point;
          p[a] += ta.offset * h;
          p[b] += tb.offset * h;
          Vec v = field(p) * (ta.weight * tb.weight / (h * h));
          acc = acc.size() ? Vec(acc + v) : v;
        }
    }
    levels.push_back(acc);
  }
  return detail::richardson(levels, spec.scheme);
}

inline ScalarField as_scalar(const VectorField&) = delete;

inline VectorField as_vector(const ScalarField& f) {
  return [f](const Vec& p) {
    Vec v(1);
    v[0] = f(p);
    return v;
  };
}

inline double fd_derivative(const ScalarField& f, const Vec& point, int axis,
                            const FieldDerivativeSpec& spec) {
  return fd_partial(as_vector(f), point, axis, spec)[0];
}

inline double fd_derivative2(const ScalarField& f, const Vec& point, int a,
                             int b, const FieldDerivativeSpec& spec) {
  return fd_partial2(as_vector(f), point, a, b, spec)[0];
}

/// Derivative described by a multi-index (per-axis orders, total order <= 2),
/// e.g. {0,1,1} is d^2/du2 du3 on a 3-dimensional chart.
inline double field_derivative(const ScalarField& f, const Vec& point,
                               const std::vector<int>& multi_index,
                               const FieldDerivativeSpec& spec) {
  if (static_cast<int>(multi_index.size()) != point.size())
    throw Error("field_derivative: multi-index length mismatch");
  int total = 0;
  std::vector<int> axes;
  for (int a = 0; a < static_cast<int>(multi_index.size()); ++a) {
    if (multi_index[a] < 0) throw Error("field_derivative: negative order");
    total += multi_index[a];
    for (int k = 0; k < multi_index[a]; ++k) axes.push_back(a);
  }
  if (total == 0) return f(point);
  if (total == 1) return fd_derivative(f, point, axes[0], spec);
  if (total == 2) return fd_derivative2(f, point, axes[0], axes[1], spec);
  throw Error("field_derivative: only orders 0..2 are supported");
}

/// First derivative along an arbitrary chart direction.
inline double fd_directional(const ScalarField& f, const Vec& point,
                             const Vec& direction,
                             const FieldDerivativeSpec& spec) {
  VectorField g = [&](const Vec& t) { return as_vector(f)(point + t[0] * direction); };
  Vec zero(1);
  zero[0] = 0.0;
  return fd_partial(g, zero, 0, spec)[0];
}

inline Vec fd_gradient(const ScalarField& f, const Vec& point,
                       const FieldDerivativeSpec& spec) {
  Vec g(point.size());
  for (int a = 0; a < point.size(); ++a) g[a] = fd_derivative(f, point, a, spec);
  return g;
}

inline Mat fd_hessian(const ScalarField& f, const Vec& point,
                      const FieldDerivativeSpec& spec) {
  const int m = static_cast<int>(point.size());
  Mat h(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      h(a, b) = fd_derivative2(f, point, a, b, spec);
      h(b, a) = h(a, b);
    }
  return h;
}

}  // namespace mwl
