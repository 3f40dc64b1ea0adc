#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "mwl/errors.hpp"
#include "mwl/jet.hpp"

namespace mwl {

/// Axis-aligned chart box; infinite extents allowed.
struct Box {
  Vec lo, hi;

  static Box all(int dim) {
    const double inf = std::numeric_limits<double>::infinity();
    Box b;
    b.lo = Vec::Constant(dim, -inf);
    b.hi = Vec::Constant(dim, inf);
    return b;
  }

  static Box of(std::initializer_list<std::pair<double, double>> ranges) {
    Box b;
    b.lo = Vec(static_cast<int>(ranges.size()));
    b.hi = Vec(static_cast<int>(ranges.size()));
    int i = 0;
    for (const auto& [a, c] : ranges) {
      b.lo[i] = a;
      b.hi[i] = c;
      ++i;
    }
    return b;
  }

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Vec& p) const {
    for (int i = 0; i < p.size(); ++i)
      if (!(p[i] >= lo[i] && p[i] <= hi[i])) return false;
    return true;
  }

  std::string describe(const Vec& p) const {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
  }
};

enum class AmbientKind { Euclidean, UnitSphere };

/// Euclidean: R^dim. UnitSphere: S^dim embedded in R^{dim+1}.
struct Ambient {
  AmbientKind kind = AmbientKind::Euclidean;
  int dim = 0;

  static Ambient euclidean(int n) { return {AmbientKind::Euclidean, n}; }
  static Ambient unit_sphere(int n) { return {AmbientKind::UnitSphere, n}; }

  /// Number of ambient coordinates the evaluator produces.
  int coords() const { return kind == AmbientKind::UnitSphere ? dim + 1 : dim; }

  double curvature() const { return kind == AmbientKind::UnitSphere ? 1.0 : 0.0; }
};

/// A parametrized immersion: chart point -> jets of every ambient component.
/// Immutable after construction; evaluation is pure.
struct Immersion {
  int chart_dim = 0;
  Ambient ambient;
  Box domain;         // evaluability region (checked on every call)
  Box sample_region;  // finite default box for scans and probes
  std::function<JetVec(const Vec&)> eval;
  std::string name;

  JetVec jets(const Vec& u) const {
    if (u.size() != chart_dim)
      throw DomainError("chart point has dimension " + std::to_string(u.size()) +
                        ", expected " + std::to_string(chart_dim));
    if (!domain.contains(u))
      throw DomainError("point outside chart domain: " + domain.describe(u));
    return eval(u);
  }

  Vec value(const Vec& u) const {
    JetVec j = jets(u);
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].value;
    return v;
  }

  /// d f / d u as a coords x chart_dim matrix.
  Mat jacobian(const Vec& u) const {
    JetVec j = jets(u);
    Mat d(static_cast<int>(j.size()), chart_dim);
    for (size_t i = 0; i < j.size(); ++i)
      d.row(static_cast<int>(i)) = j[i].grad.transpose();
    return d;
  }
};

}  // namespace mwl
