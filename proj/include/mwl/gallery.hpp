#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mwl/errors.hpp"
#include "mwl/expr.hpp"
#include "mwl/immersion.hpp"
#include "mwl/jet.hpp"
#include "mwl/lorentz.hpp"

namespace mwl {

// ---------------------------------------------------------------------------
// Clifford-type flat tori in odd spheres
// ---------------------------------------------------------------------------

/// Radii/angles of a Clifford-type torus R^2 -> S^{2m-1}:
///   f^{2k-1} = r_k cos(x cos t_k + y sin t_k),
///   f^{2k}   = r_k sin(x cos t_k + y sin t_k).
struct CliffordParams {
  Vec r;      // radii, sum of squares normalized to 1
  Vec theta;  // pairwise distinct modulo pi

  static CliffordParams make(Vec r, Vec theta) {
    if (r.size() != theta.size() || r.size() < 2)
      throw Error("clifford: need matching r/theta lists of length >= 2");
    for (int i = 0; i < r.size(); ++i)
      if (!(r[i] > 0.0)) throw Error("clifford: radii must be positive");
    const double s = r.squaredNorm();
    if (std::abs(s - 1.0) > 1e-6)
      throw Error("clifford: radii must satisfy sum r_k^2 = 1 (got " +
                  std::to_string(s) + ")");
    r /= std::sqrt(s);  // absorb round-off below the 1e-6 gate
    for (int i = 0; i < theta.size(); ++i)
      for (int j = i + 1; j < theta.size(); ++j) {
        double d = std::remainder(theta[i] - theta[j], M_PI);
        if (std::abs(d) < 1e-9)
          throw Error("clifford: angles must be pairwise distinct modulo pi");
      }
    return CliffordParams{std::move(r), std::move(theta)};
  }
};

struct CliffordDefects {
  double unit_sum;        // |sum r_k^2 - 1|
  double minimal_defect;  // |sum e^{2 i t_k} r_k^2|   (0 <=> minimal)
  double wintgen_defect;  // |sum e^{4 i t_k} r_k^2|   (0 <=> Wintgen ideal, given minimal)
};

inline CliffordDefects clifford_conditions(const Vec& r, const Vec& theta) {
  std::complex<double> s2{0, 0}, s4{0, 0};
  double s0 = 0.0;
  for (int k = 0; k < r.size(); ++k) {
    const double rk2 = r[k] * r[k];
    s0 += rk2;
    s2 += std::polar(rk2, 2.0 * theta[k]);
    s4 += std::polar(rk2, 4.0 * theta[k]);
  }
  return {std::abs(s0 - 1.0), std::abs(s2), std::abs(s4)};
}

inline CliffordDefects clifford_conditions(const CliffordParams& p) {
  return clifford_conditions(p.r, p.theta);
}

inline Immersion clifford(const CliffordParams& p) {
  const int m = static_cast<int>(p.r.size());
  Immersion im;
  im.chart_dim = 2;
  im.ambient = Ambient::unit_sphere(2 * m - 1);
  im.domain = Box::all(2);
  im.sample_region = Box::of({{-M_PI, M_PI}, {-M_PI, M_PI}});
  im.name = "clifford";
  Vec r = p.r, theta = p.theta;
  im.eval = [m, r, theta](const Vec& u) {
    JetVec vars = jet_variables(u);
    JetVec f;
    f.reserve(2 * m);
    for (int k = 0; k < m; ++k) {
      Jet phase = vars[0] * std::cos(theta[k]) + vars[1] * std::sin(theta[k]);
      f.push_back(r[k] * cos(phase));
      f.push_back(r[k] * sin(phase));
    }
    return f;
  };
  return im;
}

// ---------------------------------------------------------------------------
// Veronese spheres S^2 -> S^{2k}
// ---------------------------------------------------------------------------

namespace gallery_detail {

/// Homogeneous trivariate polynomial, sparse monomial form.
struct Poly3 {
  struct Term {
    int i, j, k;
    double c;
  };
  std::vector<Term> terms;

  double eval(double x, double y, double z) const {
    double s = 0.0;
    for (const auto& t : terms)
      s += t.c * std::pow(x, t.i) * std::pow(y, t.j) * std::pow(z, t.k);
    return s;
  }

  Jet eval(const Jet& x, const Jet& y, const Jet& z) const {
    Jet s(x.dim());
    for (const auto& t : terms)
      s = s + t.c * pow(x, (long long)t.i) * pow(y, (long long)t.j) *
                  pow(z, (long long)t.k);
    return s;
  }
};

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = -p0 / dp;
      t += dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    double p0 = 1.0, p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

/// Degree-3 harmonic polynomials (standard real basis, unnormalized),
/// orthonormalized by Gram-Schmidt under the quadrature inner product
/// (1/4pi) int_{S^2} P Q dS, then scaled by 1/sqrt(7) so that the addition
/// theorem puts the image on the unit sphere.
inline std::vector<Poly3> degree3_orthonormal_basis(int n_gauss = 64,
                                                    int n_phi = 128) {
  using T = Poly3::Term;
  std::vector<Poly3> h = {
      {{T{0, 0, 3, 2}, T{2, 0, 1, -3}, T{0, 2, 1, -3}}},   // z(2z^2-3x^2-3y^2)
      {{T{1, 0, 2, 4}, T{3, 0, 0, -1}, T{1, 2, 0, -1}}},   // x(4z^2-x^2-y^2)
      {{T{0, 1, 2, 4}, T{2, 1, 0, -1}, T{0, 3, 0, -1}}},   // y(4z^2-x^2-y^2)
      {{T{2, 0, 1, 1}, T{0, 2, 1, -1}}},                   // z(x^2-y^2)
      {{T{1, 1, 1, 1}}},                                   // xyz
      {{T{3, 0, 0, 1}, T{1, 2, 0, -3}}},                   // x(x^2-3y^2)
      {{T{2, 1, 0, 3}, T{0, 3, 0, -1}}},                   // y(3x^2-y^2)
  };

  std::vector<double> gx, gw;
  gauss_legendre(n_gauss, gx, gw);
  std::vector<Vec> samples;  // values of all 7 polys at each node
  std::vector<double> weights;
  for (int a = 0; a < n_gauss; ++a) {
    const double t = gx[a];           // cos(theta)
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (int b = 0; b < n_phi; ++b) {
      const double phi = 2.0 * M_PI * b / n_phi;
      const double x = s * std::cos(phi), y = s * std::sin(phi), z = t;
      Vec v(7);
      for (int q = 0; q < 7; ++q) v[q] = h[q].eval(x, y, z);
      samples.push_back(v);
      weights.push_back(gw[a] * (2.0 * M_PI / n_phi) / (4.0 * M_PI));
    }
  }
  auto dot = [&](const Vec& ca, const Vec& cb) {
    double acc = 0.0;
    for (size_t s2 = 0; s2 < samples.size(); ++s2)
      acc += weights[s2] * samples[s2].dot(ca) * samples[s2].dot(cb);
    return acc;
  };

  // Modified Gram-Schmidt on coefficient vectors in the h-basis.
  std::vector<Vec> coef(7, Vec::Zero(7));
  for (int q = 0; q < 7; ++q) coef[q][q] = 1.0;
  for (int q = 0; q < 7; ++q) {
    for (int r = 0; r < q; ++r) coef[q] -= dot(coef[q], coef[r]) * coef[r];
    const double nrm = std::sqrt(dot(coef[q], coef[q]));
    if (nrm < 1e-12) throw Error("degree-3 harmonic basis degenerated");
    coef[q] /= nrm;
  }

  const double scale = 1.0 / std::sqrt(7.0);
  std::vector<Poly3> out(7);
  for (int q = 0; q < 7; ++q)
    for (int src = 0; src < 7; ++src)
      if (coef[q][src] != 0.0)
        for (const auto& t : h[src].terms)
          out[q].terms.push_back({t.i, t.j, t.k, t.c * coef[q][src] * scale});
  return out;
}

inline void spherical_chart(const Vec& u, Jet& x, Jet& y, Jet& z) {
  JetVec vars = jet_variables(u);
  x = sin(vars[0]) * cos(vars[1]);
  y = sin(vars[0]) * sin(vars[1]);
  z = cos(vars[0]);
}

}  // namespace gallery_detail

/// Veronese minimal 2-spheres. degree 2: the classical quadratic map
/// S^2 -> S^4; degree 3: orthonormalized cubic harmonics into S^6.
inline Immersion veronese_sphere(int degree) {
  if (degree != 2 && degree != 3)
    throw Error("veronese_sphere: supported degrees are 2 and 3");
  Immersion im;
  im.chart_dim = 2;
  im.ambient = Ambient::unit_sphere(2 * degree);
  im.domain = Box::of({{0.02, M_PI - 0.02}, {-8.0, 8.0}});
  im.sample_region = Box::of({{0.35, M_PI - 0.35}, {0.1, 6.18}});
  im.name = degree == 2 ? "veronese_s4" : "veronese_s6";
  if (degree == 2) {
    im.eval = [](const Vec& u) {
      Jet x, y, z;
      gallery_detail::spherical_chart(u, x, y, z);
      const double s3 = std::sqrt(3.0);
      JetVec f;
      f.push_back(s3 * x * y);
      f.push_back(s3 * x * z);
      f.push_back(s3 * y * z);
      f.push_back(0.5 * s3 * (x * x - y * y));
      f.push_back(0.5 * (x * x + y * y - 2.0 * (z * z)));
      return f;
    };
  } else {
    auto basis = std::make_shared<std::vector<gallery_detail::Poly3>>(
        gallery_detail::degree3_orthonormal_basis());
    im.eval = [basis](const Vec& u) {
      Jet x, y, z;
      gallery_detail::spherical_chart(u, x, y, z);
      JetVec f;
      f.reserve(basis->size());
      for (const auto& p : *basis) f.push_back(p.eval(x, y, z));
      return f;
    };
  }
  return im;
}

// ---------------------------------------------------------------------------
// Hopf lift of the Veronese embedding CP^1 -> CP^n
// ---------------------------------------------------------------------------

namespace gallery_detail {

struct CJet {
  Jet re, im;
};

inline CJet cmul(const CJet& a, const CJet& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

}  // namespace gallery_detail

/// psi(s, x, y) = e^{is} V_n(x + iy) expanded to real components, where
/// V_n(zeta)_k = sqrt(C(n,k)) zeta^k / (1+|zeta|^2)^{n/2}. The image is the
/// Hopf-fiber preimage of the Veronese sphere in CP^n, inside S^{2n+1}.
inline Immersion hopf_veronese(int n) {
  if (n < 2) throw Error("hopf_veronese: need n >= 2");
  Immersion im;
  im.chart_dim = 3;
  im.ambient = Ambient::unit_sphere(2 * n + 1);
  im.domain = Box::all(3);
  im.sample_region = Box::of({{-3.0, 3.0}, {-1.2, 1.2}, {-1.2, 1.2}});
  im.name = "hopf_veronese";
  im.eval = [n](const Vec& u) {
    using gallery_detail::CJet;
    JetVec vars = jet_variables(u);
    CJet phase{cos(vars[0]), sin(vars[0])};
    CJet zeta{vars[1], vars[2]};
    Jet denom = pow(1.0 + vars[1] * vars[1] + vars[2] * vars[2], 0.5 * n);
    JetVec f;
    f.reserve(2 * (n + 1));
    CJet zk{Jet::constant(1.0, 3), Jet::constant(0.0, 3)};
    for (int k = 0; k <= n; ++k) {
      const double c = std::sqrt(gallery_detail::binomial(n, k));
      CJet term = gallery_detail::cmul(phase, zk);
      f.push_back(c * term.re / denom);
      f.push_back(c * term.im / denom);
      if (k < n) zk = gallery_detail::cmul(zk, zeta);
    }
    return f;
  };
  return im;
}

// ---------------------------------------------------------------------------
// Cones, coordinate planes, round spheres
// ---------------------------------------------------------------------------

namespace gallery_detail {

/// Re-indexes a jet from an r-dimensional chart into an m-dimensional one,
/// with its variables occupying indices [offset, offset+r).
inline Jet pad_jet(const Jet& j, int offset, int m) {
  Jet out(m);
  out.value = j.value;
  const int r = j.dim();
  out.grad.segment(offset, r) = j.grad;
  out.hess.block(offset, offset, r, r) = j.hess;
  return out;
}

}  // namespace gallery_detail

/// Cone f(t, y, u) = (y, t u(u_chart)) over a sphere-valued base.
/// Chart order: t, then extra flat coordinates, then the base chart.
inline Immersion cone_over(const Immersion& base, int extra_flat_dims = 0) {
  if (base.ambient.kind != AmbientKind::UnitSphere)
    throw Error("cone_over: base must map into a unit sphere");
  if (extra_flat_dims < 0) throw Error("cone_over: extra_flat_dims must be >= 0");
  const int r = base.chart_dim;
  const int m = 1 + extra_flat_dims + r;
  const int base_coords = base.ambient.coords();

  Immersion im;
  im.chart_dim = m;
  im.ambient = Ambient::euclidean(extra_flat_dims + base_coords);
  im.domain.lo = Vec(m);
  im.domain.hi = Vec(m);
  im.domain.lo[0] = 1e-9;  // t > 0
  im.domain.hi[0] = std::numeric_limits<double>::infinity();
  for (int i = 0; i < extra_flat_dims; ++i) {
    im.domain.lo[1 + i] = -std::numeric_limits<double>::infinity();
    im.domain.hi[1 + i] = std::numeric_limits<double>::infinity();
  }
  im.domain.lo.tail(r) = base.domain.lo;
  im.domain.hi.tail(r) = base.domain.hi;

  im.sample_region.lo = Vec(m);
  im.sample_region.hi = Vec(m);
  im.sample_region.lo[0] = 0.6;
  im.sample_region.hi[0] = 1.8;
  for (int i = 0; i < extra_flat_dims; ++i) {
    im.sample_region.lo[1 + i] = -1.0;
    im.sample_region.hi[1 + i] = 1.0;
  }
  im.sample_region.lo.tail(r) = base.sample_region.lo;
  im.sample_region.hi.tail(r) = base.sample_region.hi;

  im.name = "cone(" + base.name + ")";
  auto base_eval = base.eval;
  const int extra = extra_flat_dims;
  im.eval = [base_eval, extra, r, m](const Vec& u) {
    Jet t = Jet::variable(u[0], 0, m);
    JetVec f;
    for (int i = 0; i < extra; ++i)
      f.push_back(Jet::variable(u[1 + i], 1 + i, m));
    JetVec bj = base_eval(u.tail(r));
    for (const auto& comp : bj)
      f.push_back(t * gallery_detail::pad_jet(comp, 1 + extra, m));
    return f;
  };
  return im;
}

/// Totally geodesic affine 3-plane in R^5.
inline Immersion plane_immersion() {
  Immersion im;
  im.chart_dim = 3;
  im.ambient = Ambient::euclidean(5);
  im.domain = Box::all(3);
  im.sample_region = Box::of({{-1, 1}, {-1, 1}, {-1, 1}});
  im.name = "plane";
  im.eval = [](const Vec& u) {
    JetVec vars = jet_variables(u);
    JetVec f = {vars[0], vars[1], vars[2], Jet::constant(0.0, 3),
                Jet::constant(0.0, 3)};
    return f;
  };
  return im;
}

/// Unit round S^2 in R^3 (Euclidean ambient: one normal, totally umbilic).
inline Immersion round_sphere_immersion() {
  Immersion im;
  im.chart_dim = 2;
  im.ambient = Ambient::euclidean(3);
  im.domain = Box::of({{0.02, M_PI - 0.02}, {-8.0, 8.0}});
  im.sample_region = Box::of({{0.35, M_PI - 0.35}, {0.1, 6.18}});
  im.name = "sphere";
  im.eval = [](const Vec& u) {
    Jet x, y, z;
    gallery_detail::spherical_chart(u, x, y, z);
    return JetVec{x, y, z};
  };
  return im;
}

// ---------------------------------------------------------------------------
// Stereographic projection and Moebius re-ambienting
// ---------------------------------------------------------------------------

/// sigma(x) = x_hat / (1 - x_last), pole at (0,...,0,1).
inline Vec stereographic_project(const Vec& x) {
  const double denom = 1.0 - x[x.size() - 1];
  if (std::abs(denom) < 1e-6)
    throw PoleError("stereographic projection too close to the pole");
  return Vec(x.head(x.size() - 1) / denom);
}

inline Vec stereographic_inverse(const Vec& w) {
  const double n2 = w.squaredNorm();
  Vec x(w.size() + 1);
  x.head(w.size()) = 2.0 * w / (1.0 + n2);
  x[w.size()] = (n2 - 1.0) / (1.0 + n2);
  return x;
}

/// Re-ambients a sphere-valued immersion into Euclidean space through the
/// stereographic projection from `pole` (unit vector).
inline Immersion euclideanize(const Immersion& sphere_im, const Vec& pole) {
  if (sphere_im.ambient.kind != AmbientKind::UnitSphere)
    throw Error("euclideanize: immersion is not sphere-valued");
  const int coords = sphere_im.ambient.coords();
  if (pole.size() != coords) throw Error("euclideanize: pole dimension mismatch");

  // Householder map sending the pole to the last coordinate axis.
  Vec e_last = Vec::Zero(coords);
  e_last[coords - 1] = 1.0;
  Vec v = pole / pole.norm() - e_last;
  Mat rot = Mat::Identity(coords, coords);
  if (v.norm() > 1e-14)
    rot -= (2.0 / v.squaredNorm()) * (v * v.transpose());

  Immersion im;
  im.chart_dim = sphere_im.chart_dim;
  im.ambient = Ambient::euclidean(coords - 1);
  im.domain = sphere_im.domain;
  im.sample_region = sphere_im.sample_region;
  im.name = "stereo(" + sphere_im.name + ")";
  auto base_eval = sphere_im.eval;
  im.eval = [base_eval, rot, coords](const Vec& u) {
    JetVec f = base_eval(u);
    JetVec g(coords, Jet(static_cast<int>(u.size())));
    for (int i = 0; i < coords; ++i)
      for (int j = 0; j < coords; ++j)
        if (rot(i, j) != 0.0) g[i] = g[i] + rot(i, j) * f[j];
    if (1.0 - g[coords - 1].value < 1e-6)
      throw PoleError("stereographic projection too close to the pole");
    Jet denom = 1.0 - g[coords - 1];
    JetVec out;
    out.reserve(coords - 1);
    for (int i = 0; i + 1 < coords; ++i) out.push_back(g[i] / denom);
    return out;
  };
  return im;
}

/// Pole that keeps the projection of f(anchor) near the origin.
inline Vec antipodal_pole(const Vec& f_value) {
  return Vec(-f_value / f_value.norm());
}

inline Immersion euclideanize_at(const Immersion& im, const Vec& anchor_u) {
  if (im.ambient.kind == AmbientKind::Euclidean) return im;
  return euclideanize(im, antipodal_pole(im.value(anchor_u)));
}

/// Post-composition with a Moebius transformation of the Euclidean ambient,
/// acting through the light-cone lift at jet level.
inline Immersion transform_immersion(const LorentzMatrix& t,
                                     const Immersion& im) {
  if (im.ambient.kind != AmbientKind::Euclidean)
    throw Error("transform_immersion: expects a Euclidean-ambient immersion");
  const int n = im.ambient.dim;
  if (t.ambient_dim() != n)
    throw Error("transform_immersion: transformation dimension mismatch");
  Immersion out;
  out.chart_dim = im.chart_dim;
  out.ambient = im.ambient;
  out.domain = im.domain;
  out.sample_region = im.sample_region;
  out.name = "moebius(" + im.name + ")";
  auto base_eval = im.eval;
  Mat tm = t.T;
  out.eval = [base_eval, tm, n](const Vec& u) {
    JetVec f = base_eval(u);
    const int m = static_cast<int>(u.size());
    Jet norm2 = Jet::constant(0.0, m);
    for (const auto& c : f) norm2 = norm2 + c * c;
    JetVec lift;
    lift.reserve(n + 2);
    lift.push_back(0.5 * (1.0 + norm2));
    lift.push_back(0.5 * (1.0 - norm2));
    for (const auto& c : f) lift.push_back(c);
    JetVec rotated(n + 2, Jet(m));
    for (int i = 0; i < n + 2; ++i)
      for (int j = 0; j < n + 2; ++j)
        if (tm(i, j) != 0.0) rotated[i] = rotated[i] + tm(i, j) * lift[j];
    Jet denom = rotated[0] + rotated[1];
    if (std::abs(denom.value) <= 1e-9)
      throw InfinityError("point sent to infinity (|Y0+Y1| <= 1e-9)");
    JetVec outv;
    outv.reserve(n);
    for (int i = 0; i < n; ++i) outv.push_back(rotated[2 + i] / denom);
    return outv;
  };
  return out;
}

// ---------------------------------------------------------------------------
// DSL-defined immersions and the gallery front door
// ---------------------------------------------------------------------------

inline Immersion make_dsl_immersion(int chart_dim, Ambient ambient,
                                    const std::vector<std::string>& components,
                                    const Box* region = nullptr) {
  if (static_cast<int>(components.size()) != ambient.coords())
    throw Error("immersion components: expected " +
                std::to_string(ambient.coords()) + " expressions, got " +
                std::to_string(components.size()));
  auto asts = std::make_shared<std::vector<AstPtr>>();
  auto sources = std::make_shared<std::vector<std::string>>(components);
  for (const auto& src : components) {
    ParseResult r = parse(src);
    if (std::holds_alternative<ParseError>(r))
      throw Error("in component '" + src + "': " +
                  std::get<ParseError>(r).message());
    AstPtr ast = std::get<AstPtr>(r);
    auto issues = validate(ast, chart_dim);
    if (!issues.empty())
      throw Error("in component '" + src + "': " + issues.front().message);
    asts->push_back(ast);
  }
  Immersion im;
  im.chart_dim = chart_dim;
  im.ambient = ambient;
  im.domain = Box::all(chart_dim);
  if (region) {
    im.sample_region = *region;
  } else {
    im.sample_region.lo = Vec::Constant(chart_dim, -1.0);
    im.sample_region.hi = Vec::Constant(chart_dim, 1.0);
  }
  im.name = "dsl";
  im.eval = [asts, sources](const Vec& u) {
    JetVec f;
    f.reserve(asts->size());
    for (size_t i = 0; i < asts->size(); ++i)
      f.push_back(eval_jet((*asts)[i], u, (*sources)[i]));
    return f;
  };
  return im;
}

using ParamMap = std::map<std::string, std::string>;

namespace gallery_detail {

inline double param_double(const ParamMap& p, const std::string& key,
                           double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  return std::stod(it->second);
}

inline int param_int(const ParamMap& p, const std::string& key, int fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  return std::stoi(it->second);
}

inline Vec param_vec(const ParamMap& p, const std::string& key,
                     const Vec& fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  std::vector<double> vals;
  std::string s = it->second;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    vals.push_back(std::stod(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  Vec v(static_cast<int>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
  return v;
}

inline CliffordParams equilateral_clifford() {
  Vec r = Vec::Constant(3, 1.0 / std::sqrt(3.0));
  Vec theta(3);
  theta << 0.0, M_PI / 3.0, 2.0 * M_PI / 3.0;
  return CliffordParams::make(r, theta);
}

inline CliffordParams s3_clifford_torus() {
  Vec r = Vec::Constant(2, 1.0 / std::sqrt(2.0));
  Vec theta(2);
  theta << 0.0, M_PI / 2.0;
  return CliffordParams::make(r, theta);
}

}  // namespace gallery_detail

struct GalleryEntry {
  std::string name;
  std::string signature;
  std::string description;
};

inline std::vector<GalleryEntry> gallery_list() {
  return {
      {"veronese_s4", "", "Veronese minimal 2-sphere in S^4"},
      {"veronese_s2k", "k=2|3", "Veronese minimal 2-sphere in S^{2k}"},
      {"clifford", "r=r1,..,rm theta=t1,..,tm",
       "Clifford-type flat torus in S^{2m-1} (default: equilateral, m=3)"},
      {"hopf_veronese", "n>=2",
       "Hopf-fiber preimage of the Veronese CP^1 in S^{2n+1}"},
      {"cone_of", "base=NAME extra=K [base params]",
       "cone (y, t u) over a sphere-valued gallery immersion"},
      {"plane", "", "affine 3-plane in R^5 (totally geodesic)"},
      {"sphere", "", "round unit S^2 in R^3 (totally umbilic)"},
  };
}

inline Immersion gallery_get(const std::string& name, const ParamMap& params = {}) {
  using namespace gallery_detail;
  if (name == "veronese_s4") return veronese_sphere(2);
  if (name == "veronese_s2k") return veronese_sphere(param_int(params, "k", 3));
  if (name == "clifford") {
    CliffordParams defaults = equilateral_clifford();
    Vec r = param_vec(params, "r", defaults.r);
    Vec theta = param_vec(params, "theta", defaults.theta);
    return clifford(CliffordParams::make(r, theta));
  }
  if (name == "hopf_veronese") return hopf_veronese(param_int(params, "n", 2));
  if (name == "cone_of") {
    auto it = params.find("base");
    if (it == params.end()) throw Error("cone_of: missing base=NAME parameter");
    ParamMap forwarded = params;
    forwarded.erase("base");
    forwarded.erase("extra");
    Immersion base = gallery_get(it->second, forwarded);
    return cone_over(base, param_int(params, "extra", 0));
  }
  if (name == "plane") return plane_immersion();
  if (name == "sphere") return round_sphere_immersion();
  throw Error("unknown gallery immersion '" + name + "'");
}

}  // namespace mwl
