#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mwl/ddvv.hpp"
#include "mwl/errors.hpp"
#include "mwl/fd.hpp"
#include "mwl/gallery.hpp"
#include "mwl/geometry.hpp"
#include "mwl/lorentz.hpp"
#include "mwl/metric_curvature.hpp"

namespace mwl {

// Moebius invariants of an umbilic-free immersion f: M^m -> R^n, computed
// through the light-cone lift Y = rho ((1+|f|^2)/2, (1-|f|^2)/2, f). All
// entry points expect a Euclidean ambient; sphere-valued immersions are
// re-ambiented by euclideanize_at first.

inline constexpr double kUmbilicThreshold = 1e-12;

/// rho^2 = m/(m-1) |II - (1/m) tr(II) I|^2. Undefined at umbilic points.
inline double conformal_factor_of(const FundamentalForms& ff) {
  if (umbilic_deviation2(ff) <= kUmbilicThreshold)
    throw UmbilicError(
        "Moebius invariants undefined here: totally umbilic point");
  return rho_of_forms(ff);
}

inline double conformal_factor(const Immersion& euclid, const Vec& u) {
  if (euclid.ambient.kind != AmbientKind::Euclidean)
    throw Error("conformal_factor: expects a Euclidean-ambient immersion");
  return conformal_factor_of(fundamental_forms(euclid, u));
}

/// Y = rho ((1+|f|^2)/2, (1-|f|^2)/2, f), a null vector in R^{n+2}_1.
inline Vec scaled_light_cone_lift(const Vec& f, double rho) {
  return Vec(rho * light_cone_lift(f));
}

inline Vec moebius_position(const Immersion& euclid, const Vec& u) {
  FundamentalForms ff = fundamental_forms(euclid, u);
  return scaled_light_cone_lift(euclid.value(u), conformal_factor_of(ff));
}

/// g = rho^2 df.df in the chart basis.
inline Mat moebius_metric(const Immersion& euclid, const Vec& u) {
  FundamentalForms ff = fundamental_forms(euclid, u);
  const double rho = conformal_factor_of(ff);
  return Mat(rho * rho * ff.I);
}

/// B^alpha_{ij} = rho^{-1} (h^alpha_{ij} - H^alpha delta_{ij}); trace-free
/// with squared norm (m-1)/m.
inline std::vector<Mat> moebius_B_of(const FundamentalForms& ff) {
  const double rho = conformal_factor_of(ff);
  const int m = static_cast<int>(ff.I.rows());
  std::vector<Mat> b;
  b.reserve(ff.h.size());
  for (size_t alpha = 0; alpha < ff.h.size(); ++alpha)
    b.push_back((ff.h[alpha] - ff.H[static_cast<int>(alpha)] * Mat::Identity(m, m)) / rho);
  return b;
}

inline std::vector<Mat> moebius_B(const Immersion& euclid, const Vec& u) {
  return moebius_B_of(fundamental_forms(euclid, u));
}

/// Mean curvature sphere xi_alpha; satisfies <xi_alpha, Y> = 0 and
/// <xi_alpha, xi_beta> = delta.
inline std::vector<Vec> mean_curvature_spheres(const Immersion& euclid,
                                               const Vec& u) {
  FundamentalForms ff = fundamental_forms(euclid, u);
  Vec f = euclid.value(u);
  std::vector<Vec> xis;
  for (int alpha = 0; alpha < ff.frame.p; ++alpha) {
    Vec n = ff.frame.normal.col(alpha);
    Vec xi(f.size() + 2);
    xi[0] = ff.H[alpha] * 0.5 * (1.0 + f.squaredNorm()) + f.dot(n);
    xi[1] = ff.H[alpha] * 0.5 * (1.0 - f.squaredNorm()) - f.dot(n);
    xi.tail(f.size()) = ff.H[alpha] * f + n;
    xis.push_back(xi);
  }
  return xis;
}

namespace moebius_detail {

/// Orthogonal polar factor of N^t N0: the minimal rotation aligning the
/// normal frame at a stencil point with the center frame.
inline Mat procrustes(const Mat& n_here, const Mat& n_center) {
  Eigen::JacobiSVD<Mat> svd(n_here.transpose() * n_center,
                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace moebius_detail

/// Moebius form coefficients (Phi):
///   C^alpha_i = -rho^{-2} [ H^alpha_{,i}
///                           + sum_j (h^alpha_{ij} - H^alpha delta_ij) e_j(ln rho) ].
/// Frame-dependent fields are sampled on a chart stencil with normal frames
/// Procrustes-aligned to the center before differencing.
struct MoebiusForm {
  Mat C;  // p x m
  double phi_norm2 = 0.0;
};

inline MoebiusForm moebius_form(const Immersion& euclid, const Vec& u,
                                const FieldDerivativeSpec& spec) {
  FundamentalForms ff0 = fundamental_forms(euclid, u);
  const double rho0 = conformal_factor_of(ff0);
  const int m = ff0.frame.m;
  const int p = ff0.frame.p;
  Mat n0 = ff0.frame.normal;

  // Stacked field: p aligned mean-curvature components, then ln rho.
  VectorField field = [&euclid, n0, p](const Vec& v) {
    FundamentalForms ff = fundamental_forms(euclid, v);
    Mat o = moebius_detail::procrustes(ff.frame.normal, n0);
    if ((ff.frame.normal * o - n0).norm() > 0.1)
      throw AlignmentError(
          "normal frame alignment failed across the FD stencil; try a "
          "smaller step");
    Vec out(p + 1);
    out.head(p) = o.transpose() * ff.H;
    out[p] = std::log(conformal_factor_of(ff));
    return out;
  };

  Mat chart_grad(p + 1, m);  // d/du_a of each field component
  for (int a = 0; a < m; ++a) chart_grad.col(a) = fd_partial(field, u, a, spec);

  // e_i derivatives from chart derivatives through the frame matrix T.
  Mat frame_grad = chart_grad * ff0.frame.T.transpose();  // (p+1) x m
  MoebiusForm out;
  out.C = Mat(p, m);
  for (int alpha = 0; alpha < p; ++alpha)
    for (int i = 0; i < m; ++i) {
      double s = frame_grad(alpha, i);
      for (int j = 0; j < m; ++j) {
        const double dev =
            ff0.h[alpha](i, j) - (i == j ? ff0.H[alpha] : 0.0);
        s += dev * frame_grad(p, j);
      }
      out.C(alpha, i) = -s / (rho0 * rho0);
    }
  out.phi_norm2 = out.C.squaredNorm();
  return out;
}

/// Blaschke tensor A and the second frame vector N:
///   N = -(1/m) Delta Y - (1/(2m^2)) <Delta Y, Delta Y> Y,
///   A_ij = -<E_j(Y_i), N>,
/// with Delta the Laplace-Beltrami operator of g and {E_i} a g-orthonormal
/// frame from the (smooth) Cholesky factor of the metric field.
struct BlaschkeData {
  Mat A;            // m x m symmetric
  Vec N;            // Lorentz vector, <Y,N> = 1
  Vec Y;
  double kappa = 0.0;   // normalized scalar curvature of g
  double trA = 0.0;
  Vec eigenvalues;      // ascending
  double asymmetry = 0.0;
};

inline BlaschkeData blaschke_A(const Immersion& euclid, const Vec& u,
                               const FieldDerivativeSpec& spec) {
  const int m = euclid.chart_dim;
  const int n = euclid.ambient.dim;

  VectorField y_field = [&euclid](const Vec& v) {
    FundamentalForms ff = fundamental_forms(euclid, v);
    Vec f(ff.frame.tangent.rows());
    JetVec jets = euclid.jets(v);
    for (int i = 0; i < f.size(); ++i) f[i] = jets[i].value;
    return scaled_light_cone_lift(f, conformal_factor_of(ff));
  };
  MetricField g_field = [&euclid](const Vec& v) {
    FundamentalForms ff = fundamental_forms(euclid, v);
    const double rho = conformal_factor_of(ff);
    return Mat(rho * rho * ff.I);
  };
  // Chart components of the g-orthonormal frame, E(i,a) = (L^{-1})(i,a);
  // smooth in u because Cholesky is smooth on SPD matrices.
  VectorField e_field = [g_field, m](const Vec& v) {
    Eigen::LLT<Mat> llt(g_field(v));
    Mat e = Mat(llt.matrixL()).inverse();
    Vec flat(m * m);
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < m; ++a) flat[i * m + a] = e(i, a);
    return flat;
  };

  const Vec y0 = y_field(u);
  Mat g0 = g_field(u);
  Mat ginv = g0.inverse();

  std::vector<Vec> dy(m);
  std::vector<std::vector<Vec>> ddy(m, std::vector<Vec>(m));
  for (int a = 0; a < m; ++a) dy[a] = fd_partial(y_field, u, a, spec);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      ddy[a][b] = fd_partial2(y_field, u, a, b, spec);
      ddy[b][a] = ddy[a][b];
    }

  VectorField g_flat = [g_field, m](const Vec& v) {
    Mat g = g_field(v);
    Vec flat(m * m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) flat[a * m + b] = g(a, b);
    return flat;
  };
  std::vector<Mat> dg(m);
  for (int c = 0; c < m; ++c) {
    Vec v = fd_partial(g_flat, u, c, spec);
    dg[c] = Mat(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) dg[c](a, b) = v[a * m + b];
  }
  auto christoffel = [&](int c, int a, int b) {
    double s = 0.0;
    for (int d = 0; d < m; ++d)
      s += 0.5 * ginv(c, d) * (dg[a](d, b) + dg[b](d, a) - dg[d](a, b));
    return s;
  };

  Vec laplace_y = Vec::Zero(n + 2);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Vec cov = ddy[a][b];
      for (int c = 0; c < m; ++c) cov -= christoffel(c, a, b) * dy[c];
      laplace_y += ginv(a, b) * cov;
    }

  Vec nvec = -laplace_y / m -
             lorentz_dot(laplace_y, laplace_y) / (2.0 * m * m) * y0;

  Eigen::LLT<Mat> llt(g0);
  Mat e0 = Mat(llt.matrixL()).inverse();
  std::vector<Mat> de(m);
  for (int b = 0; b < m; ++b) {
    Vec flat = fd_partial(e_field, u, b, spec);
    de[b] = Mat(m, m);
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < m; ++a) de[b](i, a) = flat[i * m + a];
  }

  Mat a_raw(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Vec e_j_of_y_i = Vec::Zero(n + 2);
      for (int b = 0; b < m; ++b) {
        Vec inner = Vec::Zero(n + 2);
        for (int a = 0; a < m; ++a)
          inner += de[b](i, a) * dy[a] + e0(i, a) * ddy[a][b];
        e_j_of_y_i += e0(j, b) * inner;
      }
      a_raw(i, j) = -lorentz_dot(e_j_of_y_i, nvec);
    }

  BlaschkeData out;
  out.asymmetry = (a_raw - a_raw.transpose()).cwiseAbs().maxCoeff();
  if (out.asymmetry > 1e-3)
    throw AlignmentError("Blaschke tensor asymmetry " +
                         std::to_string(out.asymmetry) +
                         " exceeds 1e-3; FD step likely unsuitable");
  out.A = 0.5 * (a_raw + a_raw.transpose());
  out.N = nvec;
  out.Y = y0;
  out.trA = out.A.trace();
  Eigen::SelfAdjointEigenSolver<Mat> es(out.A);
  out.eigenvalues = es.eigenvalues();
  out.kappa = metric_curvature(g_field, u, spec).scalar / (m * (m - 1.0));
  return out;
}

/// One-stop bundle of the scalar invariants used by the probes. `gap` is the
/// Moebius-normalized DDVV gap (of the B tensor, conformally invariant);
/// `metric_gap` is the geometry-level gap of the input immersion.
struct MoebiusInvariants {
  double rho = 0.0;
  Vec Y;
  Mat g;
  std::vector<Mat> B;
  double B_norm2 = 0.0;
  double gap = 0.0;
  double metric_gap = 0.0;
  std::optional<double> phi_norm2;
  std::optional<Mat> C;
  std::optional<Vec> A_eigenvalues;
  std::optional<double> trA;
  std::optional<double> kappa;
  std::optional<double> mu0;  // certified, when a certificate exists
};

struct InvariantOptions {
  bool with_phi = true;
  bool with_blaschke = true;
  bool with_certificate = true;
  double certificate_tol = 1e-7;
};

inline MoebiusInvariants invariant_scalars(const Immersion& im, const Vec& u,
                                           const FieldDerivativeSpec& spec,
                                           const InvariantOptions& opt = {}) {
  // Metric-level gap in the native ambient (jet-exact).
  FundamentalForms native = fundamental_forms(im, u);
  DdvvReport native_report = ddvv_report(shape_operators(native), native.c);

  Immersion euclid = euclideanize_at(im, u);
  FundamentalForms ff = fundamental_forms(euclid, u);

  MoebiusInvariants inv;
  inv.rho = conformal_factor_of(ff);
  JetVec jets = euclid.jets(u);
  Vec f(jets.size());
  for (size_t i = 0; i < jets.size(); ++i) f[static_cast<int>(i)] = jets[i].value;
  inv.Y = scaled_light_cone_lift(f, inv.rho);
  inv.g = inv.rho * inv.rho * ff.I;
  inv.B = moebius_B_of(ff);
  inv.B_norm2 = 0.0;
  for (const auto& b : inv.B) inv.B_norm2 += b.squaredNorm();
  inv.gap = ddvv_report(inv.B, 0.0).gap;
  inv.metric_gap = native_report.gap;

  if (opt.with_certificate) {
    auto cert = wintgen_certificate(inv.B, opt.certificate_tol);
    if (cert) inv.mu0 = cert->mu0;
  }
  if (opt.with_phi) {
    MoebiusForm mf = moebius_form(euclid, u, spec);
    inv.C = mf.C;
    inv.phi_norm2 = mf.phi_norm2;
  }
  if (opt.with_blaschke) {
    BlaschkeData bd = blaschke_A(euclid, u, spec);
    inv.A_eigenvalues = bd.eigenvalues;
    inv.trA = bd.trA;
    inv.kappa = bd.kappa;
  }
  return inv;
}

}  // namespace mwl
