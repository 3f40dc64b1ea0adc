#pragma once

#include <Eigen/Dense>

#include <vector>

#include "mwl/errors.hpp"
#include "mwl/immersion.hpp"
#include "mwl/jet.hpp"

namespace mwl {

/// Orthonormal tangent/normal frame at one chart point.
struct FrameData {
  int m = 0;       // tangent dimension
  int p = 0;       // normal dimension (position vector excluded for spheres)
  Mat T;           // m x m: e_i = sum_a T(i,a) d_a f
  Mat tangent;     // coords x m, orthonormal e_i columns
  Mat normal;      // coords x p, orthonormal n_alpha columns
};

/// First/second fundamental forms at one point, orthonormal frame indices
/// for h and H, chart basis for I.
struct FundamentalForms {
  Mat I;                // m x m SPD, chart basis
  std::vector<Mat> h;   // p symmetric m x m
  Vec H;                // p, H^alpha = tr(h^alpha)/m
  double c = 0.0;       // ambient curvature constant (0 or 1)
  FrameData frame;
};

inline FrameData frames(const Immersion& im, const Vec& u) {
  JetVec jets = im.jets(u);
  const int coords = static_cast<int>(jets.size());
  const int m = im.chart_dim;

  Mat jac(coords, m);
  for (int i = 0; i < coords; ++i) jac.row(i) = jets[i].grad.transpose();
  Mat metric = jac.transpose() * jac;

  Eigen::SelfAdjointEigenSolver<Mat> es(metric);
  const double emax = es.eigenvalues().maxCoeff();
  if (!(es.eigenvalues().minCoeff() > 1e-10 * emax))
    throw GeometryError("not an immersion here: induced metric is degenerate");

  Eigen::LLT<Mat> llt(metric);
  Mat lower = llt.matrixL();
  Mat t = lower.inverse();  // T I T^t = id

  FrameData fr;
  fr.m = m;
  fr.T = t;
  fr.tangent = jac * t.transpose();

  const bool sphere = im.ambient.kind == AmbientKind::UnitSphere;
  const int span_cols = m + (sphere ? 1 : 0);
  fr.p = coords - span_cols;
  if (fr.p < 1)
    throw GeometryError(
        "ambient dimension too small: no normal directions remain");

  Mat w(coords, span_cols);
  w.leftCols(m) = jac;
  if (sphere) {
    Vec f(coords);
    for (int i = 0; i < coords; ++i) f[i] = jets[i].value;
    w.col(m) = f;
  }
  Eigen::HouseholderQR<Mat> qr(w);
  Mat q = qr.householderQ();
  fr.normal = q.rightCols(fr.p);
  return fr;
}

inline FundamentalForms fundamental_forms(const Immersion& im, const Vec& u) {
  JetVec jets = im.jets(u);
  FrameData fr = frames(im, u);
  const int coords = static_cast<int>(jets.size());
  const int m = fr.m;

  FundamentalForms ff;
  ff.frame = fr;
  ff.c = im.ambient.curvature();

  Mat jac(coords, m);
  for (int i = 0; i < coords; ++i) jac.row(i) = jets[i].grad.transpose();
  ff.I = jac.transpose() * jac;

  // h^alpha_{ij} = sum_{ab} T_{ia} T_{jb} (n_alpha . d^2_{ab} f); for sphere
  // ambient this is the spherical second form since n_alpha . f = 0.
  ff.h.reserve(fr.p);
  ff.H = Vec(fr.p);
  for (int alpha = 0; alpha < fr.p; ++alpha) {
    Mat chart_form = Mat::Zero(m, m);
    for (int i = 0; i < coords; ++i)
      chart_form += fr.normal(i, alpha) * jets[i].hess;
    Mat h = fr.T * chart_form * fr.T.transpose();
    h = 0.5 * (h + h.transpose());
    ff.h.push_back(h);
    ff.H[alpha] = h.trace() / m;
  }
  return ff;
}

/// In an orthonormal tangent frame the shape operator matrices coincide with
/// the second-form matrices.
inline std::vector<Mat> shape_operators(const FundamentalForms& ff) {
  return ff.h;
}

/// |II - (1/m) tr(II) I|^2 in orthonormal frames, i.e. the squared norm of
/// the trace-free second fundamental form.
inline double umbilic_deviation2(const FundamentalForms& ff) {
  const int m = static_cast<int>(ff.I.rows());
  double s = 0.0;
  for (size_t alpha = 0; alpha < ff.h.size(); ++alpha) {
    Mat dev = ff.h[alpha] - ff.H[static_cast<int>(alpha)] * Mat::Identity(m, m);
    s += dev.squaredNorm();
  }
  return s;
}

/// rho = sqrt(m/(m-1) |II - (1/m)tr(II) I|^2); ambient-agnostic scalar used
/// both as a homogeneity probe field and by the Moebius layer.
inline double rho_of_forms(const FundamentalForms& ff) {
  const int m = static_cast<int>(ff.I.rows());
  return std::sqrt(static_cast<double>(m) / (m - 1) * umbilic_deviation2(ff));
}

}  // namespace mwl
