#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "mwl/fd.hpp"
#include "mwl/jet.hpp"

namespace mwl {

using MetricField = std::function<Mat(const Vec&)>;

/// Riemann tensor of a metric field at one chart point, all lowered indices,
/// computed from finite-difference Christoffel symbols.
struct CurvatureData {
  int m = 0;
  std::vector<double> riemann;  // R_{abcd}, flattened
  Mat ricci;
  double scalar = 0.0;

  double at(int a, int b, int c, int d) const {
    return riemann[((a * m + b) * m + c) * m + d];
  }
};

inline CurvatureData metric_curvature(const MetricField& g_field,
                                      const Vec& point,
                                      const FieldDerivativeSpec& spec) {
  const int m = static_cast<int>(point.size());

  VectorField flat = [&](const Vec& u) {
    Mat g = g_field(u);
    Vec v(m * m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) v[a * m + b] = g(a, b);
    return v;
  };

  Mat g0 = g_field(point);
  Mat ginv = g0.inverse();

  // dg[c](a,b) = d_c g_ab ; ddg[c][d](a,b) = d_c d_d g_ab.
  std::vector<Mat> dg(m);
  std::vector<std::vector<Mat>> ddg(m, std::vector<Mat>(m));
  for (int c = 0; c < m; ++c) {
    Vec v = fd_partial(flat, point, c, spec);
    dg[c] = Mat(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) dg[c](a, b) = v[a * m + b];
  }
  for (int c = 0; c < m; ++c)
    for (int d = c; d < m; ++d) {
      Vec v = fd_partial2(flat, point, c, d, spec);
      Mat h(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) h(a, b) = v[a * m + b];
      ddg[c][d] = h;
      ddg[d][c] = h;
    }

  // Christoffel symbols of the second kind and their first derivatives.
  auto gamma_lower = [&](int c, int a, int b) {
    return 0.5 * (dg[a](c, b) + dg[b](c, a) - dg[c](a, b));
  };
  std::vector<Mat> gamma(m, Mat::Zero(m, m));  // gamma[d](a,b) = Gamma^d_ab
  for (int d = 0; d < m; ++d)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        double s = 0.0;
        for (int c = 0; c < m; ++c) s += ginv(d, c) * gamma_lower(c, a, b);
        gamma[d](a, b) = s;
      }

  // d_e Gamma^d_ab = d_e [g^{dc}] Gamma_cab + g^{dc} d_e Gamma_cab,
  // with d_e g^{-1} = -g^{-1} (d_e g) g^{-1}.
  std::vector<Mat> dginv(m);
  for (int e = 0; e < m; ++e) dginv[e] = -ginv * dg[e] * ginv;
  auto dgamma_lower = [&](int e, int c, int a, int b) {
    return 0.5 * (ddg[e][a](c, b) + ddg[e][b](c, a) - ddg[e][c](a, b));
  };
  auto dgamma = [&](int e, int d, int a, int b) {
    double s = 0.0;
    for (int c = 0; c < m; ++c)
      s += dginv[e](d, c) * gamma_lower(c, a, b) +
           ginv(d, c) * dgamma_lower(e, c, a, b);
    return s;
  };

  // R^d_{cab} = d_a Gamma^d_bc - d_b Gamma^d_ac
  //           + Gamma^d_ae Gamma^e_bc - Gamma^d_be Gamma^e_ac.
  CurvatureData out;
  out.m = m;
  out.riemann.assign(m * m * m * m, 0.0);
  for (int d = 0; d < m; ++d)
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          double r = dgamma(a, d, b, c) - dgamma(b, d, a, c);
          for (int e = 0; e < m; ++e)
            r += gamma[d](a, e) * gamma[e](b, c) -
                 gamma[d](b, e) * gamma[e](a, c);
          // lower the first index: R_{fcab} = g_{fd} R^d_{cab}
          for (int f = 0; f < m; ++f)
            out.riemann[((f * m + c) * m + a) * m + b] += g0(f, d) * r;
        }

  out.ricci = Mat::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double s = 0.0;
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) s += ginv(c, d) * out.at(c, a, d, b);
      out.ricci(a, b) = s;
    }
  out.scalar = (ginv * out.ricci).trace();
  return out;
}

/// R(e_i, e_j, e_k, e_l) in a g-orthonormal frame E with chart components in
/// the columns of E (m x m).
inline double riemann_orthonormal(const CurvatureData& cd, const Mat& frame,
                                  int i, int j, int k, int l) {
  const int m = cd.m;
  double s = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d)
          s += frame(a, i) * frame(b, j) * frame(c, k) * frame(d, l) *
               cd.at(a, b, c, d);
  return s;
}

}  // namespace mwl
