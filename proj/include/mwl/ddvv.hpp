#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "mwl/errors.hpp"
#include "mwl/jet.hpp"
#include "mwl/linalg.hpp"

namespace mwl {

/// Pointwise DDVV balance: rho + rho_perp <= |H|^2 + c, with equality
/// exactly at Wintgen-ideal points.
struct DdvvReport {
  double rho = 0.0;       // normalized scalar curvature
  double rho_perp = 0.0;  // normalized normal curvature (>= 0)
  double h2 = 0.0;        // |H|^2
  double c = 0.0;         // ambient curvature constant
  double gap = 0.0;       // h2 + c - rho - rho_perp
  bool equality = false;
  int m = 0, p = 0;
};

inline DdvvReport ddvv_report(const std::vector<Mat>& ops, double c,
                              double tol = 1e-7) {
  if (ops.empty()) throw Error("ddvv_report: need at least one shape operator");
  const int m = static_cast<int>(ops[0].rows());
  const int p = static_cast<int>(ops.size());
  if (m < 2) throw Error("ddvv_report: need m >= 2");
  for (const auto& a : ops)
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9)
      throw Error("ddvv_report: shape operators must be symmetric");

  const double pair_norm = 2.0 / (m * (m - 1.0));

  double sectional_sum = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double s = c;
      for (const auto& a : ops) s += a(i, i) * a(j, j) - a(i, j) * a(i, j);
      sectional_sum += s;
    }
  const double rho = pair_norm * sectional_sum;

  double comm2 = 0.0;
  for (int alpha = 0; alpha < p; ++alpha)
    for (int beta = alpha + 1; beta < p; ++beta) {
      Mat cmat = ops[alpha] * ops[beta] - ops[beta] * ops[alpha];
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) comm2 += cmat(i, j) * cmat(i, j);
    }
  const double rho_perp = pair_norm * std::sqrt(comm2);

  double h2 = 0.0;
  for (const auto& a : ops) {
    const double ha = a.trace() / m;
    h2 += ha * ha;
  }

  DdvvReport r;
  r.rho = rho;
  r.rho_perp = rho_perp;
  r.h2 = h2;
  r.c = c;
  r.gap = h2 + c - rho - rho_perp;
  r.equality = r.gap < tol;
  r.m = m;
  r.p = p;
  return r;
}

/// Constructive witness that a shape-operator tuple attains DDVV equality:
/// rotations R (tangent) and S (normal mixing) carrying the tuple onto the
/// canonical two-operator pattern
///   A'_1 = lambda_1 I + mu0 (E_12 + E_21),
///   A'_2 = lambda_2 I + mu0 (E_11 - E_22),
///   A'_3 = lambda_3 I,  A'_r = 0 (r >= 4).
struct WintgenCertificate {
  Mat R;           // m x m, orthogonal
  Mat S;           // p x p, orthogonal
  double mu0 = 0;  // off-diagonal strength, >= 0
  Vec lambda;      // umbilic parts of the pattern operators
  double residual = 0;  // max-norm deviation from the pattern
};

/// The canonical pattern itself (identity R, S).
inline std::vector<Mat> canonical_wintgen_ops(int m, int p, double mu0,
                                              const Vec& lambda) {
  std::vector<Mat> ops;
  for (int alpha = 0; alpha < p; ++alpha) {
    Mat a = lambda[alpha] * Mat::Identity(m, m);
    if (alpha == 0) {
      a(0, 1) += mu0;
      a(1, 0) += mu0;
    } else if (alpha == 1) {
      a(0, 0) += mu0;
      a(1, 1) -= mu0;
    }
    ops.push_back(a);
  }
  return ops;
}

namespace ddvv_detail {

/// Transformed tuple: out_alpha = sum_beta S(alpha,beta) R^t A_beta R.
inline std::vector<Mat> conjugate_tuple(const std::vector<Mat>& ops,
                                        const Mat& rot, const Mat& mix) {
  const int p = static_cast<int>(ops.size());
  std::vector<Mat> rotated(p);
  for (int b = 0; b < p; ++b) rotated[b] = rot.transpose() * ops[b] * rot;
  std::vector<Mat> out(p, Mat::Zero(ops[0].rows(), ops[0].cols()));
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      if (mix(a, b) != 0.0) out[a] += mix(a, b) * rotated[b];
  return out;
}

inline double pattern_residual(const std::vector<Mat>& transformed, double mu0,
                               const Vec& lambda) {
  const int m = static_cast<int>(transformed[0].rows());
  const int p = static_cast<int>(transformed.size());
  std::vector<Mat> pattern = canonical_wintgen_ops(m, p, mu0, lambda);
  double res = 0.0;
  for (int a = 0; a < p; ++a)
    res = std::max(res,
                   (transformed[a] - pattern[a]).cwiseAbs().maxCoeff());
  return res;
}

}  // namespace ddvv_detail

inline std::optional<WintgenCertificate> wintgen_certificate(
    const std::vector<Mat>& ops, double tol = 1e-7) {
  const int m = static_cast<int>(ops[0].rows());
  const int p = static_cast<int>(ops.size());
  if (m < 2) throw Error("wintgen_certificate: need m >= 2");
  for (const auto& a : ops)
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9)
      throw Error("wintgen_certificate: operators must be symmetric");

  // (1) Split off umbilic parts.
  Vec lambda(p);
  std::vector<Mat> traceless(p);
  double max_dev = 0.0;
  for (int a = 0; a < p; ++a) {
    lambda[a] = ops[a].trace() / m;
    traceless[a] = ops[a] - lambda[a] * Mat::Identity(m, m);
    max_dev = std::max(max_dev, traceless[a].cwiseAbs().maxCoeff());
  }

  // Totally umbilic tuples certify immediately with mu0 = 0 (the canonical
  // form is frame-independent there).
  if (max_dev < tol) {
    WintgenCertificate cert;
    cert.R = Mat::Identity(m, m);
    cert.S = Mat::Identity(p, p);
    cert.mu0 = 0.0;
    cert.lambda = lambda;
    cert.residual = max_dev;
    return cert;
  }

  // (2) Gram matrix of the traceless parts; equality needs rank <= 2 with a
  // doubly-degenerate top eigenvalue 2 mu0^2.
  Mat gram(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      gram(a, b) = frobenius_dot(traceless[a], traceless[b]);
  Eigen::SelfAdjointEigenSolver<Mat> ges(gram);
  Vec gev = ges.eigenvalues();  // ascending
  const double gmax = gev.maxCoeff();
  int rank = 0;
  for (int i = 0; i < p; ++i)
    if (gev[i] > 1e-8 * gmax) ++rank;
  if (rank > 2) return std::nullopt;

  const double d1 = gev[p - 1];
  const double d2 = p >= 2 ? gev[p - 2] : 0.0;
  const double mu0 = std::sqrt(std::max(0.0, (d1 + d2) / 4.0));

  // (3) Rotate the normal index so only two traceless operators survive.
  // Rows of S list the Gram eigenvectors, strongest first.
  Mat mix(p, p);
  for (int k = 0; k < p; ++k) mix.row(k) = ges.eigenvectors().col(p - 1 - k).transpose();
  Mat P = Mat::Zero(m, m), Q = Mat::Zero(m, m);
  for (int b = 0; b < p; ++b) {
    P += mix(0, b) * traceless[b];
    if (p >= 2) Q += mix(1, b) * traceless[b];
  }

  // (4) The distinguished tangent plane is the top eigenspace of P^2 + Q^2.
  Mat msq = P * P + Q * Q;
  Eigen::SelfAdjointEigenSolver<Mat> mes(msq);
  Mat basis(m, m);  // columns: plane pair first, then the complement
  for (int k = 0; k < m; ++k) basis.col(k) = mes.eigenvectors().col(m - 1 - k);

  // (5) Phase algebra in the plane: a 2x2 traceless symmetric block is the
  // complex number z = X_11 + i X_12; tangent rotation by theta multiplies z
  // by e^{-2 i theta}. Target: z(P') = i mu0 (off-diagonal), z(Q') = mu0.
  auto plane_z = [&](const Mat& x) {
    Mat b2 = basis.leftCols(2).transpose() * x * basis.leftCols(2);
    return std::complex<double>(b2(0, 0), b2(0, 1));
  };
  std::complex<double> z1 = plane_z(P);
  std::complex<double> z2 = plane_z(Q);
  if (std::abs(z2) > std::abs(z1)) {
    std::swap(z1, z2);
    std::swap(P, Q);
    Mat perm = Mat::Identity(p, p);
    if (p >= 2) {
      perm(0, 0) = perm(1, 1) = 0.0;
      perm(0, 1) = perm(1, 0) = 1.0;
    }
    mix = perm * mix;
  }
  // Orient the plane so that z2 ~ -i z1 (flip the second basis vector
  // conjugates both phases).
  if (std::abs(z1) > 1e-300 && (z2 / z1).imag() > 0.0) {
    basis.col(1) *= -1.0;
    z1 = std::conj(z1);
    z2 = std::conj(z2);
  }
  const double theta = 0.5 * (std::arg(z1) - M_PI / 2.0);
  Mat rot2(2, 2);
  rot2 << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Mat rot = basis;
  rot.leftCols(2) = basis.leftCols(2) * rot2;

  // (6) Concentrate residual umbilic weight of indices >= 3 into slot 3 so
  // the tail operators vanish identically, then fit and verify.
  Vec lam_mixed = mix * lambda;
  if (p >= 4) {
    Vec tailv = lam_mixed.tail(p - 2);
    const double tail_norm = tailv.norm();
    if (tail_norm > 0.0) {
      Mat house = Mat::Identity(p - 2, p - 2);
      Vec target = Vec::Zero(p - 2);
      target[0] = tail_norm;
      Vec v = tailv - target;
      if (v.norm() > 1e-14 * tail_norm)
        house -= (2.0 / v.squaredNorm()) * (v * v.transpose());
      Mat full = Mat::Identity(p, p);
      full.block(2, 2, p - 2, p - 2) = house;
      mix = full * mix;
      lam_mixed = mix * lambda;
    }
  }

  auto evaluate = [&](const Mat& rtry, const Mat& stry) {
    std::vector<Mat> tr = ddvv_detail::conjugate_tuple(ops, rtry, stry);
    Vec lam_fit(p);
    for (int a = 0; a < p; ++a) lam_fit[a] = tr[a].trace() / m;
    return std::make_pair(ddvv_detail::pattern_residual(tr, mu0, lam_fit),
                          lam_fit);
  };

  Mat best_r = rot, best_s = mix;
  auto [best_res, best_lam] = evaluate(rot, mix);
  if (best_res >= tol) return std::nullopt;
  // Prefer proper rotations where a spare column/row allows: flipping a
  // complement tangent column or a tail normal row leaves the pattern
  // residual unchanged.
  if (best_r.determinant() < 0.0 && m >= 3) best_r.col(m - 1) *= -1.0;
  if (best_s.determinant() < 0.0 && p >= 3) best_s.row(p - 1) *= -1.0;
  std::tie(best_res, best_lam) = evaluate(best_r, best_s);

  WintgenCertificate cert;
  cert.R = best_r;
  cert.S = best_s;
  cert.mu0 = mu0;
  cert.lambda = best_lam;
  cert.residual = best_res;
  return cert;
}

/// Reconstructs the original tuple from a certificate (inverse of the
/// conjugation used by wintgen_certificate).
inline std::vector<Mat> certificate_reconstruct(const WintgenCertificate& c) {
  const int m = static_cast<int>(c.R.rows());
  const int p = static_cast<int>(c.S.rows());
  std::vector<Mat> pattern = canonical_wintgen_ops(m, p, c.mu0, c.lambda);
  std::vector<Mat> ops(p, Mat::Zero(m, m));
  // pattern_a = sum_b S(a,b) R^t A_b R  =>  A_b = R (sum_a S(a,b) pattern_a) R^t
  for (int b = 0; b < p; ++b) {
    Mat acc = Mat::Zero(m, m);
    for (int a = 0; a < p; ++a) acc += c.S(a, b) * pattern[a];
    ops[b] = c.R * acc * c.R.transpose();
  }
  return ops;
}

/// Canonical tuple conjugated by seeded rotations: the standard test
/// instance for the certificate.
inline std::vector<Mat> planted_instance(int m, int p, double mu0,
                                         const Vec& lambda, uint64_t seed_r,
                                         uint64_t seed_s) {
  if (m < 2 || p < 1) throw Error("planted_instance: need m >= 2, p >= 1");
  if (lambda.size() != p) throw Error("planted_instance: lambda size mismatch");
  std::vector<Mat> pattern = canonical_wintgen_ops(m, p, mu0, lambda);
  Mat rot = random_rotation(m, seed_r);
  Mat mix = random_rotation(p, seed_s);
  std::vector<Mat> ops(p, Mat::Zero(m, m));
  for (int b = 0; b < p; ++b) {
    Mat acc = Mat::Zero(m, m);
    for (int a = 0; a < p; ++a) acc += mix(a, b) * pattern[a];
    ops[b] = rot * acc * rot.transpose();
  }
  return ops;
}

}  // namespace mwl
