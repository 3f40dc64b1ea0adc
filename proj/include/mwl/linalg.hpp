#pragma once

#include <Eigen/Dense>

#include <random>

#include "mwl/jet.hpp"

namespace mwl {

using Rng = std::mt19937_64;

inline Mat gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = gauss(rng);
  return g;
}

/// Haar-ish random special orthogonal matrix: QR of a Gaussian matrix with
/// the sign convention R_kk > 0, then a determinant fix on the last column.
inline Mat random_rotation(int n, Rng& rng) {
  if (n == 1) return Mat::Identity(1, 1);
  Mat g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k)
    if (r(k, k) < 0) q.col(k) *= -1.0;
  if (q.determinant() < 0) q.col(n - 1) *= -1.0;
  return q;
}

inline Mat random_rotation(int n, uint64_t seed) {
  Rng rng(seed);
  return random_rotation(n, rng);
}

inline Vec random_unit_vector(int n, Rng& rng) {
  Vec v = gaussian_matrix(n, 1, rng).col(0);
  while (v.norm() < 1e-12) v = gaussian_matrix(n, 1, rng).col(0);
  return v / v.norm();
}

inline Mat random_symmetric(int n, Rng& rng) {
  Mat g = gaussian_matrix(n, n, rng);
  return 0.5 * (g + g.transpose());
}

inline Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

inline double frobenius_dot(const Mat& a, const Mat& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace mwl
