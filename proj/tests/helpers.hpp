#pragma once

#include <cmath>
#include <vector>

#include "bosonstat/common.hpp"
#include "bosonstat/rng.hpp"
#include "bosonstat/symrep.hpp"

// Test-only oracles and random generators. Everything here is independent of
// the library implementation paths it is used to check.
namespace testutil {

using bosonstat::complexd;
using bosonstat::MatrixXcd;
using bosonstat::Rng;

inline double gaussian(Rng& rng) {
  double u1 = rng.uniform();
  while (u1 == 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline complexd complex_gaussian(Rng& rng) {
  return complexd(gaussian(rng), gaussian(rng)) / std::sqrt(2.0);
}

inline MatrixXcd random_matrix(Rng& rng, int rows, int cols) {
  MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = complex_gaussian(rng);
  return m;
}

// Haar-ish random unitary: QR of a Ginibre matrix with phase fixing.
inline MatrixXcd random_unitary(Rng& rng, int d) {
  const MatrixXcd g = random_matrix(rng, d, d);
  Eigen::HouseholderQR<MatrixXcd> qr(g);
  MatrixXcd q = qr.householderQ();
  const MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < d; ++c) {
    const complexd rc = r(c, c);
    if (std::abs(rc) > 0.0) q.col(c) *= rc / std::abs(rc);
  }
  return q;
}

inline bosonstat::symrep::Permutation random_permutation(Rng& rng, int n) {
  std::vector<int> images(n);
  for (int i = 0; i < n; ++i) images[i] = i + 1;
  for (int i = n - 1; i > 0; --i)
    std::swap(images[i], images[rng.uniform_below(static_cast<std::uint64_t>(i) + 1)]);
  return bosonstat::symrep::Permutation(images);
}

// Naive permanent: the literal sum over S_n. Oracle only.
inline complexd permanent_naive(const MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  complexd acc(0.0, 0.0);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    complexd prod(1.0, 0.0);
    for (int i = 0; i < n; ++i) prod *= m(i, perm[i]);
    acc += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

}  // namespace testutil
