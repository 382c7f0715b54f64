#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cpb::detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Returns false if the vector is numerically zero.
inline bool normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  if (!(n > 0.0) || !std::isfinite(n)) return false;
  for (auto& x : v) x /= n;
  return true;
}

/// Modified Gram-Schmidt against an orthonormal set.
inline void orthogonalize_against(std::vector<double>& v,
                                  std::span<const std::vector<double>> basis) {
  for (const auto& b : basis) {
    const double c = dot(b, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
  }
}

/// Largest-magnitude component positive (first one on ties).
inline void fix_sign(std::vector<double>& v) {
  if (v.empty()) return;
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0.0) {
    for (auto& x : v) x = -x;
  }
}

/// Re-orthonormalize vectors whose (sorted) eigenvalues sit within `tol` of
/// their neighbour.
inline void reorthogonalize_clusters(std::span<const double> values,
                                     std::vector<std::vector<double>>& vecs, double tol) {
  std::size_t start = 0;
  for (std::size_t j = 1; j <= values.size(); ++j) {
    if (j < values.size() && values[j] - values[j - 1] <= tol) continue;
    for (std::size_t a = start + 1; a < j; ++a) {
      orthogonalize_against(vecs[a], std::span(vecs).subspan(start, a - start));
      normalize(vecs[a]);
    }
    start = j;
  }
}

/// Small dense symmetric eigenproblem by cyclic Jacobi. `a` is row-major
/// n x n. Returns ascending eigenvalues; `vectors[i]` is the i-th eigenvector.
struct DenseEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

inline DenseEigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
  DenseEigen out;
  for (std::size_t i : order) {
    out.values.push_back(a[i * n + i]);
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v[k * n + i];
    fix_sign(col);
    out.vectors.push_back(std::move(col));
  }
  return out;
}

}  // namespace cpb::detail
