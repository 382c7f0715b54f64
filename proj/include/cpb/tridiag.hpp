#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cpb {

/// Real symmetric tridiagonal matrix. `offdiag[i]` couples rows i and i+1.
struct TridiagMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const { return diag.size(); }

  /// Throws InvalidMatrix unless the shape is consistent and all entries are finite.
  void validate() const;

  /// Max absolute row sum.
  double norm_inf() const;

  /// y = T x
  std::vector<double> apply(std::span<const double> x) const;
};

/// Ascending eigenvalues, optionally with matching orthonormal eigenvectors.
///
/// `iterations` counts QL sweeps (full solver) or bisection plus inverse
/// iteration steps (lowest-k solver). When vectors are present,
/// `residual_bound` is the largest measured ||T v - lambda v||; otherwise it is
/// the solver's error estimate for the eigenvalues.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::optional<std::vector<std::vector<double>>> eigenvectors;
  std::size_t iterations = 0;
  double residual_bound = 0.0;
};

struct SolverOptions {
  // QL sweeps allowed per eigenvalue.
  int max_sweeps = 50;
  // Eigenvalues closer than this (relative to max(1, ||T||)) are treated as
  // one cluster when re-orthogonalizing eigenvectors.
  double cluster_tol = 1e-12;
};

/// All eigenvalues via implicit-shift QL, with accumulated rotations when
/// `want_vectors` is set.
Spectrum eigen_all(const TridiagMatrix& m, bool want_vectors,
                   const SolverOptions& opts = {});

/// The k smallest eigenpairs. Splits at negligible couplings, then runs
/// Sturm-count bisection and inverse iteration on each block, so cost is
/// O(k M) instead of O(M^2).
Spectrum eigen_lowest(const TridiagMatrix& m, std::size_t k,
                      const SolverOptions& opts = {});

/// Same eigenvalues as eigen_lowest without the vector stage.
Spectrum lowest_eigenvalues(const TridiagMatrix& m, std::size_t k,
                            const SolverOptions& opts = {});

/// Number of eigenvalues strictly below x (Sturm sequence count).
std::size_t sturm_count(const TridiagMatrix& m, double x);

}  // namespace cpb
