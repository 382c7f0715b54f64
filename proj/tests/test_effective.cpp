#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cpb/effective.hpp"
#include "cpb/errors.hpp"
#include "oracles.hpp"

using cpb::EffectiveParams;

namespace {

// Lowest levels from a dense solve with a generous fixed cutoff.
std::vector<double> reference_levels(double e_c, double e_j, double n_g, std::size_t k) {
  const std::size_t n_max = 60;
  auto vals = oracle::dense_eigenvalues(cpb::build_effective({e_c, e_j, n_g, n_max}));
  vals.resize(k);
  return vals;
}

// Spread of the charge operator over the two lowest dense eigenvectors.
double reference_charge_spread(double e_c, double e_j, double n_g) {
  const std::size_t n_max = 30;
  const auto eig = oracle::dense_eigen(cpb::build_effective({e_c, e_j, n_g, n_max}));
  const auto dim = eig.vectors.rows();
  Eigen::VectorXd charge(dim);
  for (Eigen::Index i = 0; i < dim; ++i) charge(i) = static_cast<double>(i) - static_cast<double>(n_max);
  const Eigen::MatrixXd basis = eig.vectors.leftCols(2);
  const Eigen::Matrix2d q = basis.transpose() * charge.asDiagonal() * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
  return es.eigenvalues()(1) - es.eigenvalues()(0);
}

double gap(const EffectiveParams& p) {
  const auto s = cpb::effective_spectrum(p, 2);
  return s.eigenvalues[1] - s.eigenvalues[0];
}

}  // namespace

TEST_CASE("matrix elements for n_max = 2 at zero gate charge") {
  const auto m = cpb::build_effective({1.0, 0.4, 0.0, 2});
  CHECK(m.diag == std::vector<double>{4.0, 1.0, 0.0, 1.0, 4.0});
  CHECK(m.offdiag == std::vector<double>(4, -0.2));
  CHECK(cpb::charge_of(0, 2) == -2.0);
  CHECK(cpb::charge_of(4, 2) == 2.0);
  CHECK_THROWS_AS(cpb::build_effective({1.0, 0.4, 0.0, std::nullopt}), cpb::InvalidParams);
}

TEST_CASE("free charge states at the degeneracy point") {
  const auto s = cpb::effective_spectrum({1.0, 0.0, 0.5, std::nullopt}, 2);
  CHECK(s.eigenvalues == std::vector<double>{0.25, 0.25});
  const auto s4 = cpb::effective_spectrum({2.0, 0.0, 0.5, 5}, 4);
  CHECK(s4.eigenvalues == std::vector<double>{0.5, 0.5, 4.5, 4.5});
}

TEST_CASE("levels agree with a dense reference") {
  for (double ej : {0.01, 0.3, 1.0, 5.0, 25.0, 50.0}) {
    for (double ng : {0.0, 0.13, 0.5, 0.77, -1.3}) {
      const auto s = cpb::effective_spectrum({1.0, ej, ng, std::nullopt}, 4);
      const auto ref = reference_levels(1.0, ej, ng, 4);
      CHECK(oracle::max_abs_diff(s.eigenvalues, ref) <= 1e-9 * std::max(1.0, ej));
    }
  }
}

TEST_CASE("transmon limit approaches the plasma frequency") {
  const double ej = 50.0;
  // Harmonic frequency sqrt(2 E_J E_C) with the first-order anharmonic shift -E_C/4.
  const double plasma = std::sqrt(2.0 * ej * 1.0);
  const double g = gap({1.0, ej, 0.5, std::nullopt});
  CHECK(std::abs(g - (plasma - 0.25)) < 0.01 * plasma);
}

TEST_CASE("spectrum is even in E_J") {
  for (double ej : {0.2, 3.0, 40.0}) {
    for (double ng : {0.0, 0.31, 0.5}) {
      const auto a = cpb::effective_spectrum({1.0, ej, ng, 20}, 5).eigenvalues;
      const auto b = cpb::effective_spectrum({1.0, -ej, ng, 20}, 5).eigenvalues;
      CHECK(oracle::max_abs_diff(a, b) <= 1e-12 * std::max(1.0, ej));
    }
  }
}

TEST_CASE("periodic and reflection symmetric in gate charge") {
  for (double ej : {0.1, 1.0, 10.0}) {
    for (double ng : {0.0, 0.2, 0.45, 0.5, 0.9}) {
      const auto base = cpb::effective_spectrum({1.0, ej, ng, std::nullopt}, 4).eigenvalues;
      const auto shifted = cpb::effective_spectrum({1.0, ej, ng + 1.0, std::nullopt}, 4).eigenvalues;
      const auto reflected = cpb::effective_spectrum({1.0, ej, -ng, std::nullopt}, 4).eigenvalues;
      CHECK(oracle::max_abs_diff(base, shifted) <= 1e-8);
      CHECK(oracle::max_abs_diff(base, reflected) <= 1e-8);
    }
  }
}

TEST_CASE("charge dispersion flattens as E_J / E_C grows") {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.05 * i);
  double previous = INFINITY;
  for (double ej : {1.0, 5.0, 25.0, 50.0}) {
    const auto rows = cpb::charge_dispersion_sweep({1.0, ej, 0.0, std::nullopt}, grid, 2);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : rows) {
      const double g = r.energies[1] - r.energies[0];
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    CHECK(hi - lo < previous);
    previous = hi - lo;
  }
}

TEST_CASE("sweep rows follow the grid and ignore the base gate charge") {
  const std::vector<double> grid{0.5, 0.0, 0.25};
  const auto rows = cpb::charge_dispersion_sweep({1.0, 0.7, 3.0, std::nullopt}, grid, 3);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(rows[i].n_g == grid[i]);
    CHECK(rows[i].energies == cpb::effective_spectrum({1.0, 0.7, grid[i], std::nullopt}, 3).eigenvalues);
  }
}

TEST_CASE("automatic truncation") {
  for (double ng : {0.0, 0.5, 2.0, 4.0}) {
    for (std::size_t k : {1u, 2u, 3u}) CHECK(cpb::auto_truncation({1.0, 0.0, ng, std::nullopt}, k, 1e-10) == 8);
  }
  CHECK(cpb::auto_truncation({1.0, 50.0, 0.3, std::nullopt}, 4, 1e-10) < 64);
  CHECK(cpb::resolve_truncation({1.0, 50.0, 0.3, 7}, 4).n_max == 7u);
  CHECK(cpb::resolve_truncation({1.0, 50.0, 0.3, std::nullopt}, 4).n_max.has_value());
  CHECK_THROWS_AS(cpb::auto_truncation({1.0, 1e14, 0.0, std::nullopt}, 2, 1e-10), cpb::TruncationFailure);
}

TEST_CASE("repeated solves are bit-identical") {
  const EffectiveParams p{1.0, 3.3, 0.41, std::nullopt};
  const auto a = cpb::effective_spectrum(p, 4);
  const auto b = cpb::effective_spectrum(p, 4);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(*a.eigenvectors == *b.eigenvectors);
  const auto qa = cpb::qubit_states(p);
  const auto qb = cpb::qubit_states(p);
  CHECK(qa.v0 == qb.v0);
  CHECK(qa.v1 == qb.v1);
  CHECK(qa.delta_n == qb.delta_n);
}

TEST_CASE("qubit pair at the free degeneracy point") {
  const auto q = cpb::qubit_states({1.0, 0.0, 0.5, std::nullopt});
  CHECK(q.e0 == 0.25);
  CHECK(q.e1 == 0.25);
  CHECK(q.delta_n == 1.0);
  CHECK(q.charge_expectation_gap == 1.0);
  // Ordered by increasing charge: |0> then |1>.
  CHECK(q.v0[q.n_max] == doctest::Approx(1.0));
  CHECK(q.v1[q.n_max + 1] == doctest::Approx(1.0));
}

TEST_CASE("qubit pair with an isolated ground state and a degenerate excitation") {
  const auto q = cpb::qubit_states({1.0, 0.0, 0.0, std::nullopt});
  CHECK(q.e0 == 0.0);
  CHECK(q.e1 == 1.0);
  CHECK(q.v0[q.n_max] == 1.0);
  CHECK(std::abs(q.v1[q.n_max - 1]) == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::abs(q.v1[q.n_max + 1]) == doctest::Approx(std::sqrt(0.5)));
  CHECK(q.charge_expectation_gap == doctest::Approx(0.0));
}

TEST_CASE("qubit pair near the degeneracy point with weak tunneling") {
  for (double ej : {1e-3, 1e-2, 0.1}) {
    const auto q = cpb::qubit_states({1.0, ej, 0.5, std::nullopt});
    CHECK(q.e1 - q.e0 == doctest::Approx(ej).epsilon(1e-2));
    CHECK(oracle::dot(q.v0, q.v1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(oracle::dot(q.v0, q.v0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oracle::dot(q.v1, q.v1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.delta_n == doctest::Approx(reference_charge_spread(1.0, ej, 0.5)).epsilon(1e-9));
    CHECK(q.delta_n == doctest::Approx(1.0 + ej * ej / 8.0).epsilon(ej * ej));
    // Reflection symmetry makes both charge expectations sit at the midpoint.
    CHECK(q.charge_expectation_gap < 1e-9);
  }
}

TEST_CASE("charge spread matches the dense reference away from degeneracy") {
  for (double ej : {0.5, 2.0, 10.0}) {
    for (double ng : {0.0, 0.2, 0.4}) {
      const auto q = cpb::qubit_states({1.0, ej, ng, std::nullopt});
      CHECK(q.delta_n == doctest::Approx(reference_charge_spread(1.0, ej, ng)).epsilon(1e-8));
      CHECK(q.charge_expectation_gap <= q.delta_n + 1e-12);
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(cpb::effective_spectrum({0.0, 1.0, 0.0, std::nullopt}, 2), cpb::InvalidParams);
  CHECK_THROWS_AS(cpb::effective_spectrum({1.0, NAN, 0.0, std::nullopt}, 2), cpb::InvalidParams);
  CHECK_THROWS_AS(cpb::effective_spectrum({1.0, 1.0, INFINITY, std::nullopt}, 2), cpb::InvalidParams);
  CHECK_THROWS_AS(cpb::effective_spectrum({1.0, 1.0, 0.0, 0}, 2), cpb::InvalidParams);
  CHECK_THROWS_AS(cpb::effective_spectrum({1.0, 1.0, 0.0, 2}, 6), cpb::ValidationError);
}
