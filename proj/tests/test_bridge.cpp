#include <doctest.h>

#include <cmath>

#include "cpb/bridge.hpp"
#include "cpb/errors.hpp"
#include "oracles.hpp"

using cpb::TwoModeParams;

namespace {

// lambda giving the requested E_J at n_bar1 = N/2.
double lambda_for(double e_j, std::size_t n) {
  const double half = 0.5 * static_cast<double>(n);
  return -2.0 * e_j / half;
}

}  // namespace

TEST_CASE("mapping examples") {
  const auto m = cpb::map_parameters({1.0, 0.0, 0.1, 2000, 1000.0});
  CHECK(m.e_j == doctest::Approx(-50.0).epsilon(1e-15));
  CHECK(m.n_g == 0.0);
  CHECK_FALSE(m.validity.has_value());

  CHECK(cpb::map_parameters({1.0, 0.7, 0.0, 10, 3.0}).e_j == 0.0);
  CHECK(cpb::map_parameters({1.0, 0.0, 0.4, 10, 3.0}).n_g == 0.0);
  CHECK(cpb::map_parameters({2.0, -1.0, 0.4, 10, 3.0}).n_g == 0.25);
  // Empty electrode: no tunneling energy.
  CHECK(cpb::map_parameters({1.0, 0.0, 0.4, 10, 0.0}).e_j == 0.0);
}

TEST_CASE("gate charge mapping round-trips the bias") {
  for (double u : {-3.7, -1.0, 1e-9, 0.123456789, 42.0}) {
    for (double ec : {0.3, 1.0, 7.0}) {
      const auto m = cpb::map_parameters({ec, u, 0.1, 10, 5.0});
      const double back = -2.0 * ec * m.n_g;
      CHECK(std::abs(back - u) <= 1e-15 * std::abs(u));
    }
  }
}

TEST_CASE("mapping rejects backgrounds outside the sector") {
  CHECK_THROWS_AS(cpb::map_parameters({1.0, 0.0, 0.1, 10, 10.5}), cpb::InvalidParams);
  CHECK_NOTHROW(cpb::map_parameters({1.0, 0.0, 0.1, 10, 10.0}));
}

TEST_CASE("validity diagnostics") {
  const auto m = cpb::map_parameters({1.0, 0.0, 0.1, 2000, 1000.0}, true);
  REQUIRE(m.validity.has_value());
  CHECK(m.validity->n_scale > 0.0);
  CHECK(m.validity->ratio == doctest::Approx(m.validity->n_scale / 1000.0));
  CHECK(m.validity->ratio < 0.01);
  const auto frozen = cpb::map_parameters({1.0, 0.0, 0.0, 20, 10.0}, true);
  CHECK(frozen.validity->n_scale == 0.0);
  // Larger N at fixed E_J pushes the charge fluctuations down relative to the electrodes.
  const auto small = cpb::map_parameters({1.0, 0.0, lambda_for(-50.0, 400), 400, 200.0}, true);
  const auto large = cpb::map_parameters({1.0, 0.0, lambda_for(-50.0, 4000), 4000, 2000.0}, true);
  CHECK(large.validity->ratio < small.validity->ratio);
}

TEST_CASE("gap comparison in the diagonal limit") {
  const auto rows = cpb::compare_spectra({1.0, 0.0, 0.0, 20, 10.0}, 4);
  REQUIRE(rows.size() == 4);
  const double expected[] = {1.0, 1.0, 4.0, 4.0};
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(rows[j].level == j + 1);
    CHECK(rows[j].gap_two_mode == expected[j]);
    CHECK(rows[j].gap_effective == expected[j]);
    CHECK(rows[j].rel_discrepancy == 0.0);
  }
}

TEST_CASE("gap comparison with zero tunneling and bias") {
  // n_g = 0.5 makes the first gap vanish in both models.
  const auto rows = cpb::compare_spectra({1.0, -1.0, 0.0, 20, 10.0}, 2);
  CHECK(rows[0].gap_effective == 0.0);
  CHECK(rows[0].gap_two_mode == 0.0);
  CHECK(rows[0].rel_discrepancy == 0.0);
  CHECK(rows[1].gap_effective == 2.0);
  CHECK(rows[1].gap_two_mode == 2.0);
}

TEST_CASE("discrepancies are even in lambda") {
  for (std::size_t n : {100u, 400u}) {
    TwoModeParams p{1.0, 0.3, lambda_for(-5.0, n), n, 0.5 * static_cast<double>(n)};
    auto q = p;
    q.lambda = -p.lambda;
    const auto a = cpb::compare_spectra(p, 3);
    const auto b = cpb::compare_spectra(q, 3);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(a[j].gap_two_mode == doctest::Approx(b[j].gap_two_mode).epsilon(1e-11));
      CHECK(a[j].gap_effective == doctest::Approx(b[j].gap_effective).epsilon(1e-11));
      CHECK(a[j].rel_discrepancy == doctest::Approx(b[j].rel_discrepancy).epsilon(1e-9));
    }
  }
}

TEST_CASE("first-gap discrepancy does not grow along an N-doubling sequence") {
  double previous = INFINITY;
  for (std::size_t n : {250u, 500u, 1000u, 2000u, 4000u}) {
    const auto rows = cpb::compare_spectra({1.0, 0.0, lambda_for(-50.0, n), n, 0.5 * static_cast<double>(n)}, 3);
    CHECK(rows[0].rel_discrepancy <= previous);
    previous = rows[0].rel_discrepancy;
  }
}

TEST_CASE("gap rows match the two solvers run independently") {
  const TwoModeParams p{1.0, 0.2, lambda_for(-3.0, 300), 300, 150.0};
  const auto rows = cpb::compare_spectra(p, 3);
  const auto tm = oracle::dense_eigenvalues(cpb::build_two_mode(p));
  const auto eff = oracle::dense_eigenvalues(cpb::build_effective({1.0, -3.0, -0.1, 40}));
  for (std::size_t j = 1; j <= 3; ++j) {
    CHECK(rows[j - 1].gap_two_mode == doctest::Approx(tm[j] - tm[0]).epsilon(1e-9));
    CHECK(rows[j - 1].gap_effective == doctest::Approx(eff[j] - eff[0]).epsilon(1e-9));
  }
}

TEST_CASE("gap comparison preconditions") {
  CHECK_THROWS_AS(cpb::compare_spectra({1.0, 0.0, 0.1, 10, 5.0}, 0), cpb::InvalidParams);
  CHECK_THROWS_AS(cpb::compare_spectra({1.0, 0.0, 0.1, 3, 1.0}, 4), cpb::InvalidParams);
  CHECK_NOTHROW(cpb::compare_spectra({1.0, 0.0, 0.1, 3, 1.0}, 3));
}

TEST_CASE("pipeline in the charge regime") {
  const std::size_t n = 100'000;
  const TwoModeParams p{1.0, -1.0, lambda_for(-0.01, n), n, 0.5 * static_cast<double>(n)};
  const auto r = cpb::contrast_pipeline(p, 1e4);
  CHECK(r.e_j == doctest::Approx(-0.01).epsilon(1e-14));
  CHECK(r.n_g == 0.5);
  CHECK(r.effective_overlap <= 1e-10);
  CHECK(r.delta_n == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.condensate_overlap_asymptotic == doctest::Approx(std::exp(-r.delta_n * r.delta_n / 8e4)).epsilon(1e-15));
  CHECK(r.condensate_overlap_asymptotic == doctest::Approx(0.9999875).epsilon(1e-9));
  CHECK(r.condensate_overlap_exact > 0.99998);
  CHECK(r.gap_table.size() == 3);
}

TEST_CASE("pipeline at the exact degeneracy point") {
  const auto r = cpb::contrast_pipeline({1.0, -1.0, 0.0, 1000, 500.0}, 100.0);
  CHECK(r.e_j == 0.0);
  CHECK(r.delta_n == 1.0);
  CHECK(r.effective_overlap == 0.0);
  CHECK(r.condensate_overlap_asymptotic == doctest::Approx(std::exp(-1.0 / 800.0)).epsilon(1e-15));
}

TEST_CASE("pipeline with coinciding charges") {
  const auto r = cpb::contrast_pipeline({1.0, 0.0, 0.0, 1000, 500.0}, 100.0);
  CHECK(r.delta_n == 0.0);
  CHECK(r.condensate_overlap_exact == 1.0);
  CHECK(r.condensate_overlap_asymptotic == 1.0);
}

TEST_CASE("pipeline gap table is clipped to the sector") {
  CHECK(cpb::contrast_pipeline({1.0, -1.0, 0.01, 2, 1.0}, 1.0, 5).gap_table.size() == 2);
  CHECK(cpb::contrast_pipeline({1.0, -1.0, 0.01, 20, 10.0}, 5.0, 1).gap_table.size() == 1);
}

TEST_CASE("orthogonal qubit states against a nearly parallel condensate pair") {
  const std::size_t n = 200'000;
  for (double e_j : {-0.001, -0.05}) {
    for (double u : {-1.0, -0.6}) {
      for (double n1 : {1e3, 1e4}) {
        const auto r = cpb::contrast_pipeline({1.0, u, lambda_for(e_j, n), n, 0.5 * static_cast<double>(n)}, n1, 1);
        CHECK(r.effective_overlap <= 1e-10);
        if (r.delta_n <= n1 / 10.0) {
          CHECK(r.condensate_overlap_exact >= 1.0 - r.delta_n * r.delta_n / (8.0 * n1) - 1e-6);
        }
        CHECK(r.condensate_overlap_exact > 0.0);
        CHECK(r.condensate_overlap_exact <= 1.0);
      }
    }
  }
}

TEST_CASE("pipeline rejects an overlap island that cannot host the charge separation") {
  CHECK_THROWS_AS(cpb::contrast_pipeline({1.0, -1.0, 0.0, 1000, 500.0}, 0.25), cpb::InvalidConfig);
  CHECK_THROWS_AS(cpb::contrast_pipeline({1.0, -1.0, 0.0, 1000, 500.0}, 0.0), cpb::InvalidConfig);
}
