#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cpb/effective.hpp"
#include "cpb/two_mode.hpp"

namespace cpb {

/// How far the two-mode ground state strays from n_bar1, relative to the
/// smaller electrode occupation. The phase picture needs ratio << 1.
struct BridgeValidity {
  double n_scale = 0.0;  // sqrt(Var n1) in the two-mode ground state
  double ratio = 0.0;    // n_scale / min(n_bar1, N - n_bar1)
};

struct BridgeMap {
  double e_j = 0.0;
  double n_g = 0.0;
  std::optional<BridgeValidity> validity;
};

/// E_J = -(lambda/2) sqrt((N - n_bar1) n_bar1) and n_g = -U / (2 E_C).
/// Requires 0 <= n_bar1 <= N. The validity block costs one ground-state
/// solve of the sector matrix, so it is opt-in.
BridgeMap map_parameters(const TwoModeParams& p, bool with_validity = false);

/// Effective-model parameters (automatic truncation) for a two-mode setup.
EffectiveParams mapped_effective(const TwoModeParams& p);

struct GapRow {
  std::size_t level = 0;
  double gap_two_mode = 0.0;
  double gap_effective = 0.0;
  double rel_discrepancy = 0.0;  // |two_mode - effective| / |effective|
};

/// Excitation gaps E_j - E_0, j = 1..k_levels, of both models side by side.
std::vector<GapRow> compare_spectra(const TwoModeParams& p, std::size_t k_levels);

struct ContrastReport {
  double e_j = 0.0;
  double n_g = 0.0;
  double effective_overlap = 0.0;  // |<v0|v1>| of the effective qubit pair
  double delta_n = 0.0;
  double charge_expectation_gap = 0.0;
  double n1_for_overlap = 0.0;
  double condensate_overlap_exact = 1.0;
  double condensate_log_overlap = 0.0;
  double condensate_overlap_asymptotic = 1.0;
  std::vector<GapRow> gap_table;
};

/// Qubit pair of the mapped effective model, its charge separation fed into
/// the condensate overlap for an island holding n1_for_overlap pairs, plus
/// the gap comparison (gap_levels rows, clipped to the sector size).
ContrastReport contrast_pipeline(const TwoModeParams& p, double n1_for_overlap,
                                 std::size_t gap_levels = 3);

}  // namespace cpb
