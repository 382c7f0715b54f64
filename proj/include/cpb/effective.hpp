#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cpb/tridiag.hpp"

namespace cpb {

/// Charging energy, Josephson energy and gate charge of the requantized
/// box. Charge states run over -n_max..n_max; an empty n_max means "pick one
/// automatically".
struct EffectiveParams {
  double e_c = 1.0;
  double e_j = 0.0;
  double n_g = 0.0;
  std::optional<std::size_t> n_max;
};

void validate(const EffectiveParams& p);

/// Charge of basis state i, i.e. i - n_max.
inline double charge_of(std::size_t i, std::size_t n_max) {
  return static_cast<double>(i) - static_cast<double>(n_max);
}

/// Charge-basis matrix: E_C (k - n_g)^2 on the diagonal, cos(phi) as
/// nearest-neighbour hopping -E_J/2. Requires an explicit n_max.
TridiagMatrix build_effective(const EffectiveParams& p);

/// Smallest n_max in {8, 16, 32, ...} whose lowest `k_levels` eigenvalues
/// move by less than `tol` when n_max is doubled. Gives up past 4096.
std::size_t auto_truncation(const EffectiveParams& p, std::size_t k_levels, double tol);

/// Copy of `p` with n_max filled in when it was left automatic, tracking
/// k_levels + 2 levels to 1e-10 E_C.
EffectiveParams resolve_truncation(const EffectiveParams& p, std::size_t k_levels);

/// The two lowest eigenstates of the effective model.
///
/// Inside an exactly (to 1e-9 E_C) degenerate ground cluster the pair is
/// rotated to diagonalize the charge, ordered by increasing charge. If only
/// the first excited level is degenerate, v1 is the member of that cluster
/// whose charge expectation is closest to the ground state's.
///
/// delta_n is the charge separation of the qubit: the spread of the charge
/// operator restricted to span{v0, v1}. charge_expectation_gap is the plain
/// |<n>_1 - <n>_0|, which vanishes whenever the two states are related by
/// the charge reflection symmetry.
struct QubitPair {
  double e0 = 0.0;
  double e1 = 0.0;
  std::vector<double> v0;
  std::vector<double> v1;
  double delta_n = 0.0;
  double charge_expectation_gap = 0.0;
  std::size_t n_max = 0;
};

QubitPair qubit_states(const EffectiveParams& p);

/// Lowest k_levels eigenvalues (and vectors) at resolved truncation.
Spectrum effective_spectrum(const EffectiveParams& p, std::size_t k_levels);

struct SweepRow {
  double n_g = 0.0;
  std::vector<double> energies;
};

/// One row per gate charge, in grid order. `p.n_g` is ignored.
std::vector<SweepRow> charge_dispersion_sweep(const EffectiveParams& p,
                                              std::span<const double> ng_grid,
                                              std::size_t k_levels);

}  // namespace cpb
