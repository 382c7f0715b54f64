#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cpb/tridiag.hpp"

namespace cpb {

/// Island/reservoir pair with a charging term, a bias and pair tunneling,
/// restricted to a fixed total number of pairs.
struct TwoModeParams {
  double e_c = 1.0;     // charging energy
  double u = 0.0;       // bias potential between the electrodes
  double lambda = 0.0;  // tunneling amplitude
  std::size_t n_total = 1;
  double n_bar1 = 0.0;  // background island occupation
};

/// Throws InvalidParams on hard violations and returns soft warnings
/// (currently only n_bar1 > n_total).
std::vector<std::string> validate(const TwoModeParams& p);

/// Amplitudes over the occupation basis: index k means k pairs on the
/// island and n_total - k in the reservoir.
struct FockVector {
  std::vector<double> amplitudes;

  std::size_t n_total() const { return amplitudes.empty() ? 0 : amplitudes.size() - 1; }
};

struct TwoModeObservables {
  double mean_n1 = 0.0;
  double var_n1 = 0.0;
  double coherence = 0.0;  // <a1^dagger a2>
};

/// (N+1)x(N+1) sector matrix; diagonal is the charging plus bias energy of
/// each occupation, the off-diagonal is the pair hopping k-1 <-> k.
TridiagMatrix build_two_mode(const TwoModeParams& p);

TwoModeObservables two_mode_observables(const TwoModeParams& p, const FockVector& state);

Spectrum two_mode_spectrum(const TwoModeParams& p, std::size_t k_levels);

}  // namespace cpb
