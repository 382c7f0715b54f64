#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cpb/two_mode.hpp"

namespace cpb {

/// N pairs with n1 on the island; the two qubit states move delta_n/2 pairs
/// each way. Non-integer n1 and delta_n are allowed.
struct CondensateConfig {
  std::size_t n_total = 1;
  double n1 = 0.5;
  double delta_n = 0.0;

  double n2() const { return static_cast<double>(n_total) - n1; }
};

void validate(const CondensateConfig& cfg);

/// Single-pair amplitudes on the island and reservoir modes.
struct SingleParticleAmps {
  double c1 = 1.0;
  double c2 = 0.0;
};

/// Amplitudes of the "+" state (island holds n1 + delta_n/2) or the "-"
/// state (n1 - delta_n/2).
SingleParticleAmps product_state_amps(const CondensateConfig& cfg, bool plus);

/// Inner product of the two single-pair factors.
double single_particle_overlap(const CondensateConfig& cfg);

struct ExactOverlap {
  double overlap = 1.0;
  double log_overlap = 0.0;
};

/// N-th power of the single-pair overlap, evaluated in log space. The
/// overlap underflows to 0 below exp(-745); log_overlap stays finite unless
/// the two factors are exactly orthogonal.
ExactOverlap overlap_exact(const CondensateConfig& cfg);

struct AsymptoticOverlap {
  double overlap = 1.0;     // exp(-dN^2 / (8 N1))
  double linearized = 1.0;  // 1 - dN^2 / (8 N1), may go negative
};

AsymptoticOverlap overlap_asymptotic(const CondensateConfig& cfg);

/// Expands the N-fold product state over the occupation basis:
/// amplitude[k] = sqrt(binom(N, k)) c1^k c2^(N-k). N is capped at 10^6.
FockVector fock_embedding(std::size_t n_total, const SingleParticleAmps& amps);

struct ConeRow {
  double delta_n = 0.0;
  double overlap_exact = 1.0;
  double overlap_asymptotic = 1.0;
};

struct ThresholdCrossing {
  double threshold = 0.0;
  std::optional<double> delta_n;  // smallest grid value with overlap_exact < threshold
};

struct ConeScan {
  std::vector<ConeRow> rows;
  std::vector<ThresholdCrossing> crossings;
};

ConeScan cone_scan(std::size_t n_total, double n1, std::span<const double> delta_grid,
                   std::span<const double> thresholds);

}  // namespace cpb
