#include "cpb/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpb/condensate.hpp"
#include "cpb/errors.hpp"
#include "linalg_util.hpp"

namespace cpb {

BridgeMap map_parameters(const TwoModeParams& p, bool with_validity) {
  validate(p);
  const double n = static_cast<double>(p.n_total);
  const double product = (n - p.n_bar1) * p.n_bar1;
  if (product < 0.0) {
    throw InvalidParams("mapping needs 0 <= n_bar1 <= n_total (got n_bar1=" +
                        std::to_string(p.n_bar1) + ")");
  }

  BridgeMap out;
  out.e_j = -0.5 * p.lambda * std::sqrt(product);
  out.n_g = -p.u / (2.0 * p.e_c);

  if (with_validity) {
    const Spectrum ground = eigen_lowest(build_two_mode(p), 1);
    const auto obs = two_mode_observables(p, FockVector{ground.eigenvectors->front()});
    BridgeValidity v;
    v.n_scale = std::sqrt(obs.var_n1);
    const double smaller = std::min(p.n_bar1, n - p.n_bar1);
    v.ratio = smaller > 0.0 ? v.n_scale / smaller : std::numeric_limits<double>::infinity();
    out.validity = v;
  }
  return out;
}

EffectiveParams mapped_effective(const TwoModeParams& p) {
  const BridgeMap map = map_parameters(p);
  return EffectiveParams{p.e_c, map.e_j, map.n_g, std::nullopt};
}

std::vector<GapRow> compare_spectra(const TwoModeParams& p, std::size_t k_levels) {
  validate(p);
  if (k_levels < 1) throw InvalidParams("compare needs at least one gap");
  if (k_levels + 1 > p.n_total + 1) {
    throw InvalidParams("sector of " + std::to_string(p.n_total + 1) + " states has fewer than " +
                        std::to_string(k_levels + 1) + " levels");
  }

  const auto two_mode = lowest_eigenvalues(build_two_mode(p), k_levels + 1).eigenvalues;
  const EffectiveParams eff = resolve_truncation(mapped_effective(p), k_levels + 1);
  const TridiagMatrix em = build_effective(eff);
  if (k_levels + 1 > em.size()) throw InvalidParams("too many levels for the charge basis");
  const auto effective = lowest_eigenvalues(em, k_levels + 1).eigenvalues;

  std::vector<GapRow> rows;
  for (std::size_t j = 1; j <= k_levels; ++j) {
    GapRow row;
    row.level = j;
    row.gap_two_mode = two_mode[j] - two_mode[0];
    row.gap_effective = effective[j] - effective[0];
    const double diff = std::abs(row.gap_two_mode - row.gap_effective);
    if (row.gap_effective != 0.0) {
      row.rel_discrepancy = diff / std::abs(row.gap_effective);
    } else {
      row.rel_discrepancy = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    rows.push_back(row);
  }
  return rows;
}

ContrastReport contrast_pipeline(const TwoModeParams& p, double n1_for_overlap,
                                 std::size_t gap_levels) {
  const BridgeMap map = map_parameters(p);
  const QubitPair qubit = qubit_states(EffectiveParams{p.e_c, map.e_j, map.n_g, std::nullopt});

  const CondensateConfig cfg{p.n_total, n1_for_overlap, qubit.delta_n};
  const ExactOverlap exact = overlap_exact(cfg);

  ContrastReport out;
  out.e_j = map.e_j;
  out.n_g = map.n_g;
  out.effective_overlap = std::abs(detail::dot(qubit.v0, qubit.v1));
  out.delta_n = qubit.delta_n;
  out.charge_expectation_gap = qubit.charge_expectation_gap;
  out.n1_for_overlap = n1_for_overlap;
  out.condensate_overlap_exact = exact.overlap;
  out.condensate_log_overlap = exact.log_overlap;
  out.condensate_overlap_asymptotic = overlap_asymptotic(cfg).overlap;
  const std::size_t levels = std::min(gap_levels, p.n_total);
  if (levels > 0) out.gap_table = compare_spectra(p, levels);
  return out;
}

}  // namespace cpb
