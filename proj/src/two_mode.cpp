#include "cpb/two_mode.hpp"

#include <cmath>

#include "cpb/errors.hpp"

namespace cpb {

std::vector<std::string> validate(const TwoModeParams& p) {
  if (p.n_total < 1) throw InvalidParams("n_total must be at least 1");
  if (!std::isfinite(p.e_c) || !(p.e_c > 0.0)) throw InvalidParams("e_c must be positive and finite");
  if (!std::isfinite(p.u) || !std::isfinite(p.lambda) || !std::isfinite(p.n_bar1)) {
    throw InvalidParams("two-mode parameters must be finite");
  }
  if (p.n_bar1 < 0.0) throw InvalidParams("n_bar1 must be nonnegative");

  std::vector<std::string> warnings;
  if (p.n_bar1 > static_cast<double>(p.n_total)) {
    warnings.push_back("n_bar1 exceeds n_total; the reference occupation is unreachable");
  }
  return warnings;
}

TridiagMatrix build_two_mode(const TwoModeParams& p) {
  validate(p);
  const std::size_t n = p.n_total;
  const double nd = static_cast<double>(n);

  TridiagMatrix m;
  m.diag.resize(n + 1);
  m.offdiag.resize(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double x = kd - p.n_bar1;
    m.diag[k] = p.e_c * x * x + 0.5 * p.u * (2.0 * kd - nd);
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    m.offdiag[k - 1] = 0.5 * p.lambda * std::sqrt(kd * (nd - kd + 1.0));
  }
  return m;
}

TwoModeObservables two_mode_observables(const TwoModeParams& p, const FockVector& state) {
  validate(p);
  const auto& a = state.amplitudes;
  if (a.size() != p.n_total + 1) {
    throw DimensionMismatch("state has " + std::to_string(a.size()) + " amplitudes, sector needs " +
                            std::to_string(p.n_total + 1));
  }
  double norm2 = 0.0;
  for (double x : a) norm2 += x * x;
  if (std::abs(norm2 - 1.0) > 1e-10) throw DimensionMismatch("state is not normalized");

  const double nd = static_cast<double>(p.n_total);
  TwoModeObservables obs;
  double second = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double kd = static_cast<double>(k);
    const double w = a[k] * a[k];
    obs.mean_n1 += kd * w;
    second += kd * kd * w;
    if (k + 1 < a.size()) obs.coherence += a[k] * a[k + 1] * std::sqrt((kd + 1.0) * (nd - kd));
  }
  obs.var_n1 = std::max(0.0, second - obs.mean_n1 * obs.mean_n1);
  return obs;
}

Spectrum two_mode_spectrum(const TwoModeParams& p, std::size_t k_levels) {
  const TridiagMatrix m = build_two_mode(p);
  if (k_levels < 1 || k_levels > m.size()) {
    throw InvalidParams("levels must lie in 1.." + std::to_string(m.size()));
  }
  return eigen_lowest(m, k_levels);
}

}  // namespace cpb
