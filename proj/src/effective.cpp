#include "cpb/effective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpb/errors.hpp"
#include "linalg_util.hpp"

namespace cpb {

namespace {

constexpr std::size_t kFirstCutoff = 8;
constexpr std::size_t kLastCutoff = 4096;
constexpr double kDegenerateGap = 1e-9;  // in units of E_C

// Charge operator restricted to the span of `vecs`, row-major.
std::vector<double> restricted_charge(std::span<const std::vector<double>> vecs, std::size_t n_max) {
  const std::size_t d = vecs.size();
  std::vector<double> q(d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < vecs[a].size(); ++i) {
        s += charge_of(i, n_max) * vecs[a][i] * vecs[b][i];
      }
      q[a * d + b] = s;
      q[b * d + a] = s;
    }
  }
  return q;
}

std::vector<double> combine(std::span<const std::vector<double>> vecs, std::span<const double> coeffs) {
  std::vector<double> out(vecs.front().size(), 0.0);
  for (std::size_t b = 0; b < vecs.size(); ++b) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs[b] * vecs[b][i];
  }
  return out;
}

double charge_expectation(std::span<const double> v, std::size_t n_max) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += charge_of(i, n_max) * v[i] * v[i];
  return s;
}

// End (exclusive) of the run of levels starting at `first` whose
// consecutive gaps are below `gap`.
std::size_t cluster_end(std::span<const double> values, std::size_t first, double gap) {
  std::size_t end = first + 1;
  while (end < values.size() && values[end] - values[end - 1] < gap) ++end;
  return end;
}

}  // namespace

void validate(const EffectiveParams& p) {
  if (!std::isfinite(p.e_c) || !(p.e_c > 0.0)) throw InvalidParams("e_c must be positive and finite");
  if (!std::isfinite(p.e_j) || !std::isfinite(p.n_g)) throw InvalidParams("e_j and n_g must be finite");
  if (p.n_max && *p.n_max < 1) throw InvalidParams("n_max must be at least 1");
}

TridiagMatrix build_effective(const EffectiveParams& p) {
  validate(p);
  if (!p.n_max) throw InvalidParams("charge truncation n_max is unresolved");
  const std::size_t n_max = *p.n_max;
  const std::size_t dim = 2 * n_max + 1;

  TridiagMatrix m;
  m.diag.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double x = charge_of(i, n_max) - p.n_g;
    m.diag[i] = p.e_c * x * x;
  }
  m.offdiag.assign(dim - 1, -0.5 * p.e_j);
  return m;
}

std::size_t auto_truncation(const EffectiveParams& p, std::size_t k_levels, double tol) {
  validate(p);
  if (k_levels < 1) throw InvalidParams("levels must be positive");
  if (!(tol > 0.0)) throw InvalidParams("truncation tolerance must be positive");

  auto levels_at = [&](std::size_t n_max) {
    EffectiveParams q = p;
    q.n_max = n_max;
    return lowest_eigenvalues(build_effective(q), k_levels).eigenvalues;
  };

  std::size_t n = kFirstCutoff;
  while (2 * n + 1 < k_levels) n *= 2;
  if (n > kLastCutoff) {
    throw TruncationFailure("cannot track " + std::to_string(k_levels) + " levels within n_max " +
                            std::to_string(kLastCutoff));
  }
  std::vector<double> current = levels_at(n);
  for (; n <= kLastCutoff; n *= 2) {
    const std::vector<double> doubled = levels_at(2 * n);
    double change = 0.0;
    for (std::size_t j = 0; j < k_levels; ++j) change = std::max(change, std::abs(doubled[j] - current[j]));
    if (change < tol) return n;
    current = doubled;
  }
  throw TruncationFailure("charge basis not converged at n_max " + std::to_string(kLastCutoff));
}

EffectiveParams resolve_truncation(const EffectiveParams& p, std::size_t k_levels) {
  validate(p);
  if (p.n_max) return p;
  EffectiveParams out = p;
  out.n_max = auto_truncation(p, k_levels + 2, 1e-10 * p.e_c);
  return out;
}

Spectrum effective_spectrum(const EffectiveParams& p, std::size_t k_levels) {
  const EffectiveParams r = resolve_truncation(p, k_levels);
  const TridiagMatrix m = build_effective(r);
  if (k_levels < 1 || k_levels > m.size()) {
    throw InvalidParams("levels must lie in 1.." + std::to_string(m.size()));
  }
  return eigen_lowest(m, k_levels);
}

QubitPair qubit_states(const EffectiveParams& p) {
  const EffectiveParams r = resolve_truncation(p, 2);
  const std::size_t n_max = *r.n_max;
  const TridiagMatrix m = build_effective(r);
  const double gap = kDegenerateGap * r.e_c;

  // Ask for enough levels to see the whole cluster around level 1.
  std::size_t want = std::min<std::size_t>(4, m.size());
  Spectrum solved = eigen_lowest(m, want);
  while (want < m.size() && cluster_end(solved.eigenvalues, 1, gap) >= want) {
    want = std::min(m.size(), 2 * want);
    solved = eigen_lowest(m, want);
  }
  const auto& values = solved.eigenvalues;
  const auto& vecs = *solved.eigenvectors;

  QubitPair out;
  out.n_max = n_max;
  out.e0 = values[0];
  out.e1 = values[1];

  const std::size_t ground_end = cluster_end(values, 0, gap);
  if (ground_end >= 2) {
    const auto cluster = std::span(vecs).first(ground_end);
    const auto q = detail::jacobi_eigen(restricted_charge(cluster, n_max), ground_end);
    out.v0 = combine(cluster, q.vectors[0]);
    out.v1 = combine(cluster, q.vectors[1]);
  } else {
    out.v0 = vecs[0];
    const std::size_t excited_end = cluster_end(values, 1, gap);
    if (excited_end - 1 >= 2) {
      const auto cluster = std::span(vecs).subspan(1, excited_end - 1);
      const auto q = detail::jacobi_eigen(restricted_charge(cluster, n_max), cluster.size());
      const double q0 = charge_expectation(out.v0, n_max);
      const double qmin = q.values.front();
      const double qmax = q.values.back();
      const auto u_min = combine(cluster, q.vectors.front());
      const auto u_max = combine(cluster, q.vectors.back());
      if (q0 <= qmin || qmax - qmin <= 0.0) {
        out.v1 = u_min;
      } else if (q0 >= qmax) {
        out.v1 = u_max;
      } else {
        const double c = std::sqrt((qmax - q0) / (qmax - qmin));
        const double s = std::sqrt((q0 - qmin) / (qmax - qmin));
        out.v1.resize(u_min.size());
        for (std::size_t i = 0; i < u_min.size(); ++i) out.v1[i] = c * u_min[i] + s * u_max[i];
      }
    } else {
      out.v1 = vecs[1];
    }
  }
  detail::normalize(out.v0);
  detail::normalize(out.v1);
  detail::fix_sign(out.v0);
  detail::fix_sign(out.v1);

  const std::vector<std::vector<double>> pair{out.v0, out.v1};
  const auto q = restricted_charge(pair, n_max);
  const double diff = q[3] - q[0];
  out.charge_expectation_gap = std::abs(diff);
  out.delta_n = std::sqrt(diff * diff + 4.0 * q[1] * q[1]);
  return out;
}

std::vector<SweepRow> charge_dispersion_sweep(const EffectiveParams& p, std::span<const double> ng_grid,
                                              std::size_t k_levels) {
  validate(p);
  if (ng_grid.empty()) throw InvalidParams("gate-charge grid is empty");
  if (k_levels < 1) throw InvalidParams("levels must be positive");

  std::vector<SweepRow> rows;
  rows.reserve(ng_grid.size());
  for (double ng : ng_grid) {
    EffectiveParams q = p;
    q.n_g = ng;
    const EffectiveParams r = resolve_truncation(q, k_levels);
    const TridiagMatrix m = build_effective(r);
    if (k_levels > m.size()) throw InvalidParams("more levels requested than charge states");
    rows.push_back({ng, lowest_eigenvalues(m, k_levels).eigenvalues});
  }
  return rows;
}

}  // namespace cpb
