#include "cpb/condensate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "binomial.hpp"
#include "cpb/errors.hpp"

namespace cpb {

namespace {

constexpr std::size_t kMaxEmbedding = 1'000'000;
constexpr double kUnderflowLog = -745.0;

// sqrt(a^2 - h^2) written to avoid cancellation, and a - sqrt(a^2 - h^2).
struct RootTerm {
  double root;
  double deficit;
};

RootTerm root_term(double a, double half) {
  const double root = std::sqrt((a - half) * (a + half));
  const double deficit = half == 0.0 ? 0.0 : half * half / (a + root);
  return {root, deficit};
}

// Sum of the two deficits, i.e. N (1 - s).
double overlap_deficit(const CondensateConfig& cfg) {
  const double half = 0.5 * cfg.delta_n;
  return root_term(cfg.n1, half).deficit + root_term(cfg.n2(), half).deficit;
}

FockVector embed(std::size_t n_total, double p, double q, bool neg1, bool neg2) {
  const double n = static_cast<double>(n_total);
  FockVector out;
  out.amplitudes.resize(n_total + 1);
  for (std::size_t k = 0; k <= n_total; ++k) {
    const double lp = detail::log_binomial_pmf(static_cast<double>(k), n, p, q);
    double a = std::exp(0.5 * lp);
    const bool negative = (neg1 && (k % 2 == 1)) != (neg2 && ((n_total - k) % 2 == 1));
    out.amplitudes[k] = negative ? -a : a;
  }
  return out;
}

}  // namespace

void validate(const CondensateConfig& cfg) {
  if (cfg.n_total < 1) throw InvalidConfig("n_total must be at least 1");
  if (!std::isfinite(cfg.n1) || !std::isfinite(cfg.delta_n)) {
    throw InvalidConfig("n1 and delta_n must be finite");
  }
  if (!(cfg.n1 > 0.0)) throw InvalidConfig("n1 must be positive");
  if (cfg.delta_n < 0.0) throw InvalidConfig("delta_n must be nonnegative");
  const double half = 0.5 * cfg.delta_n;
  if (cfg.n1 - half < 0.0) {
    throw InvalidConfig("n1 - delta_n/2 is negative (n1=" + std::to_string(cfg.n1) +
                        ", delta_n=" + std::to_string(cfg.delta_n) + ")");
  }
  if (cfg.n2() - half < 0.0) {
    throw InvalidConfig("n_total - n1 - delta_n/2 is negative (n2=" + std::to_string(cfg.n2()) +
                        ", delta_n=" + std::to_string(cfg.delta_n) + ")");
  }
}

SingleParticleAmps product_state_amps(const CondensateConfig& cfg, bool plus) {
  validate(cfg);
  const double half = plus ? 0.5 * cfg.delta_n : -0.5 * cfg.delta_n;
  const double n = static_cast<double>(cfg.n_total);
  return {std::sqrt((cfg.n1 + half) / n), std::sqrt((cfg.n2() - half) / n)};
}

double single_particle_overlap(const CondensateConfig& cfg) {
  validate(cfg);
  const double half = 0.5 * cfg.delta_n;
  return (root_term(cfg.n1, half).root + root_term(cfg.n2(), half).root) /
         static_cast<double>(cfg.n_total);
}

ExactOverlap overlap_exact(const CondensateConfig& cfg) {
  validate(cfg);
  const double n = static_cast<double>(cfg.n_total);
  ExactOverlap out;
  out.log_overlap = n * std::log1p(-overlap_deficit(cfg) / n);
  out.overlap = out.log_overlap < kUnderflowLog ? 0.0 : std::exp(out.log_overlap);
  return out;
}

AsymptoticOverlap overlap_asymptotic(const CondensateConfig& cfg) {
  validate(cfg);
  const double x = cfg.delta_n * cfg.delta_n / (8.0 * cfg.n1);
  return {std::exp(-x), 1.0 - x};
}

FockVector fock_embedding(std::size_t n_total, const SingleParticleAmps& amps) {
  if (n_total < 1) throw InvalidAmps("n_total must be at least 1");
  if (n_total > kMaxEmbedding) {
    throw SizeLimit("fock embedding limited to n_total <= " + std::to_string(kMaxEmbedding));
  }
  if (!std::isfinite(amps.c1) || !std::isfinite(amps.c2)) throw InvalidAmps("amplitudes must be finite");
  const double w1 = amps.c1 * amps.c1;
  const double w2 = amps.c2 * amps.c2;
  const double norm2 = w1 + w2;
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw InvalidAmps("single-pair amplitudes must satisfy c1^2 + c2^2 = 1");
  }
  return embed(n_total, w1 / norm2, w2 / norm2, amps.c1 < 0.0, amps.c2 < 0.0);
}

ConeScan cone_scan(std::size_t n_total, double n1, std::span<const double> delta_grid,
                   std::span<const double> thresholds) {
  for (double t : thresholds) {
    if (!(t > 0.0 && t < 1.0)) throw InvalidConfig("thresholds must lie in (0, 1)");
  }
  ConeScan out;
  out.rows.reserve(delta_grid.size());
  for (double d : delta_grid) {
    const CondensateConfig cfg{n_total, n1, d};
    out.rows.push_back({d, overlap_exact(cfg).overlap, overlap_asymptotic(cfg).overlap});
  }
  for (double t : thresholds) {
    ThresholdCrossing c{t, std::nullopt};
    for (const auto& row : out.rows) {
      if (row.overlap_exact < t && (!c.delta_n || row.delta_n < *c.delta_n)) c.delta_n = row.delta_n;
    }
    out.crossings.push_back(c);
  }
  return out;
}

}  // namespace cpb
