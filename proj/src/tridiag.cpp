#include "cpb/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cpb/errors.hpp"
#include "linalg_util.hpp"

namespace cpb {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

// Steps allowed per eigenvalue; 64-bit doubles halve out long before this.
constexpr int kMaxBisectionSteps = 256;
constexpr int kMaxInverseSteps = 8;

// Contiguous index range [begin, end) with no negligible coupling inside.
struct Block {
  std::size_t begin;
  std::size_t end;
  std::size_t size() const { return end - begin; }
};

double residual_cap(double norm) { return 1e-10 * std::max(1.0, norm); }

std::vector<Block> split_blocks(const TridiagMatrix& m) {
  std::vector<Block> blocks;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    const double e = std::abs(m.offdiag[i]);
    const double scale = std::sqrt(std::abs(m.diag[i])) * std::sqrt(std::abs(m.diag[i + 1]));
    if (e == 0.0 || e <= kEps * scale) {
      blocks.push_back({start, i + 1});
      start = i + 1;
    }
  }
  blocks.push_back({start, m.size()});
  return blocks;
}

// Sturm count restricted to a block; LAPACK-style pivot guard.
std::size_t block_count(const TridiagMatrix& m, const Block& b, double x, double pivmin) {
  std::size_t count = 0;
  double q = m.diag[b.begin] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = b.begin + 1; i < b.end; ++i) {
    const double e = m.offdiag[i - 1];
    q = m.diag[i] - x - e * e / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

double block_norm(const TridiagMatrix& m, const Block& b) {
  double norm = 0.0;
  for (std::size_t i = b.begin; i < b.end; ++i) {
    double row = std::abs(m.diag[i]);
    if (i > b.begin) row += std::abs(m.offdiag[i - 1]);
    if (i + 1 < b.end) row += std::abs(m.offdiag[i]);
    norm = std::max(norm, row);
  }
  return norm;
}

double block_pivmin(const TridiagMatrix& m, const Block& b) {
  double emax = 1.0;
  for (std::size_t i = b.begin; i + 1 < b.end; ++i) {
    emax = std::max(emax, m.offdiag[i] * m.offdiag[i]);
  }
  return kSafeMin * emax;
}

struct BlockValues {
  std::vector<double> values;
  std::vector<double> widths;
  std::size_t steps = 0;
};

// Lowest `want` eigenvalues of one block by bisection. Every probe narrows
// the brackets of all eigenvalues not yet resolved.
BlockValues bisect_block(const TridiagMatrix& m, const Block& b, std::size_t want) {
  BlockValues out;
  if (b.size() == 1) {
    out.values.push_back(m.diag[b.begin]);
    out.widths.push_back(0.0);
    return out;
  }

  const double pivmin = block_pivmin(m, b);
  double glo = std::numeric_limits<double>::infinity();
  double ghi = -glo;
  for (std::size_t i = b.begin; i < b.end; ++i) {
    double radius = 0.0;
    if (i > b.begin) radius += std::abs(m.offdiag[i - 1]);
    if (i + 1 < b.end) radius += std::abs(m.offdiag[i]);
    glo = std::min(glo, m.diag[i] - radius);
    ghi = std::max(ghi, m.diag[i] + radius);
  }
  const double tnorm = std::max(std::abs(glo), std::abs(ghi));
  const double pad = 2.1 * kEps * static_cast<double>(b.size()) * tnorm + 2.1 * pivmin;
  glo -= pad;
  ghi += pad;
  const double abstol = std::max(pivmin, kEps * kEps * tnorm);

  std::vector<double> lower(want, glo);
  std::vector<double> upper(want, ghi);
  for (std::size_t j = 0; j < want; ++j) {
    double lo = lower[j];
    double hi = upper[j];
    for (int step = 0; step < kMaxBisectionSteps; ++step) {
      const double width = hi - lo;
      if (width <= std::max(abstol, 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)))) break;
      const double mid = lo + 0.5 * width;
      if (mid <= lo || mid >= hi) break;
      ++out.steps;
      const std::size_t c = block_count(m, b, mid, pivmin);
      for (std::size_t i = j; i < want; ++i) {
        if (i < c) {
          upper[i] = std::min(upper[i], mid);
        } else {
          lower[i] = std::max(lower[i], mid);
        }
      }
      lo = lower[j];
      hi = upper[j];
      if (step + 1 == kMaxBisectionSteps) {
        throw ConvergenceFailure("bisection did not resolve eigenvalue " + std::to_string(j));
      }
    }
    out.values.push_back(lo + 0.5 * (hi - lo));
    out.widths.push_back(hi - lo);
  }
  return out;
}

// Row-interchange LU of (T - shift I) on a block, for repeated solves.
class ShiftedLU {
 public:
  ShiftedLU(const TridiagMatrix& m, const Block& b, double shift, double tiny)
      : n_(b.size()), sub_(n_, 0.0), diag_(n_), sup_(n_, 0.0), sup2_(n_, 0.0), swapped_(n_, false) {
    for (std::size_t i = 0; i < n_; ++i) diag_[i] = m.diag[b.begin + i] - shift;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      sub_[i] = m.offdiag[b.begin + i];
      sup_[i] = m.offdiag[b.begin + i];
    }
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (std::abs(diag_[i]) >= std::abs(sub_[i])) {
        if (diag_[i] != 0.0) {
          const double f = sub_[i] / diag_[i];
          sub_[i] = f;
          diag_[i + 1] -= f * sup_[i];
        }
      } else {
        const double f = diag_[i] / sub_[i];
        diag_[i] = sub_[i];
        sub_[i] = f;
        const double t = sup_[i];
        sup_[i] = diag_[i + 1];
        diag_[i + 1] = t - f * diag_[i + 1];
        if (i + 2 < n_) {
          sup2_[i] = sup_[i + 1];
          sup_[i + 1] = -f * sup_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    for (auto& p : diag_) {
      if (std::abs(p) < tiny) p = std::copysign(tiny, p);
    }
  }

  void solve(std::vector<double>& x) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (swapped_[i]) {
        const double t = x[i];
        x[i] = x[i + 1];
        x[i + 1] = t - sub_[i] * x[i];
      } else {
        x[i + 1] -= sub_[i] * x[i];
      }
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      double acc = x[ii];
      if (ii + 1 < n_) acc -= sup_[ii] * x[ii + 1];
      if (ii + 2 < n_) acc -= sup2_[ii] * x[ii + 2];
      x[ii] = acc / diag_[ii];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> sub_, diag_, sup_, sup2_;
  std::vector<bool> swapped_;
};

// Deterministic start vector; the offset keeps successive vectors in a
// cluster linearly independent.
std::vector<double> start_vector(std::size_t n, std::size_t which) {
  constexpr double kGolden = 0.6180339887498949;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + 1 + 7919 * which) * kGolden;
    v[i] = (t - std::floor(t)) - 0.5;
  }
  return v;
}

double block_residual(const TridiagMatrix& m, const Block& b, std::span<const double> v,
                      double lambda) {
  double sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::size_t g = b.begin + i;
    double r = (m.diag[g] - lambda) * v[i];
    if (i > 0) r += m.offdiag[g - 1] * v[i - 1];
    if (i + 1 < b.size()) r += m.offdiag[g] * v[i + 1];
    sum += r * r;
  }
  return std::sqrt(sum);
}

// Inverse iteration for sorted eigenvalues of one block. Returns vectors
// supported on the block (local coordinates).
std::vector<std::vector<double>> inverse_iterate(const TridiagMatrix& m, const Block& b,
                                                 std::span<const double> values,
                                                 double global_norm, std::size_t& steps,
                                                 double& worst_residual) {
  const std::size_t n = b.size();
  std::vector<std::vector<double>> vecs;
  if (n == 1) {
    vecs.push_back({1.0});
    return vecs;
  }
  const double bnorm = block_norm(m, b);
  const double ortol = 1e-3 * bnorm;
  const double tiny = kEps * std::max(bnorm, kSafeMin);
  const double cap = residual_cap(global_norm);

  std::size_t cluster_start = 0;
  double prev_shift = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double lambda = values[j];
    double shift = lambda;
    if (j > 0) {
      if (lambda - values[j - 1] > ortol) cluster_start = j;
      const double pertol = 10.0 * kEps * std::max(std::abs(lambda), kEps * bnorm);
      if (shift - prev_shift < pertol) shift = prev_shift + pertol;
    }
    prev_shift = shift;

    const ShiftedLU lu(m, b, shift, tiny);
    std::vector<double> x = start_vector(n, j);
    const auto cluster = std::span(vecs).subspan(cluster_start, j - cluster_start);
    detail::orthogonalize_against(x, cluster);
    detail::normalize(x);

    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxInverseSteps; ++it) {
      ++steps;
      lu.solve(x);
      detail::orthogonalize_against(x, cluster);
      detail::orthogonalize_against(x, cluster);
      if (!detail::normalize(x)) {
        throw ConvergenceFailure("inverse iteration collapsed for eigenvalue " + std::to_string(j));
      }
      const double r = block_residual(m, b, x, lambda);
      const bool settled = it >= 1 && (r <= 8.0 * kEps * std::max(1.0, bnorm) || r >= 0.5 * residual);
      residual = std::min(residual, r);
      if (settled) break;
    }
    if (!(residual <= cap)) {
      throw ConvergenceFailure("inverse iteration residual " + std::to_string(residual) +
                               " exceeds bound for eigenvalue " + std::to_string(j));
    }
    worst_residual = std::max(worst_residual, residual);
    vecs.push_back(std::move(x));
  }
  return vecs;
}

struct Candidate {
  double value;
  double width;
  std::size_t block;
  std::size_t local;
};

// The k smallest across all blocks, ties broken by position for determinism.
std::vector<Candidate> select_lowest(const TridiagMatrix& m, const std::vector<Block>& blocks,
                                     std::size_t k, std::vector<BlockValues>& per_block) {
  std::vector<Candidate> all;
  per_block.clear();
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    per_block.push_back(bisect_block(m, blocks[bi], std::min(k, blocks[bi].size())));
    for (std::size_t j = 0; j < per_block.back().values.size(); ++j) {
      all.push_back({per_block.back().values[j], per_block.back().widths[j], bi, j});
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  all.resize(k);
  return all;
}

// Largest ||T v - lambda v|| over the pairs, plus the rounding committed in
// evaluating it, so the result bounds the exact residual.
double measured_residual(const TridiagMatrix& m, std::span<const double> values,
                         std::span<const std::vector<double>> vecs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const auto hv = m.apply(vecs[i]);
    double sum = 0.0;
    for (std::size_t k = 0; k < hv.size(); ++k) {
      const double r = hv[k] - values[i] * vecs[i][k];
      sum += r * r;
    }
    worst = std::max(worst, std::sqrt(sum));
  }
  return worst + 4.0 * kEps * m.norm_inf();
}

void check_k(const TridiagMatrix& m, std::size_t k) {
  if (k < 1 || k > m.size()) {
    throw InvalidMatrix("requested " + std::to_string(k) + " eigenvalues of a " +
                        std::to_string(m.size()) + "x" + std::to_string(m.size()) + " matrix");
  }
}

}  // namespace

void TridiagMatrix::validate() const {
  if (diag.empty()) throw InvalidMatrix("matrix must have at least one row");
  if (offdiag.size() + 1 != diag.size()) {
    throw InvalidMatrix("offdiag length " + std::to_string(offdiag.size()) +
                        " does not match diag length " + std::to_string(diag.size()));
  }
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(diag.begin(), diag.end(), finite) ||
      !std::all_of(offdiag.begin(), offdiag.end(), finite)) {
    throw InvalidMatrix("matrix entries must be finite");
  }
}

double TridiagMatrix::norm_inf() const {
  return block_norm(*this, Block{0, size()});
}

std::vector<double> TridiagMatrix::apply(std::span<const double> x) const {
  if (x.size() != size()) throw DimensionMismatch("vector length does not match matrix");
  std::vector<double> y(size());
  for (std::size_t i = 0; i < size(); ++i) {
    double acc = diag[i] * x[i];
    if (i > 0) acc += offdiag[i - 1] * x[i - 1];
    if (i + 1 < size()) acc += offdiag[i] * x[i + 1];
    y[i] = acc;
  }
  return y;
}

std::size_t sturm_count(const TridiagMatrix& m, double x) {
  m.validate();
  std::size_t count = 0;
  for (const Block& b : split_blocks(m)) {
    count += block_count(m, b, x, block_pivmin(m, b));
  }
  return count;
}

Spectrum eigen_all(const TridiagMatrix& m, bool want_vectors, const SolverOptions& opts) {
  m.validate();
  const std::size_t n = m.size();
  const double norm = m.norm_inf();

  std::vector<double> d = m.diag;
  std::vector<double> e(n, 0.0);
  std::copy(m.offdiag.begin(), m.offdiag.end(), e.begin());

  // z[i] is eigenvector i (a column of the accumulated rotation).
  std::vector<std::vector<double>> z;
  if (want_vectors) {
    z.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) z[i][i] = 1.0;
  }

  Spectrum out;
  double shift_sum = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t mm = l;
    while (mm + 1 < n && std::abs(e[mm]) > kEps * tst1) ++mm;

    if (mm > l) {
      int sweeps = 0;
      do {
        if (++sweeps > opts.max_sweeps) {
          throw ConvergenceFailure("QL iteration exceeded " + std::to_string(opts.max_sweeps) +
                                   " sweeps at eigenvalue " + std::to_string(l));
        }
        ++out.iterations;

        // Wilkinson-style implicit shift from the leading 2x2.
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0.0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        shift_sum += h;

        p = d[mm];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = mm; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (want_vectors) {
            auto& zi = z[ii];
            auto& zj = z[ii + 1];
            for (std::size_t k = 0; k < n; ++k) {
              const double t = zj[k];
              zj[k] = s * zi[k] + c * t;
              zi[k] = c * zi[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kEps * tst1);
    }
    d[l] += shift_sum;
    e[l] = 0.0;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  out.eigenvalues.reserve(n);
  for (std::size_t i : order) out.eigenvalues.push_back(d[i]);

  if (!want_vectors) {
    out.residual_bound = 2.0 * static_cast<double>(n) * kEps * std::max(1.0, norm);
    return out;
  }

  std::vector<std::vector<double>> vecs;
  vecs.reserve(n);
  for (std::size_t i : order) vecs.push_back(std::move(z[i]));
  detail::reorthogonalize_clusters(out.eigenvalues, vecs, opts.cluster_tol * std::max(1.0, norm));
  for (auto& v : vecs) detail::fix_sign(v);

  out.residual_bound = measured_residual(m, out.eigenvalues, vecs);
  if (out.residual_bound > residual_cap(norm)) {
    throw ConvergenceFailure("eigenvector residual " + std::to_string(out.residual_bound) +
                             " exceeds bound");
  }
  out.eigenvectors = std::move(vecs);
  return out;
}

Spectrum lowest_eigenvalues(const TridiagMatrix& m, std::size_t k, const SolverOptions&) {
  m.validate();
  check_k(m, k);
  const auto blocks = split_blocks(m);
  std::vector<BlockValues> per_block;
  const auto chosen = select_lowest(m, blocks, k, per_block);

  Spectrum out;
  for (const auto& bv : per_block) out.iterations += bv.steps;
  for (const auto& c : chosen) {
    out.eigenvalues.push_back(c.value);
    out.residual_bound =
        std::max(out.residual_bound, c.width + 2.0 * kEps * std::abs(c.value));
  }
  return out;
}

Spectrum eigen_lowest(const TridiagMatrix& m, std::size_t k, const SolverOptions& opts) {
  m.validate();
  check_k(m, k);
  if (k == m.size()) return eigen_all(m, true, opts);

  const double norm = m.norm_inf();
  const auto blocks = split_blocks(m);
  std::vector<BlockValues> per_block;
  const auto chosen = select_lowest(m, blocks, k, per_block);

  Spectrum out;
  for (const auto& bv : per_block) out.iterations += bv.steps;

  // How many of each block's lowest eigenvalues were selected.
  std::vector<std::size_t> used(blocks.size(), 0);
  for (const auto& c : chosen) used[c.block] = std::max(used[c.block], c.local + 1);

  std::vector<std::vector<std::vector<double>>> local_vecs(blocks.size());
  double worst = 0.0;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    if (used[bi] == 0) continue;
    const auto vals = std::span(per_block[bi].values).first(used[bi]);
    local_vecs[bi] = inverse_iterate(m, blocks[bi], vals, norm, out.iterations, worst);
  }

  std::vector<std::vector<double>> vecs;
  vecs.reserve(k);
  for (const auto& c : chosen) {
    out.eigenvalues.push_back(c.value);
    std::vector<double> v(m.size(), 0.0);
    const auto& lv = local_vecs[c.block][c.local];
    std::copy(lv.begin(), lv.end(), v.begin() + static_cast<std::ptrdiff_t>(blocks[c.block].begin));
    vecs.push_back(std::move(v));
  }
  detail::reorthogonalize_clusters(out.eigenvalues, vecs, opts.cluster_tol * std::max(1.0, norm));
  for (auto& v : vecs) detail::fix_sign(v);

  out.residual_bound = std::max(worst, measured_residual(m, out.eigenvalues, vecs));
  if (out.residual_bound > residual_cap(norm)) {
    throw ConvergenceFailure("eigenvector residual " + std::to_string(out.residual_bound) +
                             " exceeds bound");
  }
  out.eigenvectors = std::move(vecs);
  return out;
}

}  // namespace cpb
