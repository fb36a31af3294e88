#include "usd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "usd/errors.hpp"
#include "usd/numcore.hpp"
#include "usd/rng.hpp"

namespace usd {

namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
  return threads <= 0 ? omp_get_max_threads() : threads;
#else
  (void)threads;
  return 1;
#endif
}

// Coordinates of the reciprocal states in the orthonormal span basis; unit
// vectors in C^n, so every operator below lives on n x n matrices no matter
// how large the ambient dimension is.
std::vector<std::vector<cxd>> span_coordinates(const ReciprocalSet& recip) {
  const std::size_t n = recip.n();
  const std::size_t d = recip.ambient_dim();
  std::vector<std::vector<cxd>> rho(n, std::vector<cxd>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto& r = recip.reciprocals[j].amplitudes();
    for (std::size_t m = 0; m < n; ++m) {
      cxd acc = 0.0;
      for (std::size_t row = 0; row < d; ++row)
        acc += std::conj(recip.span_basis(row, m)) * r[row];
      rho[j][m] = acc;
    }
  }
  return rho;
}

// q_j rho_j rho_j^+ as flat n*n buffers (row major).
std::vector<std::vector<cxd>> weighted_projectors(
    const ReciprocalSet& recip, const std::vector<std::vector<cxd>>& rho) {
  const std::size_t n = recip.n();
  std::vector<std::vector<cxd>> m(n, std::vector<cxd>(n * n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        m[j][a * n + b] = recip.weights[j] * rho[j][a] * std::conj(rho[j][b]);
  return m;
}

// ---------------------------------------------------------------------------
// Fast largest-eigenvalue kernels for the oracle's grid scan.

double lambda_max_2x2(const cxd* a) {
  const double d0 = a[0].real();
  const double d1 = a[3].real();
  return 0.5 * (d0 + d1) + std::hypot(0.5 * (d0 - d1), std::abs(a[1]));
}

// Trigonometric solution of the characteristic cubic for Hermitian 3x3.
double lambda_max_3x3(const cxd* a) {
  const double d0 = a[0].real(), d1 = a[4].real(), d2 = a[8].real();
  const cxd x = a[1], y = a[2], z = a[5];
  const double q = (d0 + d1 + d2) / 3.0;
  const double p1 = std::norm(x) + std::norm(y) + std::norm(z);
  const double p2 = (d0 - q) * (d0 - q) + (d1 - q) * (d1 - q) +
                    (d2 - q) * (d2 - q) + 2.0 * p1;
  if (p2 <= 1e-300) return q;
  const double p = std::sqrt(p2 / 6.0);
  const double b0 = (d0 - q) / p, b1 = (d1 - q) / p, b2 = (d2 - q) / p;
  const cxd bx = x / p, by = y / p, bz = z / p;
  const double det = b0 * b1 * b2 + 2.0 * (bx * bz * std::conj(by)).real() -
                     b0 * std::norm(bz) - b2 * std::norm(bx) -
                     b1 * std::norm(by);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  return q + 2.0 * p * std::cos(std::acos(r) / 3.0);
}

double lambda_max_small(std::size_t n, const cxd* a) {
  switch (n) {
    case 1:
      return a[0].real();
    case 2:
      return lambda_max_2x2(a);
    case 3:
      return lambda_max_3x3(a);
    default: {
      ComplexMatrix m(n, n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = a[r * n + c];
      return hermitian_eig(m).eigenvalues.back();
    }
  }
}

// ---------------------------------------------------------------------------
// Small dense real solver for the Newton systems (n <= a few dozen).

std::vector<double> solve_real(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (std::abs(a[pivot * n + col]) < 1e-300)
      throw NoConvergence("optimize_general: singular Newton system");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c)
        std::swap(a[pivot * n + c], a[col * n + c]);
      std::swap(b[pivot], b[col]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ri = n; ri-- > 0;) {
    double acc = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) acc -= a[ri * n + c] * x[c];
    x[ri] = acc / a[ri * n + ri];
  }
  return x;
}

// ---------------------------------------------------------------------------
// Interior-point machinery for optimize_general.

struct BarrierProblem {
  std::size_t n = 0;
  std::vector<double> eta;
  std::vector<double> q;
  std::vector<std::vector<cxd>> rho;

  ComplexMatrix slack_matrix(const std::vector<double>& p) const {
    ComplexMatrix s = ComplexMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = p[j] * q[j];
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          s(a, b) -= w * rho[j][a] * std::conj(rho[j][b]);
    }
    return s;
  }

  double lambda(const std::vector<double>& p) const {
    ComplexMatrix pi(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = p[j] * q[j];
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          pi(a, b) += w * rho[j][a] * std::conj(rho[j][b]);
    }
    return hermitian_eig(pi).eigenvalues.back();
  }

  // f_mu and its validity (false outside the domain).
  bool value(const std::vector<double>& p, double mu, double& f) const {
    double logdet = 0.0;
    const HermitianEig eig = hermitian_eig(slack_matrix(p));
    for (double lam : eig.eigenvalues) {
      if (lam <= 0.0) return false;
      logdet += std::log(lam);
    }
    double boxes = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (p[j] <= 0.0 || p[j] >= 1.0) return false;
      boxes += std::log(p[j]) + std::log(1.0 - p[j]);
    }
    f = 0.0;
    for (std::size_t j = 0; j < n; ++j) f += eta[j] * p[j];
    f += mu * (logdet + boxes);
    return true;
  }
};

}  // namespace

std::string to_string(OptMethod method) {
  switch (method) {
    case OptMethod::kTwoStateClosedForm:
      return "two-state-closed-form";
    case OptMethod::kEqualP:
      return "equal-p";
    case OptMethod::kGeneralIterative:
      return "general-iterative";
    case OptMethod::kGridOracle:
      return "grid-oracle";
  }
  return "unknown";
}

double idp_bound(const StateEnsemble& ensemble) {
  if (ensemble.n() != 2)
    throw WrongArity("idp_bound: defined for exactly two states");
  return std::abs(inner(ensemble.states[0], ensemble.states[1]));
}

double error_tradeoff(double inconclusive_prob, double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0))
    throw DomainError("error_tradeoff: overlap must lie in [0, 1]");
  if (!(inconclusive_prob >= 0.0) || inconclusive_prob > overlap + 1e-12)
    throw DomainError("error_tradeoff: P_I must lie in [0, overlap]");
  const double u = 1.0 - inconclusive_prob;
  const double v = overlap - inconclusive_prob;
  const double disc = std::max(0.0, u * u - v * v);
  return 0.5 * (u - std::sqrt(disc));
}

double helstrom_bound(double overlap) { return error_tradeoff(0.0, overlap); }

OptimizationResult jaeger_shimony(const StateEnsemble& ensemble) {
  if (ensemble.n() != 2)
    throw WrongArity("jaeger_shimony: defined for exactly two states");
  const double overlap = idp_bound(ensemble);

  // Relabel so state `a` carries the larger prior.
  const std::size_t a = ensemble.priors[0] >= ensemble.priors[1] ? 0 : 1;
  const std::size_t b = 1 - a;
  const double eta_a = ensemble.priors[a];
  const double eta_b = ensemble.priors[b];

  OptimizationResult result;
  result.method = OptMethod::kTwoStateClosedForm;
  result.cond_probs.assign(2, 0.0);
  if (overlap == 0.0) {
    result.cond_probs = {1.0, 1.0};
    result.inconclusive_prob = 0.0;
  } else if (std::sqrt(eta_b / eta_a) >= overlap) {
    result.cond_probs[a] = 1.0 - overlap * std::sqrt(eta_b / eta_a);
    result.cond_probs[b] = 1.0 - overlap * std::sqrt(eta_a / eta_b);
    result.inconclusive_prob = 2.0 * std::sqrt(eta_a * eta_b) * overlap;
  } else {
    // von Neumann regime: the less likely state is never detected.
    result.cond_probs[a] = 1.0 - overlap * overlap;
    result.cond_probs[b] = 0.0;
    result.inconclusive_prob = eta_a * overlap * overlap + eta_b;
  }
  result.discrimination_prob = 1.0 - result.inconclusive_prob;

  if (check_independence(ensemble).independent) {
    result.boundary_eigenvalue =
        probability_operator(reciprocal_states(ensemble), result.cond_probs)
            .max_eigenvalue;
  } else {
    // Parallel states: nothing is ever detected and Pi vanishes.
    result.boundary_eigenvalue = 0.0;
  }
  return result;
}

OptimizationResult equal_p_solution(const ReciprocalSet& recip) {
  std::vector<double> ones(recip.n(), 1.0);
  const ProbabilityOperator t = probability_operator(recip, ones);
  const double p = std::min(1.0, 1.0 / t.max_eigenvalue);

  OptimizationResult result;
  result.method = OptMethod::kEqualP;
  result.cond_probs.assign(recip.n(), p);
  result.discrimination_prob = p;
  result.inconclusive_prob = 1.0 - p;
  result.boundary_eigenvalue =
      probability_operator(recip, result.cond_probs).max_eigenvalue;
  return result;
}

OptimizationResult optimize_general(const StateEnsemble& ensemble,
                                    double independence_tol) {
  const ReciprocalSet recip = reciprocal_states(ensemble, independence_tol);
  const std::size_t n = ensemble.n();

  BarrierProblem prob;
  prob.n = n;
  prob.eta = ensemble.priors;
  prob.q = recip.weights;
  prob.rho = span_coordinates(recip);

  // Strictly interior start: uniform P at half the feasible equal-P level.
  std::vector<double> p(n);
  {
    std::vector<double> ones(n, 1.0);
    const double lam1 = prob.lambda(ones);
    const double t0 = std::min(0.25, 0.5 / lam1);
    std::fill(p.begin(), p.end(), t0);
  }

  // Path-following: damped Newton on the log-barrier for a decreasing mu.
  for (double mu = 0.25; mu >= 1e-12; mu *= 0.1) {
    for (int it = 0; it < 40; ++it) {
      const HermitianEig seig = hermitian_eig(prob.slack_matrix(p));
      if (seig.eigenvalues.front() <= 0.0)
        throw NoConvergence("optimize_general: iterate left the domain");

      // T_jk = rho_j^+ S^-1 rho_k via the eigendecomposition of S.
      std::vector<cxd> c(n * n);  // c[j][m] = <rho_j, w_m>
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = 0; m < n; ++m) {
          cxd acc = 0.0;
          for (std::size_t r = 0; r < n; ++r)
            acc += std::conj(prob.rho[j][r]) * seig.eigenvectors(r, m);
          c[j * n + m] = acc;
        }
      std::vector<cxd> t(n * n);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          cxd acc = 0.0;
          for (std::size_t m = 0; m < n; ++m)
            acc += c[j * n + m] * std::conj(c[k * n + m]) / seig.eigenvalues[m];
          t[j * n + k] = acc;
        }

      std::vector<double> grad(n);
      std::vector<double> hess(n * n);
      for (std::size_t j = 0; j < n; ++j) {
        grad[j] = prob.eta[j] +
                  mu * (-prob.q[j] * t[j * n + j].real() + 1.0 / p[j] -
                        1.0 / (1.0 - p[j]));
        for (std::size_t k = 0; k < n; ++k)
          hess[j * n + k] =
              -mu * prob.q[j] * prob.q[k] * std::norm(t[j * n + k]);
        hess[j * n + j] -=
            mu * (1.0 / (p[j] * p[j]) + 1.0 / ((1.0 - p[j]) * (1.0 - p[j])));
      }

      std::vector<double> rhs(n);
      for (std::size_t j = 0; j < n; ++j) rhs[j] = -grad[j];
      const std::vector<double> step = solve_real(hess, rhs);

      double f0 = 0.0;
      prob.value(p, mu, f0);

      // The Newton decrement bounds the remaining improvement; once it sinks
      // to the rounding plateau of f there is nothing left to gain.
      double dec2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) dec2 += grad[j] * step[j];
      if (!(dec2 > 1e-15 * (1.0 + std::abs(f0)))) break;

      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 45; ++ls) {
        std::vector<double> trial(n);
        for (std::size_t j = 0; j < n; ++j) trial[j] = p[j] + alpha * step[j];
        double f1 = 0.0;
        if (prob.value(trial, mu, f1) && f1 >= f0 + 0.01 * alpha * dec2) {
          p = std::move(trial);
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
  }

  // The optimum sits on the lambda = 1 boundary (or the all-ones corner);
  // rescaling along the ray through p only improves the objective.
  for (int round = 0; round < 5; ++round) {
    const double lam = prob.lambda(p);
    if (lam <= 0.0 || std::abs(lam - 1.0) <= 1e-13) break;
    for (std::size_t j = 0; j < n; ++j)
      p[j] = std::clamp(p[j] / lam, 0.0, 1.0);
  }

  OptimizationResult result;
  result.method = OptMethod::kGeneralIterative;
  result.cond_probs = p;
  result.discrimination_prob = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    result.discrimination_prob += prob.eta[j] * p[j];
  result.inconclusive_prob = 1.0 - result.discrimination_prob;
  result.boundary_eigenvalue = prob.lambda(p);
  return result;
}

// ---------------------------------------------------------------------------
// Grid oracle.

namespace {

struct GridContext {
  std::size_t n = 0;
  int last = 0;  // grid indices run 0..last
  double res = 0.0;
  std::vector<double> eta;
  std::vector<std::vector<cxd>> m;  // weighted projectors, flat n*n

  double value(int idx) const { return std::min(1.0, idx * res); }
};

struct GridBest {
  double pd = -1.0;
  std::vector<int> idx;
};

// Higher P_D wins; exact ties resolve to the lexicographically smallest
// index vector so that serial and parallel scans agree bit for bit.
void merge_best(GridBest& into, const GridBest& cand) {
  if (cand.pd < 0.0) return;
  if (into.pd < 0.0) {
    into = cand;
    return;
  }
  if (cand.pd > into.pd || (cand.pd == into.pd && cand.idx < into.idx))
    into = cand;
}

// Scans rows [row_begin, row_end) of the plane spanned by the last two axes,
// with the first n-2 coordinates fixed. lambda is monotone in every
// coordinate, so the largest feasible last index can only decrease as the
// row index grows; the scan walks that frontier.
void scan_plane_rows(const GridContext& g, const std::vector<int>& outer,
                     const std::vector<cxd>& pi_outer, int row_begin,
                     int row_end, GridBest& best) {
  const std::size_t nn = g.n * g.n;
  const std::size_t row_axis = g.n - 2;
  const std::size_t col_axis = g.n - 1;
  std::vector<cxd> pi_row(nn), pi_full(nn);

  double outer_pd = 0.0;
  for (std::size_t j = 0; j + 2 < g.n; ++j) outer_pd += g.eta[j] * g.value(outer[j]);

  int t = g.last;
  for (int row = row_begin; row < row_end && t >= 0; ++row) {
    const double rv = g.value(row);
    for (std::size_t i = 0; i < nn; ++i)
      pi_row[i] = pi_outer[i] + rv * g.m[row_axis][i];

    while (t >= 0) {
      const double cv = g.value(t);
      for (std::size_t i = 0; i < nn; ++i)
        pi_full[i] = pi_row[i] + cv * g.m[col_axis][i];
      if (lambda_max_small(g.n, pi_full.data()) <= 1.0 + 1e-9) break;
      --t;
    }
    if (t < 0) break;

    GridBest cand;
    cand.pd = outer_pd + g.eta[row_axis] * rv + g.eta[col_axis] * g.value(t);
    cand.idx = outer;
    cand.idx.push_back(row);
    cand.idx.push_back(t);
    merge_best(best, cand);
  }
}

std::vector<int> decode_outer(std::uint64_t item, std::size_t axes, int base) {
  std::vector<int> idx(axes);
  for (std::size_t j = 0; j < axes; ++j) {
    idx[axes - 1 - j] = static_cast<int>(item % base);
    item /= base;
  }
  return idx;
}

}  // namespace

OptimizationResult grid_oracle(const StateEnsemble& ensemble, double resolution,
                               int threads, double independence_tol) {
  const std::size_t n = ensemble.n();
  if (n > 4)
    throw TooLarge("grid_oracle: n = " + std::to_string(n) +
                   " exceeds the n <= 4 brute-force limit");
  if (!(resolution > 0.0 && resolution <= 1.0))
    throw DomainError("grid_oracle: resolution must lie in (0, 1]");

  const ReciprocalSet recip = reciprocal_states(ensemble, independence_tol);
  GridContext g;
  g.n = n;
  // ceil so the grid always reaches the corner P_j = 1 (value() clamps)
  g.last = std::max(1, static_cast<int>(std::ceil(1.0 / resolution - 1e-9)));
  g.res = resolution;
  g.eta = ensemble.priors;
  g.m = weighted_projectors(recip, span_coordinates(recip));

  GridBest best;

  if (n == 1) {
    const double q0 = g.m[0][0].real();
    int t = g.last;
    while (t > 0 && g.value(t) * q0 > 1.0 + 1e-9) --t;
    best.pd = g.eta[0] * g.value(t);
    best.idx = {t};
  } else {
    const int nthreads = resolve_threads(threads);
    const std::size_t outer_axes = n - 2;
    std::uint64_t planes = 1;
    for (std::size_t j = 0; j < outer_axes; ++j)
      planes *= static_cast<std::uint64_t>(g.last + 1);

    // One work item per plane; a lone plane (n = 2) is split into row chunks
    // so the parallel path has something to chew on.
    int chunks = 1;
    if (planes == 1 && nthreads > 1)
      chunks = std::min(g.last + 1, nthreads * 4);
    const int rows_per_chunk = (g.last + 1 + chunks - 1) / chunks;
    const std::uint64_t items = planes * static_cast<std::uint64_t>(chunks);

    const auto process_item = [&](std::uint64_t item, GridBest& acc) {
      const std::uint64_t plane = item / chunks;
      const int chunk = static_cast<int>(item % chunks);
      const std::vector<int> outer = decode_outer(plane, outer_axes, g.last + 1);
      std::vector<cxd> pi_outer(g.n * g.n, cxd{});
      for (std::size_t j = 0; j < outer_axes; ++j) {
        const double v = g.value(outer[j]);
        for (std::size_t i = 0; i < g.n * g.n; ++i) pi_outer[i] += v * g.m[j][i];
      }
      scan_plane_rows(g, outer, pi_outer, chunk * rows_per_chunk,
                      std::min(g.last + 1, (chunk + 1) * rows_per_chunk), acc);
    };

#ifdef _OPENMP
    if (nthreads > 1) {
#pragma omp parallel num_threads(nthreads)
      {
        GridBest local;
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t item = 0; item < static_cast<std::int64_t>(items);
             ++item)
          process_item(static_cast<std::uint64_t>(item), local);
#pragma omp critical(usd_grid_oracle_merge)
        merge_best(best, local);
      }
    } else {
      for (std::uint64_t item = 0; item < items; ++item)
        process_item(item, best);
    }
#else
    for (std::uint64_t item = 0; item < items; ++item) process_item(item, best);
#endif
  }

  OptimizationResult result;
  result.method = OptMethod::kGridOracle;
  result.cond_probs.resize(n);
  for (std::size_t j = 0; j < n; ++j) result.cond_probs[j] = g.value(best.idx[j]);
  result.discrimination_prob = best.pd;
  result.inconclusive_prob = 1.0 - best.pd;
  result.boundary_eigenvalue =
      probability_operator(recip, result.cond_probs).max_eigenvalue;
  return result;
}

// ---------------------------------------------------------------------------
// Appendix machinery: embeddings into a larger space.

ComplexMatrix complement_basis(const ReciprocalSet& recip,
                               std::size_t extra_dims) {
  const std::size_t n = recip.n();
  const std::size_t d = recip.ambient_dim();
  const std::size_t big = d + extra_dims;
  const std::size_t comp_dim = big - n;

  std::vector<std::vector<cxd>> accepted;
  accepted.reserve(big);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cxd> col(big, cxd{});
    for (std::size_t r = 0; r < d; ++r) col[r] = recip.span_basis(r, k);
    accepted.push_back(std::move(col));
  }

  ComplexMatrix out(big, comp_dim);
  std::size_t found = 0;
  for (std::size_t cand = 0; cand < big && found < comp_dim; ++cand) {
    std::vector<cxd> v(big, cxd{});
    v[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : accepted) {
        const cxd proj = vec_inner(u, v);
        for (std::size_t r = 0; r < big; ++r) v[r] -= proj * u[r];
      }
    const double norm = vec_norm(v);
    if (norm < 1e-8) continue;
    for (auto& x : v) x /= norm;
    for (std::size_t r = 0; r < big; ++r) out(r, found) = v[r];
    accepted.push_back(std::move(v));
    ++found;
  }
  if (found != comp_dim)
    throw NoConvergence("complement_basis: failed to complete the basis");
  return out;
}

double embedded_lambda(const ReciprocalSet& recip,
                       const std::vector<double>& cond_probs,
                       const ComplexMatrix& comp_basis,
                       const EmbeddingTrial& trial) {
  const std::size_t n = recip.n();
  const std::size_t d = recip.ambient_dim();
  const std::size_t big = comp_basis.rows();
  const std::size_t comp_dim = comp_basis.cols();
  if (trial.chis.size() != n || trial.mus.size() != n || trial.nus.size() != n)
    throw DomainError("embedded_lambda: trial arity mismatch");

  ComplexMatrix pi(big, big);
  std::vector<cxd> v(big);
  for (std::size_t j = 0; j < n; ++j) {
    const double mu = trial.mus[j];
    const cxd nu = trial.nus[j];
    if (std::abs(mu * mu + std::norm(nu) - 1.0) > 1e-9)
      throw DomainError("embedded_lambda: |mu|^2 + |nu|^2 must equal 1");
    if (mu < 1e-12)
      throw DomainError("embedded_lambda: mu_j = 0 cannot detect state j");
    if (trial.chis[j].size() != comp_dim)
      throw DomainError("embedded_lambda: chi dimension mismatch");

    std::fill(v.begin(), v.end(), cxd{});
    const auto& perp = recip.reciprocals[j].amplitudes();
    for (std::size_t r = 0; r < d; ++r) v[r] = mu * perp[r];
    for (std::size_t c = 0; c < comp_dim; ++c) {
      const cxd amp = nu * trial.chis[j][c];
      if (amp == cxd{}) continue;
      for (std::size_t r = 0; r < big; ++r) v[r] += amp * comp_basis(r, c);
    }

    // <psi-perp_Sj|psi_j> = mu_j s_j, so the embedded weight is q_j / mu_j^2.
    const double w = recip.weights[j] * cond_probs[j] / (mu * mu);
    for (std::size_t a = 0; a < big; ++a)
      for (std::size_t b = 0; b < big; ++b)
        pi(a, b) += w * v[a] * std::conj(v[b]);
  }
  return hermitian_eig(pi).eigenvalues.back();
}

EmbeddingReport embedding_no_gain_check(const StateEnsemble& ensemble,
                                        std::size_t extra_dims, int trials,
                                        std::uint64_t seed, int threads) {
  if (extra_dims < 1)
    throw DomainError("embedding_no_gain_check: extra_dims must be >= 1");
  if (trials < 1)
    throw DomainError("embedding_no_gain_check: trials must be >= 1");

  const ReciprocalSet recip = reciprocal_states(ensemble);
  const OptimizationResult opt = optimize_general(ensemble);
  const ComplexMatrix comp = complement_basis(recip, extra_dims);
  const std::size_t n = ensemble.n();
  const std::size_t comp_dim = comp.cols();
  const double lambda_restricted =
      probability_operator(recip, opt.cond_probs).max_eigenvalue;

  const auto run_trial = [&](int trial_index, double& emb_pd, double& gap) {
    rng::SplitMix64 gen =
        rng::substream(seed, static_cast<std::uint64_t>(trial_index));
    EmbeddingTrial trial;
    trial.chis.assign(n, std::vector<cxd>(comp_dim));
    trial.mus.assign(n, 0.0);
    trial.nus.assign(n, cxd{});
    for (std::size_t j = 0; j < n; ++j) {
      double norm = 0.0;
      do {
        for (std::size_t c = 0; c < comp_dim; ++c) {
          double g0, g1;
          gen.next_gaussian_pair(g0, g1);
          trial.chis[j][c] = cxd(g0, g1);
        }
        norm = vec_norm(trial.chis[j]);
      } while (norm < 1e-12);
      for (auto& x : trial.chis[j]) x /= norm;

      cxd a, b;
      double pair_norm = 0.0;
      do {
        double g0, g1, g2, g3;
        gen.next_gaussian_pair(g0, g1);
        gen.next_gaussian_pair(g2, g3);
        a = cxd(g0, g1);
        b = cxd(g2, g3);
        pair_norm = std::sqrt(std::norm(a) + std::norm(b));
      } while (pair_norm < 1e-12 || std::abs(a) / pair_norm < 1e-6);
      // Global phase freedom makes mu real positive.
      trial.mus[j] = std::abs(a) / pair_norm;
      trial.nus[j] = b * std::conj(a) / (std::abs(a) * pair_norm);
    }

    const double lambda_s = embedded_lambda(recip, opt.cond_probs, comp, trial);
    gap = lambda_s - lambda_restricted;
    emb_pd = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      emb_pd +=
          ensemble.priors[j] * std::min(1.0, opt.cond_probs[j] / lambda_s);
  };

  double max_embedded = -std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  const int nthreads = resolve_threads(threads);
  if (nthreads <= 1) {
    for (int i = 0; i < trials; ++i) {
      double pd, gap;
      run_trial(i, pd, gap);
      max_embedded = std::max(max_embedded, pd);
      min_gap = std::min(min_gap, gap);
    }
  } else {
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads) \
    reduction(max : max_embedded) reduction(min : min_gap)
    {
#pragma omp for schedule(static)
      for (int i = 0; i < trials; ++i) {
        double pd, gap;
        run_trial(i, pd, gap);
        max_embedded = std::max(max_embedded, pd);
        min_gap = std::min(min_gap, gap);
      }
    }
#else
    for (int i = 0; i < trials; ++i) {
      double pd, gap;
      run_trial(i, pd, gap);
      max_embedded = std::max(max_embedded, pd);
      min_gap = std::min(min_gap, gap);
    }
#endif
  }

  EmbeddingReport report;
  report.restricted_P_D = opt.discrimination_prob;
  report.restricted_lambda = lambda_restricted;
  report.max_embedded_P_D = max_embedded;
  report.min_lambda_gap = min_gap;
  report.trials = trials;
  report.embedded_bounded = max_embedded <= opt.discrimination_prob + 1e-9;
  report.lambda_dominates = min_gap >= -1e-9;
  return report;
}

}  // namespace usd
