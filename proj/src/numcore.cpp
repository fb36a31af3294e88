#include "usd/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "usd/errors.hpp"

namespace usd {

namespace {

double offdiag_norm(const ComplexMatrix& a) {
  double acc = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) acc += 2.0 * std::norm(a(p, q));
  return std::sqrt(acc);
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& h, int max_sweeps) {
  const std::size_t n = h.rows();
  if (n != h.cols()) throw DomainError("hermitian_eig: matrix is not square");
  if (!all_finite(h)) throw DomainError("hermitian_eig: non-finite entries");

  const double scale = std::max(1.0, frobenius_norm(h));
  if (hermiticity_defect(h) > 1e-8 * scale)
    throw NotHermitian("hermitian_eig: input is not Hermitian within tolerance");

  ComplexMatrix a = h;
  // Symmetrize so round-off in the input cannot accumulate through sweeps.
  for (std::size_t p = 0; p < n; ++p) {
    a(p, p) = cxd(a(p, p).real(), 0.0);
    for (std::size_t q = p + 1; q < n; ++q) {
      const cxd v = 0.5 * (a(p, q) + std::conj(a(q, p)));
      a(p, q) = v;
      a(q, p) = std::conj(v);
    }
  }

  ComplexMatrix w = ComplexMatrix::identity(n);
  const double stop_tol = 1e-13 * scale;

  bool converged = (n <= 1) || offdiag_norm(a) <= stop_tol;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cxd beta = a(p, q);
        const double b = std::abs(beta);
        if (b < 1e-280) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double alpha = a(p, p).real();
        const double gamma = a(q, q).real();
        const cxd u = beta / b;

        // t = s/c solves t^2 + 2*tau*t - 1 = 0; take the small root.
        const double tau = (gamma - alpha) / (2.0 * b);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(tau * tau + 1.0))
                                      : -1.0 / (-tau + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        a(p, p) = alpha - t * b;
        a(q, q) = gamma + t * b;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const cxd arp = a(r, p);
          const cxd arq = a(r, q);
          a(r, p) = c * arp - s * std::conj(u) * arq;
          a(r, q) = s * u * arp + c * arq;
          a(p, r) = std::conj(a(r, p));
          a(q, r) = std::conj(a(r, q));
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cxd wrp = w(r, p);
          const cxd wrq = w(r, q);
          w(r, p) = c * wrp - s * std::conj(u) * wrq;
          w(r, q) = s * u * wrp + c * wrq;
        }
      }
    }
    converged = offdiag_norm(a) <= stop_tol;
  }
  if (!converged)
    throw NoConvergence("hermitian_eig: sweep budget exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  HermitianEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r)
      out.eigenvectors(r, k) = w(r, order[k]);
  }
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h, double neg_tol,
                       double zero_clamp) {
  const HermitianEig eig = hermitian_eig(h);
  const std::size_t n = h.rows();

  std::vector<double> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lambda = eig.eigenvalues[i];
    if (lambda < -neg_tol)
      throw NotPSD("psd_sqrt: eigenvalue " + std::to_string(lambda) +
                   " below -" + std::to_string(neg_tol));
    if (lambda < zero_clamp) lambda = 0.0;
    roots[i] = std::sqrt(std::max(0.0, lambda));
  }

  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) {
      cxd acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += roots[k] * eig.eigenvectors(r, k) *
               std::conj(eig.eigenvectors(c, k));
      out(r, c) = acc;
      out(c, r) = std::conj(acc);
    }
    out(r, r) = cxd(out(r, r).real(), 0.0);
  }
  return out;
}

std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol) {
  if (rel_tol <= 0.0) throw DomainError("numerical_rank: rel_tol must be > 0");
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (!all_finite(m)) throw DomainError("numerical_rank: non-finite entries");

  // One-sided Jacobi: rotate column pairs until they are mutually
  // orthogonal; the singular values are then the column norms. Unlike the
  // M^+M route this resolves singular values all the way down to eps, which
  // the 1e-10 default tolerance needs.
  ComplexMatrix a = m.rows() >= m.cols() ? m : adjoint(m);
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double app = 0.0, aqq = 0.0;
        cxd apq = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          app += std::norm(a(i, p));
          aqq += std::norm(a(i, q));
          apq += std::conj(a(i, p)) * a(i, q);
        }
        const double b = std::abs(apq);
        if (b <= 1e-15 * std::sqrt(app * aqq) || b < 1e-300) continue;

        const cxd u = apq / b;
        const double tau = (aqq - app) / (2.0 * b);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(tau * tau + 1.0))
                             : -1.0 / (-tau + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < rows; ++i) {
          const cxd ap = a(i, p);
          const cxd aq = a(i, q);
          a(i, p) = c * ap - s * std::conj(u) * aq;
          a(i, q) = s * u * ap + c * aq;
        }
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  double sigma_max = 0.0;
  std::vector<double> sigma(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += std::norm(a(i, c));
    sigma[c] = std::sqrt(acc);
    sigma_max = std::max(sigma_max, sigma[c]);
  }
  if (sigma_max <= 0.0) return 0;

  std::size_t rank = 0;
  for (double s : sigma)
    if (s > rel_tol * sigma_max) ++rank;
  return rank;
}

}  // namespace usd
