#include "usd/measurement.hpp"

#include <cmath>
#include <string>

#include "usd/errors.hpp"
#include "usd/numcore.hpp"

namespace usd {

namespace {

void check_cond_probs(const std::vector<double>& p, std::size_t n) {
  if (p.size() != n)
    throw DomainError("conditional probabilities: expected " +
                      std::to_string(n) + " values, got " +
                      std::to_string(p.size()));
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0 + 1e-12))
      throw DomainError("conditional probabilities must lie in [0, 1]");
}

}  // namespace

ProbabilityOperator probability_operator(const ReciprocalSet& recip,
                                         const std::vector<double>& cond_probs) {
  check_cond_probs(cond_probs, recip.n());
  const std::size_t d = recip.ambient_dim();
  ComplexMatrix pi(d, d);
  for (std::size_t j = 0; j < recip.n(); ++j) {
    const double w = recip.weights[j] * cond_probs[j];
    if (w == 0.0) continue;
    const auto& r = recip.reciprocals[j].amplitudes();
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        pi(a, b) += w * r[a] * std::conj(r[b]);
  }
  ProbabilityOperator out;
  out.max_eigenvalue = hermitian_eig(pi).eigenvalues.back();
  out.matrix = std::move(pi);
  return out;
}

USDMeasurement build_measurement(const StateEnsemble& ensemble,
                                 const ReciprocalSet& recip,
                                 const std::vector<double>& cond_probs) {
  const std::size_t n = ensemble.n();
  const std::size_t d = ensemble.dim();
  if (recip.n() != n || recip.ambient_dim() != d)
    throw DomainError("build_measurement: reciprocal set does not match ensemble");
  check_cond_probs(cond_probs, n);

  ProbabilityOperator pi = probability_operator(recip, cond_probs);
  if (!pi.feasible())
    throw Infeasible("build_measurement: probability operator eigenvalue " +
                     std::to_string(pi.max_eigenvalue) + " exceeds 1");

  USDMeasurement m;
  m.cond_probs = cond_probs;
  m.detection_ops.reserve(n);
  m.detection_basis.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cxd> phi = recip.span_basis.column(k);
    const double factor = std::sqrt(cond_probs[k]) / recip.overlaps[k];
    ComplexMatrix ak = outer(phi, recip.reciprocals[k].amplitudes());
    ak *= cxd(factor, 0.0);
    m.detection_ops.push_back(std::move(ak));
    m.detection_basis.push_back(PureState::normalized(std::move(phi)));
  }

  // Eigenvalues of I - Pi caught in [-2e-9, 1e-12) are boundary round-off;
  // flattening them gives A_I an exact kernel at lambda = 1.
  m.inconclusive_op =
      psd_sqrt(ComplexMatrix::identity(d) - pi.matrix, 2e-9, 1e-12);
  return m;
}

OutcomeDistribution outcome_distribution(const USDMeasurement& m,
                                         const StateEnsemble& ensemble) {
  if (m.dim() != ensemble.dim() || m.n() != ensemble.n())
    throw DomainError("outcome_distribution: dimension mismatch");
  const std::size_t n = ensemble.n();
  OutcomeDistribution dist;
  dist.detect.assign(n, std::vector<double>(n, 0.0));
  dist.inconclusive.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& psi = ensemble.states[j].amplitudes();
    for (std::size_t k = 0; k < n; ++k) {
      const double p = vec_norm(matvec(m.detection_ops[k], psi));
      dist.detect[j][k] = p * p;
    }
    const double pi = vec_norm(matvec(m.inconclusive_op, psi));
    dist.inconclusive[j] = pi * pi;
  }
  return dist;
}

PostInconclusiveReport post_inconclusive_states(const USDMeasurement& m,
                                                const StateEnsemble& ensemble,
                                                double rank_rel_tol) {
  if (m.dim() != ensemble.dim())
    throw DomainError("post_inconclusive_states: dimension mismatch");
  const std::size_t n = ensemble.n();
  const std::size_t d = ensemble.dim();

  PostInconclusiveReport report;
  report.vectors.reserve(n);
  ComplexMatrix stack(d, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cxd> v = matvec(m.inconclusive_op, ensemble.states[j].amplitudes());
    for (std::size_t r = 0; r < d; ++r) stack(r, j) = v[r];
    report.vectors.push_back(std::move(v));
  }
  report.rank = numerical_rank(stack, rank_rel_tol);
  return report;
}

}  // namespace usd
