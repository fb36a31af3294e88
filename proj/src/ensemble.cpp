#include "usd/ensemble.hpp"

#include <cmath>
#include <string>

#include "usd/errors.hpp"
#include "usd/numcore.hpp"

namespace usd {

PureState::PureState(std::vector<cxd> amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.empty()) throw DomainError("PureState: empty amplitude vector");
  for (const auto& v : amp_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("PureState: non-finite amplitude");
  const double norm = vec_norm(amp_);
  if (std::abs(norm - 1.0) > 1e-9)
    throw DomainError("PureState: norm " + std::to_string(norm) +
                      " is not 1 within 1e-9");
}

PureState PureState::normalized(std::vector<cxd> amplitudes) {
  const double norm = vec_norm(amplitudes);
  if (!(norm > 1e-12))
    throw DomainError("PureState::normalized: vector has (near-)zero norm");
  for (auto& v : amplitudes) v /= norm;
  return PureState(std::move(amplitudes));
}

cxd inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw DomainError("inner: dimension mismatch");
  return vec_inner(a.amplitudes(), b.amplitudes());
}

StateEnsemble::StateEnsemble(std::vector<PureState> s, std::vector<double> p)
    : states(std::move(s)), priors(std::move(p)) {
  if (states.empty()) throw DomainError("StateEnsemble: needs at least one state");
  if (priors.size() != states.size())
    throw DomainError("StateEnsemble: priors count does not match state count");
  const std::size_t d = states.front().dim();
  for (const auto& st : states)
    if (st.dim() != d)
      throw DomainError("StateEnsemble: states have mixed dimensions");
  double sum = 0.0;
  for (double eta : priors) {
    if (!(eta >= 0.0) || !std::isfinite(eta))
      throw DomainError("StateEnsemble: priors must be non-negative");
    sum += eta;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw DomainError("StateEnsemble: priors sum to " + std::to_string(sum) +
                      ", not 1 within 1e-12");
}

GramMatrix gram(const StateEnsemble& ensemble) {
  const std::size_t n = ensemble.n();
  ComplexMatrix g(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    g(j, j) = 1.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      const cxd v = inner(ensemble.states[j], ensemble.states[k]);
      g(j, k) = v;
      g(k, j) = std::conj(v);
    }
  }
  return GramMatrix{std::move(g)};
}

IndependenceReport check_independence(const StateEnsemble& ensemble,
                                      double rel_tol) {
  if (rel_tol <= 0.0)
    throw DomainError("check_independence: rel_tol must be > 0");
  const HermitianEig eig = hermitian_eig(gram(ensemble).entries);
  IndependenceReport report;
  report.smallest_eigenvalue = eig.eigenvalues.front();
  report.largest_eigenvalue = eig.eigenvalues.back();
  // States of dimension < n can never pass: the Gram matrix is singular.
  report.independent = ensemble.dim() >= ensemble.n() &&
                       report.smallest_eigenvalue >
                           rel_tol * report.largest_eigenvalue;
  return report;
}

ReciprocalSet reciprocal_states(const StateEnsemble& ensemble, double rel_tol) {
  const IndependenceReport gate = check_independence(ensemble, rel_tol);
  if (!gate.independent)
    throw DependentStates(
        "reciprocal_states: ensemble is not linearly independent (smallest "
        "Gram eigenvalue " +
        std::to_string(gate.smallest_eigenvalue) + ")");

  const std::size_t n = ensemble.n();
  const std::size_t d = ensemble.dim();

  ComplexMatrix s(d, n);  // columns are the state amplitudes
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t r = 0; r < d; ++r)
      s(r, j) = ensemble.states[j].amplitudes()[r];

  const HermitianEig geig = hermitian_eig(gram(ensemble).entries);

  // Loewdin basis of the span: B = S G^{-1/2} has orthonormal columns, and
  // the dual directions are S G^{-1} e_j.
  ComplexMatrix ginv_half(n, n);
  ComplexMatrix ginv(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      cxd acc_half = 0.0;
      cxd acc_inv = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const cxd m = geig.eigenvectors(r, k) * std::conj(geig.eigenvectors(c, k));
        acc_half += m / std::sqrt(geig.eigenvalues[k]);
        acc_inv += m / geig.eigenvalues[k];
      }
      ginv_half(r, c) = acc_half;
      ginv(r, c) = acc_inv;
    }
  }

  ReciprocalSet out;
  out.span_basis = s * ginv_half;
  out.reciprocals.reserve(n);
  out.overlaps.resize(n);
  out.weights.resize(n);
  const ComplexMatrix duals = s * ginv;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cxd> u = duals.column(j);
    const double norm = vec_norm(u);
    for (auto& v : u) v /= norm;
    out.reciprocals.push_back(PureState(std::move(u)));
    out.overlaps[j] = 1.0 / norm;            // <psi-perp_j|psi_j>, real > 0
    out.weights[j] = 1.0 / (out.overlaps[j] * out.overlaps[j]);
  }
  return out;
}

}  // namespace usd
