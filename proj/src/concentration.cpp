#include "usd/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "usd/errors.hpp"
#include "usd/numcore.hpp"

namespace usd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double min_weight(const std::vector<cxd>& coeffs) {
  double m = std::norm(coeffs.front());
  for (const auto& c : coeffs) m = std::min(m, std::norm(c));
  return m;
}

}  // namespace

SchmidtState::SchmidtState(std::vector<cxd> coefficients)
    : coeffs(std::move(coefficients)) {
  if (coeffs.empty()) throw DomainError("SchmidtState: empty coefficient list");
  double sum = 0.0;
  for (const auto& c : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw DomainError("SchmidtState: non-finite coefficient");
    if (std::norm(c) < 1e-300)
      throw ZeroCoefficient("SchmidtState: every Schmidt coefficient must be non-zero");
    sum += std::norm(c);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw DomainError("SchmidtState: squared coefficients sum to " +
                      std::to_string(sum) + ", not 1 within 1e-9");
}

ComplexMatrix conjugate_basis(std::size_t n) {
  if (n < 1) throw DomainError("conjugate_basis: n must be >= 1");
  ComplexMatrix gamma(n, n);
  const double root = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const double phase = -kTwoPi * static_cast<double>(j * k) / n;
      gamma(j, k) = root * cxd(std::cos(phase), std::sin(phase));
    }
  return gamma;
}

StateEnsemble derived_states(const SchmidtState& state) {
  const std::size_t n = state.n();
  std::vector<PureState> states;
  states.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cxd> amp(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = kTwoPi * static_cast<double>(j * k) / n;
      amp[j] = state.coeffs[j] * cxd(std::cos(phase), std::sin(phase));
    }
    states.push_back(PureState::normalized(std::move(amp)));
  }
  return StateEnsemble(std::move(states),
                       std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double concentration_probability(const SchmidtState& state) {
  return static_cast<double>(state.n()) * min_weight(state.coeffs);
}

ComplexMatrix orthogonalisation_operator(const SchmidtState& state) {
  const std::size_t n = state.n();
  const ReciprocalSet recip = reciprocal_states(derived_states(state));
  const double root_p = std::sqrt(concentration_probability(state));

  ComplexMatrix a_o(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double factor = root_p / recip.overlaps[k];
    const std::vector<cxd> phi = recip.span_basis.column(k);
    const auto& perp = recip.reciprocals[k].amplitudes();
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        a_o(r, c) += factor * phi[r] * std::conj(perp[c]);
  }
  return a_o;
}

ConcentrationResult apply_concentration(const SchmidtState& state) {
  const std::size_t n = state.n();
  const double p_c = concentration_probability(state);
  ComplexMatrix a_o = orthogonalisation_operator(state);

  // A_I^+ A_I = I - A_O^+ A_O; boundary eigenvalues are flattened so the
  // failure branch annihilates the argmin weights exactly.
  const ComplexMatrix a_i =
      psd_sqrt(ComplexMatrix::identity(n) - adjoint(a_o) * a_o, 2e-9, 1e-12);

  // Coefficient matrix of |phi> in the alpha x beta product basis.
  ComplexMatrix phi(n, n);
  for (std::size_t j = 0; j < n; ++j) phi(j, j) = state.coeffs[j];

  // Acting with X on subsystem 2 maps the coefficient matrix to Phi X^T.
  const auto apply_local = [&](const ComplexMatrix& x) {
    ComplexMatrix out(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t c = 0; c < n; ++c) {
        cxd acc = 0.0;
        for (std::size_t b = 0; b < n; ++b) acc += phi(a, b) * x(c, b);
        out(a, c) = acc;
      }
    return out;
  };

  // Success branch: Schmidt coefficients of the normalized (I x A_O)|phi>.
  ComplexMatrix succ = apply_local(a_o);
  succ *= cxd(1.0 / frobenius_norm(succ), 0.0);
  const HermitianEig succ_eig = hermitian_eig(adjoint(succ) * succ);
  std::vector<cxd> succ_coeffs(n);
  for (std::size_t j = 0; j < n; ++j)
    succ_coeffs[j] = std::sqrt(std::max(0.0, succ_eig.eigenvalues[j]));

  // Failure branch: every index attaining min |c_j|^2 is annihilated, ties
  // included, so the Schmidt rank drops by the multiplicity of the minimum.
  ComplexMatrix fail = apply_local(a_i);
  const double fail_norm = frobenius_norm(fail);
  BipartiteBranch branch;
  branch.schmidt_weights.assign(n, 0.0);
  if (fail_norm < 1e-12) {
    branch.coefficient_matrix = ComplexMatrix(n, n);
    branch.schmidt_rank = 0;
  } else {
    fail *= cxd(1.0 / fail_norm, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double row = 0.0;
      for (std::size_t b = 0; b < n; ++b) row += std::norm(fail(j, b));
      branch.schmidt_weights[j] = row;
    }
    branch.schmidt_rank = numerical_rank(fail);
    branch.coefficient_matrix = std::move(fail);
  }

  return ConcentrationResult{std::move(a_o), p_c,
                             SchmidtState(std::move(succ_coeffs)),
                             std::move(branch), 1.0 - p_c};
}

}  // namespace usd
