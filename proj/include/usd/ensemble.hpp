#pragma once

#include <cstddef>
#include <vector>

#include "usd/complex_matrix.hpp"

namespace usd {

// Unit-norm state vector on a fixed-dimension complex space.
class PureState {
 public:
  explicit PureState(std::vector<cxd> amplitudes);

  // Rescales to unit norm first; rejects (near-)zero vectors.
  static PureState normalized(std::vector<cxd> amplitudes);

  std::size_t dim() const { return amp_.size(); }
  const std::vector<cxd>& amplitudes() const { return amp_; }

 private:
  std::vector<cxd> amp_;
};

cxd inner(const PureState& a, const PureState& b);

// The state set {|psi_j>, eta_j}: n pure states of one common dimension with
// prior preparation probabilities summing to 1. Zero priors are allowed; the
// state stays in the ensemble and in the zero-error constraints.
struct StateEnsemble {
  StateEnsemble(std::vector<PureState> states, std::vector<double> priors);

  std::size_t n() const { return states.size(); }
  std::size_t dim() const { return states.empty() ? 0 : states.front().dim(); }

  std::vector<PureState> states;
  std::vector<double> priors;
};

// Matrix of pairwise inner products G_jk = <psi_j|psi_k>. Hermitian with
// unit diagonal and trace n for unit-norm states.
struct GramMatrix {
  ComplexMatrix entries;
};

GramMatrix gram(const StateEnsemble& ensemble);

struct IndependenceReport {
  bool independent = false;
  double smallest_eigenvalue = 0.0;  // of the Gram matrix
  double largest_eigenvalue = 0.0;
};

// Linear independence gate: true iff the smallest Gram eigenvalue exceeds
// rel_tol times the largest. False is a value, not an error.
IndependenceReport check_independence(const StateEnsemble& ensemble,
                                      double rel_tol = 1e-10);

// Dual states |psi-perp_j>, each orthogonal to every |psi_k> with k != j and
// phase-fixed so the overlap s_j = <psi-perp_j|psi_j> is real positive.
// span_basis holds an orthonormal basis of span{|psi_j>} as columns (the
// detection basis |phi_k> downstream); it equals the ambient dimension only
// when the states already span it.
struct ReciprocalSet {
  std::vector<PureState> reciprocals;
  std::vector<double> overlaps;  // s_j > 0
  std::vector<double> weights;   // q_j = s_j^-2
  ComplexMatrix span_basis;      // dim x n, orthonormal columns

  std::size_t n() const { return reciprocals.size(); }
  std::size_t ambient_dim() const { return span_basis.rows(); }
};

// Throws DependentStates when the independence gate fails. For dim > n the
// construction works inside the span of the ensemble; measurements restricted
// to that span lose nothing.
ReciprocalSet reciprocal_states(const StateEnsemble& ensemble,
                                double rel_tol = 1e-10);

}  // namespace usd
