#pragma once

#include <cstddef>
#include <vector>

#include "usd/complex_matrix.hpp"
#include "usd/ensemble.hpp"

namespace usd {

// Bipartite pure state given by its Schmidt coefficients c_0..c_{n-1}
// (index convention starts at 0). All coefficients must be non-zero and
// the squared moduli sum to 1.
struct SchmidtState {
  explicit SchmidtState(std::vector<cxd> coefficients);

  std::size_t n() const { return coeffs.size(); }

  std::vector<cxd> coeffs;
};

// Conjugate (discrete-Fourier) basis: column k holds
// |gamma_k> = n^{-1/2} sum_j exp(-2 pi i j k / n) |alpha_j>.
ComplexMatrix conjugate_basis(std::size_t n);

// The non-orthogonal but linearly independent states
// |psi_k> = sum_j c_j exp(2 pi i j k / n) |beta_j> carried by the second
// subsystem once the first is expressed in the conjugate basis; uniform
// priors 1/n.
StateEnsemble derived_states(const SchmidtState& state);

// A_O = sum_k A_k with every conditional probability set to the
// concentration probability: maps each |psi_k> onto sqrt(P) |phi_k>.
ComplexMatrix orthogonalisation_operator(const SchmidtState& state);

// P_C = n * min_j |c_j|^2.
double concentration_probability(const SchmidtState& state);

// One branch of the bipartite state after the local operation, described by
// its coefficient matrix in the alpha x beta product basis.
struct BipartiteBranch {
  ComplexMatrix coefficient_matrix;    // normalized; zero matrix if the
                                       // branch has probability 0
  std::vector<double> schmidt_weights; // descending order not guaranteed;
                                       // indexed like the beta basis when
                                       // the matrix is diagonal
  std::size_t schmidt_rank = 0;
};

struct ConcentrationResult {
  ComplexMatrix orthogonalisation_op;  // acts on subsystem 2 only
  double success_prob = 0.0;           // P_C
  SchmidtState success_state;          // maximally entangled: weights 1/n
  BipartiteBranch failure_state;       // zero amplitude on every argmin |c_j|^2
  double failure_prob = 0.0;           // exactly 1 - P_C
};

ConcentrationResult apply_concentration(const SchmidtState& state);

}  // namespace usd
