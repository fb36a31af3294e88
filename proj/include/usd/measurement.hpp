#pragma once

#include <cstddef>
#include <vector>

#include "usd/complex_matrix.hpp"
#include "usd/ensemble.hpp"

namespace usd {

// Pi({P_j}) = sum_j q_j P_j |psi-perp_j><psi-perp_j|. A set of conditional
// probabilities is realizable as a zero-error measurement iff the largest
// eigenvalue stays at or below 1.
struct ProbabilityOperator {
  ComplexMatrix matrix;
  double max_eigenvalue = 0.0;

  bool feasible(double slack = 1e-9) const {
    return max_eigenvalue <= 1.0 + slack;
  }
};

ProbabilityOperator probability_operator(const ReciprocalSet& recip,
                                         const std::vector<double>& cond_probs);

// Zero-error discrimination measurement: rank-1 detection operators
// A_k = (P_k^{1/2}/s_k)|phi_k><psi-perp_k| plus the inconclusive operator
// A_I = (I - Pi)^{1/2}. The detection basis |phi_k> is the orthonormal span
// basis; nothing downstream may depend on that choice beyond orthonormality.
struct USDMeasurement {
  std::vector<ComplexMatrix> detection_ops;
  ComplexMatrix inconclusive_op;
  std::vector<double> cond_probs;
  std::vector<PureState> detection_basis;

  std::size_t n() const { return detection_ops.size(); }
  std::size_t dim() const { return inconclusive_op.rows(); }
};

// Throws Infeasible when the probability operator exceeds the eigenvalue
// bound (slack 1e-9 for round-off at the optimal boundary).
USDMeasurement build_measurement(const StateEnsemble& ensemble,
                                 const ReciprocalSet& recip,
                                 const std::vector<double>& cond_probs);

// Row j: outcome probabilities when the system was prepared in |psi_j>.
struct OutcomeDistribution {
  std::vector<std::vector<double>> detect;  // detect[j][k]
  std::vector<double> inconclusive;         // inconclusive[j]

  std::size_t n() const { return inconclusive.size(); }
};

OutcomeDistribution outcome_distribution(const USDMeasurement& m,
                                         const StateEnsemble& ensemble);

// The unnormalized states A_I|psi_j> left behind by an inconclusive result,
// plus the numerical rank of their stack. At the optimal boundary
// (lambda = 1) the stack is rank-deficient: no further zero-error attempt
// can tell the survivors apart.
struct PostInconclusiveReport {
  std::vector<std::vector<cxd>> vectors;
  std::size_t rank = 0;
};

PostInconclusiveReport post_inconclusive_states(const USDMeasurement& m,
                                                const StateEnsemble& ensemble,
                                                double rank_rel_tol = 1e-10);

}  // namespace usd
