#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "usd/ensemble.hpp"
#include "usd/measurement.hpp"

namespace usd {

enum class OptMethod {
  kTwoStateClosedForm,
  kEqualP,
  kGeneralIterative,
  kGridOracle,
};

std::string to_string(OptMethod method);

// Solution of max sum_j eta_j P_j over 0 <= P_j <= 1 with
// lambda(Pi({P_j})) <= 1. Only P_D is unique; degenerate optima may return
// any maximizing P vector.
struct OptimizationResult {
  std::vector<double> cond_probs;
  double discrimination_prob = 0.0;  // P_D
  double inconclusive_prob = 0.0;    // P_I = 1 - P_D
  double boundary_eigenvalue = 0.0;  // lambda at the returned P
  OptMethod method = OptMethod::kGeneralIterative;
};

// |<psi_+|psi_->| , the minimum inconclusive probability for two
// equiprobable states. Throws WrongArity unless n = 2.
double idp_bound(const StateEnsemble& ensemble);

// Minimal error probability of a two-state strategy that tolerates errors,
// given a fixed inconclusive probability P_I <= overlap: the smaller root of
// P_E (1 - P_I - P_E) = (overlap - P_I)^2 / 4.
double error_tradeoff(double inconclusive_prob, double overlap);

// error_tradeoff at P_I = 0.
double helstrom_bound(double overlap);

// Exact two-state optimum for arbitrary priors. For sqrt(eta_-/eta_+) below
// the overlap the solution degenerates to a von Neumann measurement that
// never detects the less likely state.
OptimizationResult jaeger_shimony(const StateEnsemble& ensemble);

// n-state optimum under the constraint that all P_j are equal:
// P = 1 / lambda_max(sum_j q_j |psi-perp_j><psi-perp_j|).
OptimizationResult equal_p_solution(const ReciprocalSet& recip);

// General iterative optimum: interior-point ascent on the linear objective
// under the eigenvalue and box constraints, then a rescale onto the
// lambda = 1 boundary. Deterministic.
OptimizationResult optimize_general(const StateEnsemble& ensemble,
                                    double independence_tol = 1e-10);

// Brute-force verifier: best feasible point of the regular grid on [0,1]^n
// (step = resolution, feasibility slack 1e-9 on lambda). Cost grows as
// resolution^-n; n > 4 throws TooLarge. threads = 0 picks the OpenMP
// default, 1 forces the serial reference scan; the result is identical
// either way.
OptimizationResult grid_oracle(const StateEnsemble& ensemble, double resolution,
                               int threads = 0,
                               double independence_tol = 1e-10);

// One embedding of the dual set into a larger space: |psi-perp_Sj> =
// mu_j |psi-perp_j> + nu_j |chi_j> with |mu_j|^2 + |nu_j|^2 = 1 and the
// |chi_j> unit vectors supported on the orthogonal complement of the span.
struct EmbeddingTrial {
  std::vector<std::vector<cxd>> chis;  // complement coordinates, one per state
  std::vector<double> mus;             // real >= 0 (phase freedom)
  std::vector<cxd> nus;
};

// Largest eigenvalue of the embedded probability operator Pi_S for the given
// conditional probabilities. complement_basis must hold orthonormal columns
// spanning the orthogonal complement of the ensemble span.
double embedded_lambda(const ReciprocalSet& recip,
                       const std::vector<double>& cond_probs,
                       const ComplexMatrix& complement_basis,
                       const EmbeddingTrial& trial);

// Orthonormal basis of the orthogonal complement of the span inside the
// ambient space padded by extra_dims additional dimensions.
ComplexMatrix complement_basis(const ReciprocalSet& recip,
                               std::size_t extra_dims);

struct EmbeddingReport {
  double restricted_P_D = 0.0;     // optimum over measurements on the span
  double restricted_lambda = 0.0;  // lambda at that optimum (= 1)
  double max_embedded_P_D = 0.0;
  double min_lambda_gap = 0.0;  // min over trials of lambda_S - lambda
  int trials = 0;
  bool embedded_bounded = false;  // max embedded <= restricted + 1e-9
  bool lambda_dominates = false;  // lambda_S >= lambda - 1e-9 in every trial
};

// Monte-Carlo check that embedding the measurement into a larger space never
// beats the restricted optimum. Deterministic per seed; trials draw
// independent substreams and may run concurrently.
EmbeddingReport embedding_no_gain_check(const StateEnsemble& ensemble,
                                        std::size_t extra_dims, int trials,
                                        std::uint64_t seed, int threads = 0);

}  // namespace usd
