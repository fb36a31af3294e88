#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "usd/concentration.hpp"
#include "usd/ensemble.hpp"
#include "usd/numcore.hpp"

namespace test_helpers {

using usd::ComplexMatrix;
using usd::cxd;

inline std::vector<cxd> random_vector(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cxd> v(d);
  for (auto& x : v) x = cxd(normal(rng), normal(rng));
  return v;
}

inline usd::PureState random_state(std::mt19937_64& rng, std::size_t d) {
  return usd::PureState::normalized(random_vector(rng, d));
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix h(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    h(r, r) = normal(rng);
    for (std::size_t c = r + 1; c < n; ++c) {
      h(r, c) = cxd(normal(rng), normal(rng));
      h(c, r) = std::conj(h(r, c));
    }
  }
  return h;
}

inline ComplexMatrix random_psd(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix a(n, n);
  for (auto r = 0u; r < n; ++r)
    for (auto c = 0u; c < n; ++c) a(r, c) = cxd(normal(rng), normal(rng));
  return adjoint(a) * a;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  // Eigenvectors of a random Hermitian matrix form a Haar-ish unitary;
  // plenty for invariance tests.
  return usd::hermitian_eig(random_hermitian(rng, n)).eigenvectors;
}

// Random ensemble rejected until it clears the independence gate with some
// margin, so reciprocal construction stays well conditioned.
inline usd::StateEnsemble random_independent_ensemble(std::mt19937_64& rng,
                                                      std::size_t n,
                                                      std::size_t d,
                                                      bool uniform_priors = false,
                                                      double min_gap = 1e-3) {
  while (true) {
    std::vector<usd::PureState> states;
    for (std::size_t j = 0; j < n; ++j) states.push_back(random_state(rng, d));
    std::vector<double> priors(n, 1.0 / static_cast<double>(n));
    if (!uniform_priors) {
      std::uniform_real_distribution<double> uni(0.05, 1.0);
      double sum = 0.0;
      for (auto& p : priors) {
        p = uni(rng);
        sum += p;
      }
      for (auto& p : priors) p /= sum;
    }
    usd::StateEnsemble ensemble(std::move(states), std::move(priors));
    const usd::IndependenceReport gate = usd::check_independence(ensemble);
    if (gate.independent &&
        gate.smallest_eigenvalue > min_gap * gate.largest_eigenvalue)
      return ensemble;
  }
}

inline usd::SchmidtState random_schmidt(std::mt19937_64& rng, std::size_t n,
                                        double min_weight = 1e-4) {
  while (true) {
    std::vector<cxd> c = random_vector(rng, n);
    double sum = 0.0;
    for (const auto& x : c) sum += std::norm(x);
    const double scale = 1.0 / std::sqrt(sum);
    double smallest = 1.0;
    for (auto& x : c) {
      x *= scale;
      smallest = std::min(smallest, std::norm(x));
    }
    if (smallest >= min_weight) return usd::SchmidtState(std::move(c));
  }
}

// theta-parameterized pair cos(theta)|+> +/- sin(theta)|->
inline usd::StateEnsemble theta_pair(double theta, double eta_plus) {
  std::vector<usd::PureState> states;
  states.push_back(usd::PureState({std::cos(theta), std::sin(theta)}));
  states.push_back(usd::PureState({std::cos(theta), -std::sin(theta)}));
  return usd::StateEnsemble(std::move(states), {eta_plus, 1.0 - eta_plus});
}

inline usd::StateEnsemble orthonormal_ensemble(std::mt19937_64& rng,
                                               std::size_t n) {
  const ComplexMatrix u = random_unitary(rng, n);
  std::vector<usd::PureState> states;
  for (std::size_t k = 0; k < n; ++k)
    states.push_back(usd::PureState::normalized(u.column(k)));
  return usd::StateEnsemble(std::move(states),
                            std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

}  // namespace test_helpers
