#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "usd/errors.hpp"
#include "usd/optimizer.hpp"

using test_helpers::random_independent_ensemble;
using test_helpers::theta_pair;
using usd::cxd;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent route for the tradeoff equation: bisection on
// f(PE) = PE (1 - PI - PE) - (overlap - PI)^2 / 4 over the smaller-root side.
double tradeoff_by_bisection(double p_i, double overlap) {
  const auto f = [&](double p_e) {
    return p_e * (1.0 - p_i - p_e) - 0.25 * (overlap - p_i) * (overlap - p_i);
  };
  double lo = 0.0, hi = 0.5 * (1.0 - p_i);  // product peaks at the midpoint
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double js_inconclusive(double eta_plus, double overlap) {
  const double eta_minus = 1.0 - eta_plus;
  if (std::sqrt(eta_minus / eta_plus) >= overlap)
    return 2.0 * std::sqrt(eta_plus * eta_minus) * overlap;
  return eta_plus * overlap * overlap + eta_minus;
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("idp bound") {
  std::vector<usd::PureState> ortho{usd::PureState({1.0, 0.0}),
                                    usd::PureState({0.0, 1.0})};
  CHECK(usd::idp_bound(usd::StateEnsemble(ortho, {0.5, 0.5})) ==
        doctest::Approx(0.0));

  std::vector<usd::PureState> same{usd::PureState({1.0, 0.0}),
                                   usd::PureState({1.0, 0.0})};
  CHECK(usd::idp_bound(usd::StateEnsemble(same, {0.5, 0.5})) ==
        doctest::Approx(1.0));

  CHECK(usd::idp_bound(theta_pair(kPi / 8.0, 0.5)) ==
        doctest::Approx(0.70711).epsilon(1e-4));

  std::mt19937_64 rng(3);
  CHECK_THROWS_AS(usd::idp_bound(random_independent_ensemble(rng, 3, 3)),
                  usd::WrongArity);
}

TEST_CASE("error tradeoff endpoints and frozen value") {
  const double ov = 0.70711;
  CHECK(usd::error_tradeoff(ov, ov) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(usd::helstrom_bound(ov) == doctest::Approx(0.14645).epsilon(1e-4));
  CHECK(usd::error_tradeoff(0.2, ov) == doctest::Approx(0.09063).epsilon(1e-4));
  CHECK_THROWS_AS(usd::error_tradeoff(0.8, ov), usd::DomainError);
  CHECK_THROWS_AS(usd::error_tradeoff(-0.1, ov), usd::DomainError);
}

TEST_CASE("error tradeoff agrees with the bisection route") {
  for (double ov : {0.1, 0.4, 0.70711, 0.95}) {
    for (int i = 0; i <= 10; ++i) {
      const double p_i = ov * i / 10.0;
      CHECK(usd::error_tradeoff(p_i, ov) ==
            doctest::Approx(tradeoff_by_bisection(p_i, ov)).epsilon(1e-10));
    }
  }
}

TEST_CASE("jaeger-shimony frozen examples") {
  // equal priors: P_I = overlap, P_+- = 1 - overlap
  const auto eq = usd::jaeger_shimony(theta_pair(kPi / 8.0, 0.5));
  CHECK(eq.inconclusive_prob == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(eq.cond_probs[0] == doctest::Approx(0.29289).epsilon(1e-4));
  CHECK(eq.cond_probs[1] == doctest::Approx(0.29289).epsilon(1e-4));
  CHECK(eq.boundary_eigenvalue == doctest::Approx(1.0).epsilon(1e-9));

  // eta_+ = 0.9: von Neumann regime, P_I = 0.9 * 0.5 + 0.1 = 0.55
  const auto vn = usd::jaeger_shimony(theta_pair(kPi / 8.0, 0.9));
  CHECK(vn.inconclusive_prob == doctest::Approx(0.55).epsilon(1e-9));
  CHECK(vn.cond_probs[1] == doctest::Approx(0.0));
  CHECK(vn.cond_probs[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(vn.boundary_eigenvalue == doctest::Approx(1.0).epsilon(1e-9));

  // eta_+ = 0.6: P_I = 2 sqrt(0.24) * overlap = 0.69282
  const auto mid = usd::jaeger_shimony(theta_pair(kPi / 8.0, 0.6));
  CHECK(mid.inconclusive_prob == doctest::Approx(0.69282).epsilon(1e-4));
  CHECK(mid.inconclusive_prob ==
        doctest::Approx(2.0 * std::sqrt(0.24) * std::cos(kPi / 4.0))
            .epsilon(1e-12));

  // relabeling: the larger prior may sit in either slot
  const auto swapped = usd::jaeger_shimony(theta_pair(kPi / 8.0, 0.1));
  CHECK(swapped.inconclusive_prob == doctest::Approx(0.55).epsilon(1e-9));
  CHECK(swapped.cond_probs[0] == doctest::Approx(0.0));
  CHECK(swapped.cond_probs[1] == doctest::Approx(0.5).epsilon(1e-9));

  std::mt19937_64 rng(5);
  CHECK_THROWS_AS(usd::jaeger_shimony(random_independent_ensemble(rng, 3, 3)),
                  usd::WrongArity);
}

TEST_CASE("degenerate priors and orthogonal pairs") {
  // orthogonal pair, all weight on one state: still error-free with P_I = 0
  std::vector<usd::PureState> ortho{usd::PureState({1.0, 0.0}),
                                    usd::PureState({0.0, 1.0})};
  const auto sure = usd::jaeger_shimony(usd::StateEnsemble(ortho, {1.0, 0.0}));
  CHECK(sure.inconclusive_prob == doctest::Approx(0.0));
  CHECK(sure.cond_probs[0] == doctest::Approx(1.0));
  CHECK(sure.discrimination_prob == doctest::Approx(1.0));

  // overlapping pair with a zero prior: von Neumann regime, P_I = overlap^2
  const auto skewed = usd::jaeger_shimony(theta_pair(kPi / 8.0, 1.0));
  const double ov2 = std::cos(kPi / 4.0) * std::cos(kPi / 4.0);
  CHECK(skewed.inconclusive_prob == doctest::Approx(ov2).epsilon(1e-12));
  CHECK(skewed.cond_probs[1] == doctest::Approx(0.0));
}

TEST_CASE("a single-state ensemble is discriminated with certainty") {
  const usd::StateEnsemble one({usd::PureState({cxd(0.0, 1.0)})}, {1.0});
  CHECK(usd::check_independence(one).independent);
  const auto recip = usd::reciprocal_states(one);
  CHECK(recip.overlaps[0] == doctest::Approx(1.0));
  CHECK(usd::equal_p_solution(recip).discrimination_prob ==
        doctest::Approx(1.0));
  CHECK(usd::optimize_general(one).discrimination_prob ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(usd::grid_oracle(one, 0.01).discrimination_prob ==
        doctest::Approx(1.0));
  const auto m = usd::build_measurement(one, recip, {1.0});
  CHECK(usd::frobenius_norm(m.inconclusive_op) <= 1e-7);
}

TEST_CASE("the two regime formulas agree at the regime boundary") {
  for (double ov : {0.2, 0.5, 0.70711, 0.9}) {
    const double eta_plus = 1.0 / (1.0 + ov * ov);  // sqrt(eta_-/eta_+) = ov
    const double eta_minus = 1.0 - eta_plus;
    const double smooth = 2.0 * std::sqrt(eta_plus * eta_minus) * ov;
    const double von_neumann = eta_plus * ov * ov + eta_minus;
    CHECK(smooth == doctest::Approx(von_neumann).epsilon(1e-9));
  }
}

TEST_CASE("equal-p solution on closed-form cases") {
  std::mt19937_64 rng(8);
  const auto ortho = test_helpers::orthonormal_ensemble(rng, 4);
  const auto r1 = usd::equal_p_solution(usd::reciprocal_states(ortho));
  CHECK(r1.discrimination_prob == doctest::Approx(1.0).epsilon(1e-9));

  const auto r2 =
      usd::equal_p_solution(usd::reciprocal_states(theta_pair(kPi / 8.0, 0.5)));
  CHECK(r2.discrimination_prob == doctest::Approx(0.29289).epsilon(1e-4));
  CHECK(r2.boundary_eigenvalue == doctest::Approx(1.0).epsilon(1e-9));

  const usd::SchmidtState s({std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2)});
  const auto r3 =
      usd::equal_p_solution(usd::reciprocal_states(usd::derived_states(s)));
  CHECK(r3.discrimination_prob == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("general optimizer matches the two-state closed form") {
  for (double theta_deg : {2.0, 11.0, 22.5, 37.0, 44.0}) {
    for (double eta_plus : {0.5, 0.65, 0.8, 0.95}) {
      const double theta = theta_deg * kPi / 180.0;
      const auto ens = theta_pair(theta, eta_plus);
      const auto general = usd::optimize_general(ens);
      const double expected = js_inconclusive(eta_plus, std::cos(2.0 * theta));
      CHECK(general.inconclusive_prob ==
            doctest::Approx(expected).epsilon(1e-6));
      CHECK(general.boundary_eigenvalue == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("general optimizer matches equal-p on symmetric ensembles") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = test_helpers::random_schmidt(rng, 2 + trial % 4, 1e-2);
    const auto ens = usd::derived_states(s);
    const auto general = usd::optimize_general(ens);
    const auto equal = usd::equal_p_solution(usd::reciprocal_states(ens));
    CHECK(general.discrimination_prob ==
          doctest::Approx(equal.discrimination_prob).epsilon(1e-7));
  }
}

TEST_CASE("optimal P_D is invariant under relabeling of the states") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto ens = random_independent_ensemble(rng, n, n);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<usd::PureState> states;
    std::vector<double> priors(n);
    for (std::size_t i = 0; i < n; ++i) {
      states.push_back(ens.states[perm[i]]);
      priors[i] = ens.priors[perm[i]];
    }
    const auto a = usd::optimize_general(ens);
    const auto b = usd::optimize_general(usd::StateEnsemble(states, priors));
    CHECK(a.discrimination_prob ==
          doctest::Approx(b.discrimination_prob).epsilon(1e-7));
  }
}

TEST_CASE("P_D reaches 1 only for orthonormal ensembles") {
  std::mt19937_64 rng(15);
  const auto ortho = test_helpers::orthonormal_ensemble(rng, 3);
  CHECK(usd::optimize_general(ortho).discrimination_prob ==
        doctest::Approx(1.0).epsilon(1e-9));

  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto ens = random_independent_ensemble(rng, n, n, true);
    const double dist = usd::frobenius_norm(
        usd::gram(ens).entries -
        usd::ComplexMatrix::identity(ens.n()));
    if (dist < 0.05) continue;
    CHECK(usd::optimize_general(ens).discrimination_prob < 1.0);
    CHECK(usd::optimize_general(ens).discrimination_prob <= 1.0 - 1e-4);
  }
}

TEST_CASE("grid oracle basics") {
  std::mt19937_64 rng(16);
  const auto ortho = test_helpers::orthonormal_ensemble(rng, 2);
  const auto best = usd::grid_oracle(ortho, 0.05);
  CHECK(best.discrimination_prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(best.cond_probs[0] == doctest::Approx(1.0));
  CHECK(best.cond_probs[1] == doctest::Approx(1.0));

  const auto pair = usd::grid_oracle(theta_pair(kPi / 8.0, 0.5), 1e-3);
  CHECK(pair.discrimination_prob == doctest::Approx(0.293).epsilon(4e-3));

  CHECK_THROWS_AS(usd::grid_oracle(random_independent_ensemble(rng, 5, 5), 0.5),
                  usd::TooLarge);
  CHECK_THROWS_AS(usd::grid_oracle(ortho, 0.0), usd::DomainError);
}

TEST_CASE("serial and parallel grid scans return identical results") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto ens = random_independent_ensemble(rng, n, n);
    const auto serial = usd::grid_oracle(ens, 0.02, 1);
    const auto parallel = usd::grid_oracle(ens, 0.02, 4);
    CHECK(serial.discrimination_prob == parallel.discrimination_prob);
    CHECK(serial.cond_probs == parallel.cond_probs);
  }
}

TEST_CASE("the grid never beats the iterative optimum") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const auto ens = random_independent_ensemble(rng, n, n + trial % 2);
    const auto grid = usd::grid_oracle(ens, 0.01);
    const auto general = usd::optimize_general(ens);
    CHECK(grid.discrimination_prob <=
          general.discrimination_prob + 1e-9);
    CHECK(general.discrimination_prob <=
          grid.discrimination_prob + static_cast<double>(n) * 0.01 + 1e-9);
  }
}

TEST_CASE("embedding with nu = 0 reproduces the restricted operator exactly") {
  const auto ens = theta_pair(kPi / 8.0, 0.5);
  const auto recip = usd::reciprocal_states(ens);
  const auto opt = usd::optimize_general(ens);
  const auto comp = usd::complement_basis(recip, 2);

  usd::EmbeddingTrial trial;
  trial.chis.assign(2, std::vector<cxd>(comp.cols(), cxd{}));
  trial.chis[0][0] = 1.0;
  trial.chis[1][1] = 1.0;
  trial.mus = {1.0, 1.0};
  trial.nus = {cxd{}, cxd{}};

  const double lambda_s = usd::embedded_lambda(recip, opt.cond_probs, comp, trial);
  const double lambda =
      usd::probability_operator(recip, opt.cond_probs).max_eigenvalue;
  CHECK(lambda_s == doctest::Approx(lambda).epsilon(1e-12));
}

TEST_CASE("random embeddings never beat the restricted optimum") {
  const auto ens = theta_pair(kPi / 8.0, 0.5);
  const auto report = usd::embedding_no_gain_check(ens, 2, 1000, 2024);
  CHECK(report.embedded_bounded);
  CHECK(report.lambda_dominates);
  CHECK(report.max_embedded_P_D <= report.restricted_P_D + 1e-9);
  CHECK(report.restricted_P_D == doctest::Approx(0.29289).epsilon(1e-4));
  CHECK(report.min_lambda_gap >= -1e-9);
  CHECK(report.trials == 1000);
}

TEST_CASE("embedding trials are deterministic per seed and thread count") {
  std::mt19937_64 rng(20);
  const auto ens = random_independent_ensemble(rng, 3, 3);
  const auto a = usd::embedding_no_gain_check(ens, 2, 64, 7, 1);
  const auto b = usd::embedding_no_gain_check(ens, 2, 64, 7, 4);
  CHECK(a.max_embedded_P_D == b.max_embedded_P_D);
  CHECK(a.min_lambda_gap == b.min_lambda_gap);
  const auto c = usd::embedding_no_gain_check(ens, 2, 64, 8, 1);
  CHECK(a.max_embedded_P_D != c.max_embedded_P_D);
}

TEST_CASE("boundary eigenvalue is 1 for non-orthogonal optima") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto ens = random_independent_ensemble(rng, n, n + trial % 2);
    const auto opt = usd::optimize_general(ens);
    CHECK(opt.boundary_eigenvalue == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(opt.discrimination_prob ==
          doctest::Approx(1.0 - opt.inconclusive_prob).epsilon(1e-12));
    for (double p : opt.cond_probs) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

}  // TEST_SUITE
