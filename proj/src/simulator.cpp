#include "usd/simulator.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "usd/errors.hpp"
#include "usd/rng.hpp"

namespace usd {

namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
  return threads <= 0 ? omp_get_max_threads() : threads;
#else
  (void)threads;
  return 1;
#endif
}

std::size_t pick(const std::vector<double>& cdf, double u) {
  for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
    if (u < cdf[i]) return i;
  return cdf.size() - 1;
}

// Shot-indexed tally accumulation shared by the serial and parallel paths.
// outcome_of must be a pure function of the shot index.
template <typename OutcomeFn>
void tally_shots(std::uint64_t shots, int threads, std::size_t rows,
                 std::size_t cols, OutcomeFn&& outcome_of,
                 std::vector<std::vector<std::uint64_t>>& tallies) {
  tallies.assign(rows, std::vector<std::uint64_t>(cols, 0));
  const int nthreads = resolve_threads(threads);
  if (nthreads <= 1) {
    for (std::uint64_t i = 0; i < shots; ++i) {
      const auto [r, c] = outcome_of(i);
      ++tallies[r][c];
    }
    return;
  }
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
  {
    std::vector<std::vector<std::uint64_t>> local(
        rows, std::vector<std::uint64_t>(cols, 0));
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(shots); ++i) {
      const auto [r, c] = outcome_of(static_cast<std::uint64_t>(i));
      ++local[r][c];
    }
#pragma omp critical(usd_simulate_merge)
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) tallies[r][c] += local[r][c];
  }
#else
  for (std::uint64_t i = 0; i < shots; ++i) {
    const auto [r, c] = outcome_of(i);
    ++tallies[r][c];
  }
#endif
}

}  // namespace

SimulationReport simulate(const USDMeasurement& m, const StateEnsemble& ensemble,
                          std::uint64_t shots, std::uint64_t seed, int threads) {
  if (shots < 1) throw DomainError("simulate: shots must be >= 1");
  const std::size_t n = ensemble.n();

  const OutcomeDistribution dist = outcome_distribution(m, ensemble);

  std::vector<double> prep_cdf(n);
  {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += ensemble.priors[j];
      prep_cdf[j] = acc;
    }
    prep_cdf[n - 1] = 1.0;
  }

  // Probabilities below 1e-9 are round-off from the zero-error constraint;
  // clamp them to exact zero so no error event can ever be sampled.
  std::vector<std::vector<double>> outcome_cdf(n, std::vector<double>(n + 1));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> row(n + 1);
    for (std::size_t k = 0; k < n; ++k)
      row[k] = dist.detect[j][k] < 1e-9 ? 0.0 : dist.detect[j][k];
    row[n] = dist.inconclusive[j] < 1e-9 ? 0.0 : dist.inconclusive[j];
    double sum = 0.0;
    for (double v : row) sum += v;
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      acc += row[k] / sum;
      outcome_cdf[j][k] = acc;
    }
    outcome_cdf[j][n] = 1.0;
  }

  SimulationReport report;
  report.shots = shots;
  report.seed = seed;
  report.generator = rng::kGeneratorName;
  report.outcome_labels.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k)
    report.outcome_labels.push_back("detect-" + std::to_string(k));
  report.outcome_labels.push_back("inconclusive");

  const auto outcome_of = [&](std::uint64_t i) {
    rng::SplitMix64 gen = rng::substream(seed, i);
    const std::size_t prepared = pick(prep_cdf, gen.next_unit());
    const std::size_t outcome = pick(outcome_cdf[prepared], gen.next_unit());
    return std::pair<std::size_t, std::size_t>{prepared, outcome};
  };
  tally_shots(shots, threads, n, n + 1, outcome_of, report.tallies);

  std::uint64_t correct = 0;
  for (std::size_t j = 0; j < n; ++j) {
    correct += report.tallies[j][j];
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) report.error_count += report.tallies[j][k];
  }
  report.empirical_P_D =
      static_cast<double>(correct) / static_cast<double>(shots);
  return report;
}

SimulationReport simulate_concentration(const SchmidtState& state,
                                        std::uint64_t shots, std::uint64_t seed,
                                        int threads) {
  if (shots < 1) throw DomainError("simulate_concentration: shots must be >= 1");
  const double p_c = concentration_probability(state);

  SimulationReport report;
  report.shots = shots;
  report.seed = seed;
  report.generator = rng::kGeneratorName;
  report.outcome_labels = {"success", "failure"};

  const auto outcome_of = [&](std::uint64_t i) {
    rng::SplitMix64 gen = rng::substream(seed, i);
    const std::size_t outcome = gen.next_unit() < p_c ? 0 : 1;
    return std::pair<std::size_t, std::size_t>{0, outcome};
  };
  tally_shots(shots, threads, 1, 2, outcome_of, report.tallies);

  report.error_count = 0;
  report.empirical_P_D = static_cast<double>(report.tallies[0][0]) /
                         static_cast<double>(shots);
  return report;
}

}  // namespace usd
