// Benchmark comparing the serial reference kernels against their
// OpenMP-sharded counterparts: Monte-Carlo sampling, the grid-oracle scan,
// and the embedding trials. Both paths must agree exactly; the timings show
// what sharding buys on the current machine.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "usd/concentration.hpp"
#include "usd/optimizer.hpp"
#include "usd/simulator.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

usd::StateEnsemble trine_ensemble() {
  // Derived states of an uneven three-level Schmidt state: non-orthogonal,
  // linearly independent, with a known optimum.
  const usd::SchmidtState s({std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2)});
  return usd::derived_states(s);
}

void report(const char* name, double serial_s, double parallel_s, bool match) {
  std::printf("%-22s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n",
              name, serial_s, parallel_s, serial_s / parallel_s,
              match ? "results match" : "RESULTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("threads available: %d\n", threads);

  const usd::StateEnsemble ensemble = trine_ensemble();
  const usd::ReciprocalSet recip = usd::reciprocal_states(ensemble);
  const usd::OptimizationResult opt = usd::optimize_general(ensemble);
  const usd::USDMeasurement m =
      usd::build_measurement(ensemble, recip, opt.cond_probs);

  {
    constexpr std::uint64_t kShots = 4000000;
    auto t0 = Clock::now();
    const usd::SimulationReport serial = usd::simulate(m, ensemble, kShots, 7, 1);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    const usd::SimulationReport parallel = usd::simulate(m, ensemble, kShots, 7, 0);
    const double tp = seconds_since(t0);
    report("simulate (4e6 shots)", ts, tp, serial.tallies == parallel.tallies);
  }

  {
    constexpr double kResolution = 2e-3;
    auto t0 = Clock::now();
    const usd::OptimizationResult serial = usd::grid_oracle(ensemble, kResolution, 1);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    const usd::OptimizationResult parallel = usd::grid_oracle(ensemble, kResolution, 0);
    const double tp = seconds_since(t0);
    report("grid_oracle (res 2e-3)", ts, tp,
           serial.cond_probs == parallel.cond_probs &&
               serial.discrimination_prob == parallel.discrimination_prob);
  }

  {
    constexpr int kTrials = 20000;
    auto t0 = Clock::now();
    const usd::EmbeddingReport serial =
        usd::embedding_no_gain_check(ensemble, 2, kTrials, 11, 1);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    const usd::EmbeddingReport parallel =
        usd::embedding_no_gain_check(ensemble, 2, kTrials, 11, 0);
    const double tp = seconds_since(t0);
    report("embedding (2e4 trials)", ts, tp,
           serial.max_embedded_P_D == parallel.max_embedded_P_D &&
               serial.min_lambda_gap == parallel.min_lambda_gap);
  }
  return 0;
}
