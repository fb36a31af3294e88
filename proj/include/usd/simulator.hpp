#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "usd/concentration.hpp"
#include "usd/ensemble.hpp"
#include "usd/measurement.hpp"

namespace usd {

// Tally of a seeded Monte-Carlo run. tallies[j] counts outcomes for shots
// prepared in state j; the final column is the inconclusive outcome.
// Every shot draws its own substream from (seed, shot index), so the counts
// do not depend on how shots are sharded over threads.
struct SimulationReport {
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::string generator;
  std::vector<std::string> outcome_labels;
  std::vector<std::vector<std::uint64_t>> tallies;
  std::uint64_t error_count = 0;  // prepared j, detected k with k != j
  double empirical_P_D = 0.0;
};

// Samples preparation (from the priors) and measurement outcomes (from the
// analytic distribution). Outcome probabilities below 1e-9 are clamped to
// exact zero and the row renormalized, so zero-error holds exactly in the
// samples. threads = 1 forces the serial reference path; any other value
// gives bit-identical tallies.
SimulationReport simulate(const USDMeasurement& m, const StateEnsemble& ensemble,
                          std::uint64_t shots, std::uint64_t seed,
                          int threads = 0);

// Bernoulli sampling of the concentration success probability P_C.
SimulationReport simulate_concentration(const SchmidtState& state,
                                        std::uint64_t shots, std::uint64_t seed,
                                        int threads = 0);

}  // namespace usd
