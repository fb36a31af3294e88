// Command-line front end: loads ensemble / Schmidt-state JSON files,
// dispatches to the library, and prints a single JSON report on stdout.
//
// Exit codes: 0 success (and an independent verdict for `check`),
//             1 dependent / infeasible / out-of-domain inputs,
//             2 unreadable or schema-violating input (and usage errors).

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "usd/json_io.hpp"
#include "usd/optimizer.hpp"
#include "usd/simulator.hpp"

namespace {

using usd::io::json;

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

int run_check(const std::string& input, double tol) {
  const usd::StateEnsemble ensemble = usd::io::load_ensemble(input);
  const usd::IndependenceReport report = usd::check_independence(ensemble, tol);
  emit(usd::io::to_json(report));
  return report.independent ? 0 : 1;
}

int run_optimize(const std::string& input, bool equal_p, bool oracle,
                 double tol, double resolution) {
  const usd::StateEnsemble ensemble = usd::io::load_ensemble(input);
  usd::OptimizationResult result;
  if (equal_p) {
    result = usd::equal_p_solution(usd::reciprocal_states(ensemble, tol));
  } else if (oracle) {
    result = usd::grid_oracle(ensemble, resolution, 0, tol);
  } else if (ensemble.n() == 2) {
    result = usd::jaeger_shimony(ensemble);
  } else {
    result = usd::optimize_general(ensemble, tol);
  }
  emit(usd::io::to_json(result));
  return 0;
}

int run_measure(const std::string& input, std::uint64_t shots,
                std::uint64_t seed, int threads) {
  const usd::StateEnsemble ensemble = usd::io::load_ensemble(input);
  const usd::OptimizationResult opt = ensemble.n() == 2
                                          ? usd::jaeger_shimony(ensemble)
                                          : usd::optimize_general(ensemble);
  const usd::ReciprocalSet recip = usd::reciprocal_states(ensemble);
  const usd::USDMeasurement m =
      usd::build_measurement(ensemble, recip, opt.cond_probs);
  const usd::SimulationReport report =
      usd::simulate(m, ensemble, shots, seed, threads);

  json j = usd::io::to_json(report);
  j["method"] = usd::to_string(opt.method);
  j["cond_probs"] = json::array();
  for (double p : opt.cond_probs) j["cond_probs"].push_back(usd::io::round12(p));
  j["analytic_P_D"] = usd::io::round12(opt.discrimination_prob);
  emit(j);
  return 0;
}

int run_concentrate(const std::string& input, bool with_sim,
                    std::uint64_t shots, std::uint64_t seed) {
  const usd::SchmidtState state = usd::io::load_schmidt(input);
  const usd::ConcentrationResult result = usd::apply_concentration(state);
  json j = usd::io::to_json(result);
  j["seed"] = seed;
  if (with_sim)
    j["simulation"] =
        usd::io::to_json(usd::simulate_concentration(state, shots, seed));
  emit(j);
  return 0;
}

int run_bounds(const std::string& input, int samples) {
  const usd::StateEnsemble ensemble = usd::io::load_ensemble(input);
  const double overlap = usd::idp_bound(ensemble);
  json tradeoff = json::array();
  for (int i = 0; i < samples; ++i) {
    const double p_i = overlap * i / (samples - 1);
    tradeoff.push_back(json{{"P_I", usd::io::round12(p_i)},
                            {"P_E", usd::io::round12(usd::error_tradeoff(
                                        p_i, overlap))}});
  }
  emit(json{{"P_IDP", usd::io::round12(overlap)},
            {"helstrom", usd::io::round12(usd::helstrom_bound(overlap))},
            {"tradeoff", std::move(tradeoff)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-error discrimination of non-orthogonal pure states and "
               "entanglement concentration"};
  app.require_subcommand(1);

  std::string input;
  double tol = 1e-10;
  double resolution = 1e-3;
  bool equal_p = false;
  bool oracle = false;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 42;
  int threads = 0;
  int samples = 21;

  CLI::App* check = app.add_subcommand("check", "Linear-independence report");
  check->add_option("input", input, "ensemble JSON file")->required();
  check->add_option("--tol", tol, "relative independence tolerance");

  CLI::App* optimize =
      app.add_subcommand("optimize", "Optimal discrimination probabilities");
  optimize->add_option("input", input, "ensemble JSON file")->required();
  CLI::Option* opt_equal =
      optimize->add_flag("--equal-p", equal_p, "force equal conditional probabilities");
  optimize->add_flag("--oracle", oracle, "brute-force grid search (n <= 4)")
      ->excludes(opt_equal);
  optimize->add_option("--tol", tol, "relative independence tolerance");
  optimize->add_option("--resolution", resolution, "grid step for --oracle")
      ->check(CLI::Range(1e-6, 1.0));

  CLI::App* measure =
      app.add_subcommand("measure", "Simulate the optimized measurement");
  measure->add_option("input", input, "ensemble JSON file")->required();
  measure->add_option("--shots", shots, "number of simulated preparations");
  measure->add_option("--seed", seed, "generator seed");
  measure->add_option("--threads", threads, "sampling threads (0 = default)");

  CLI::App* concentrate =
      app.add_subcommand("concentrate", "Entanglement concentration analysis");
  concentrate->add_option("input", input, "Schmidt-state JSON file")->required();
  CLI::Option* conc_shots =
      concentrate->add_option("--shots", shots, "also run a success/failure simulation");
  concentrate->add_option("--seed", seed, "generator seed");

  CLI::App* bounds =
      app.add_subcommand("bounds", "Two-state bounds and error tradeoff curve");
  bounds->add_option("input", input, "ensemble JSON file")->required();
  bounds->add_option("--tradeoff-samples", samples, "points on the tradeoff curve")
      ->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    std::cout << json{{"error", {{"kind", "UsageError"}, {"detail", e.what()}}}}
                     .dump(2)
              << std::endl;
    return 2;
  }

  try {
    if (check->parsed()) return run_check(input, tol);
    if (optimize->parsed())
      return run_optimize(input, equal_p, oracle, tol, resolution);
    if (measure->parsed()) return run_measure(input, shots, seed, threads);
    if (concentrate->parsed())
      return run_concentrate(input, conc_shots->count() > 0, shots, seed);
    if (bounds->parsed()) return run_bounds(input, samples);
  } catch (const usd::ParseError& e) {
    emit(usd::io::error_json(e));
    return 2;
  } catch (const usd::Error& e) {
    emit(usd::io::error_json(e));
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
