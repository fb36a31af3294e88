#include "usd/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace usd::io {

double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json complex_to_json(const cxd& v) {
  return json{{"re", round12(v.real())}, {"im", round12(v.imag())}};
}

cxd complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im") ||
      !j["re"].is_number() || !j["im"].is_number())
    throw ParseError("expected a complex number as {\"re\": ..., \"im\": ...}");
  return cxd(j["re"].get<double>(), j["im"].get<double>());
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

StateEnsemble ensemble_from_json(const json& j) {
  if (!j.is_object() || !j.contains("states") || !j.contains("priors"))
    throw ParseError("ensemble: expected {\"states\": [...], \"priors\": [...]}");
  const json& states = j["states"];
  const json& priors = j["priors"];
  if (!states.is_array() || states.empty() || !priors.is_array())
    throw ParseError("ensemble: states and priors must be non-empty arrays");

  try {
    std::vector<PureState> psis;
    psis.reserve(states.size());
    for (const json& s : states) {
      if (!s.is_array() || s.empty())
        throw ParseError("ensemble: each state is a non-empty array of complex numbers");
      std::vector<cxd> amp;
      amp.reserve(s.size());
      for (const json& entry : s) amp.push_back(complex_from_json(entry));
      psis.push_back(PureState(std::move(amp)));
    }
    std::vector<double> eta;
    eta.reserve(priors.size());
    for (const json& p : priors) {
      if (!p.is_number()) throw ParseError("ensemble: priors must be numbers");
      eta.push_back(p.get<double>());
    }
    return StateEnsemble(std::move(psis), std::move(eta));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("ensemble: " + std::string(e.what()));
  }
}

SchmidtState schmidt_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array() ||
      j["coeffs"].empty())
    throw ParseError("schmidt state: expected {\"coeffs\": [{\"re\":..,\"im\":..}, ...]}");
  try {
    std::vector<cxd> coeffs;
    coeffs.reserve(j["coeffs"].size());
    for (const json& entry : j["coeffs"])
      coeffs.push_back(complex_from_json(entry));
    return SchmidtState(std::move(coeffs));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("schmidt state: " + std::string(e.what()));
  }
}

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

StateEnsemble load_ensemble(const std::string& path) {
  return ensemble_from_json(load_json_file(path));
}

SchmidtState load_schmidt(const std::string& path) {
  return schmidt_from_json(load_json_file(path));
}

json to_json(const IndependenceReport& report) {
  return json{{"independent", report.independent},
              {"smallest_gram_eigenvalue", round12(report.smallest_eigenvalue)},
              {"largest_gram_eigenvalue", round12(report.largest_eigenvalue)}};
}

json to_json(const OptimizationResult& result) {
  json probs = json::array();
  for (double p : result.cond_probs) probs.push_back(round12(p));
  return json{{"method", to_string(result.method)},
              {"cond_probs", std::move(probs)},
              {"P_D", round12(result.discrimination_prob)},
              {"P_I", round12(result.inconclusive_prob)},
              {"boundary_eigenvalue", round12(result.boundary_eigenvalue)}};
}

json to_json(const SimulationReport& report) {
  return json{{"shots", report.shots},
              {"seed", report.seed},
              {"generator", report.generator},
              {"outcome_labels", report.outcome_labels},
              {"tallies", report.tallies},
              {"error_count", report.error_count},
              {"empirical_P_D", round12(report.empirical_P_D)}};
}

json to_json(const ConcentrationResult& result) {
  json succ = json::array();
  for (const auto& c : result.success_state.coeffs)
    succ.push_back(complex_to_json(c));
  json fail_weights = json::array();
  for (double w : result.failure_state.schmidt_weights)
    fail_weights.push_back(round12(w));
  return json{{"P_C", round12(result.success_prob)},
              {"failure_prob", round12(result.failure_prob)},
              {"success_schmidt_coefficients", std::move(succ)},
              {"failure_schmidt_weights", std::move(fail_weights)},
              {"failure_schmidt_rank", result.failure_state.schmidt_rank},
              {"orthogonalisation_op",
               matrix_to_json(result.orthogonalisation_op)}};
}

json to_json(const EmbeddingReport& report) {
  return json{{"restricted_P_D", round12(report.restricted_P_D)},
              {"restricted_lambda", round12(report.restricted_lambda)},
              {"max_embedded_P_D", round12(report.max_embedded_P_D)},
              {"min_lambda_gap", round12(report.min_lambda_gap)},
              {"trials", report.trials},
              {"embedded_bounded", report.embedded_bounded},
              {"lambda_dominates", report.lambda_dominates}};
}

json error_json(const Error& e) {
  return json{{"error", json{{"kind", e.kind()}, {"detail", e.what()}}}};
}

}  // namespace usd::io
