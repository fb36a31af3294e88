#pragma once

#include <string>

#include "json.hpp"
#include "usd/concentration.hpp"
#include "usd/ensemble.hpp"
#include "usd/errors.hpp"
#include "usd/optimizer.hpp"
#include "usd/simulator.hpp"

namespace usd::io {

using json = nlohmann::json;

// Reports serialize numbers at 12 significant decimal digits: lossless
// enough for the 1e-9 tolerances used everywhere, and diff-friendly.
double round12(double x);

json complex_to_json(const cxd& v);
cxd complex_from_json(const json& j);
json matrix_to_json(const ComplexMatrix& m);

// Input schemas. Violations (wrong shape, unnormalized states, bad priors,
// zero Schmidt coefficients) re-throw as ParseError: an input file that
// breaks its schema is a parse failure, not a math failure.
StateEnsemble ensemble_from_json(const json& j);
SchmidtState schmidt_from_json(const json& j);
StateEnsemble load_ensemble(const std::string& path);
SchmidtState load_schmidt(const std::string& path);

json to_json(const IndependenceReport& report);
json to_json(const OptimizationResult& result);
json to_json(const SimulationReport& report);
json to_json(const ConcentrationResult& result);
json to_json(const EmbeddingReport& report);

json error_json(const Error& e);

}  // namespace usd::io
