#pragma once

#include <json.hpp>
#include <string>

#include "heyde/classifier.hpp"
#include "heyde/distribution_model.hpp"
#include "heyde/operator_analysis.hpp"
#include "heyde/verifier.hpp"
#include "heyde/witness.hpp"

namespace heyde {

using Json = nlohmann::json;

/* Rejects unknown keys and reports missing required keys, naming the
 * offending field (parse_error). */
void require_keys(const Json& object, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional,
                  const std::string& context);

Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& context);

Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j, const std::string& context);

/* {"n": 2, "rows": [[...], [...]]} */
Json operator_to_json(const LinearOperator& alpha);
LinearOperator operator_from_json(const Json& j);

/* {"ambient_dim": 2, "basis": [[...vector...], ...], "label": "K"} */
Json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j);

/* {"gaussian": {"A": [[...]], "b": [...]},
 *  "atoms": [{"point": [...], "weight": 0.5}, ...],
 *  "shift": [...]}              (absent factors omitted)
 * expected_dim -1 infers the dimension from whichever part is present. */
Json distribution_to_json(const ModelDistribution& mu);
ModelDistribution distribution_from_json(const Json& j, int expected_dim);

/* {"equation": ..., "sup_residual": ..., "argmax": {"u": [...], "v": [...]},
 *  "points": N} */
Json residual_report_to_json(const ResidualReport& report);

Json symmetry_report_to_json(const SymmetryTestReport& report);
Json spectral_summary_to_json(const SpectralSummary& summary);
Json solution_family_to_json(const SolutionFamily& family);
Json decomposition_to_json(const OperatorDecomposition& dec);
Json witness_to_json(const Witness& witness);

}  // namespace heyde
