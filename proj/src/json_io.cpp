#include "heyde/json_io.hpp"

#include <algorithm>
#include <set>

namespace heyde {

namespace {

[[noreturn]] void parse_fail(const std::string& context,
                             const std::string& what) {
  raise(ErrorCode::parse_error, context + ": " + what);
}

const Json& expect_object(const Json& j, const std::string& context) {
  if (!j.is_object()) parse_fail(context, "expected an object");
  return j;
}

const Json& expect_array(const Json& j, const std::string& context) {
  if (!j.is_array()) parse_fail(context, "expected an array");
  return j;
}

double expect_number(const Json& j, const std::string& context) {
  if (!j.is_number()) parse_fail(context, "expected a number");
  return j.get<double>();
}

int expect_int(const Json& j, const std::string& context) {
  if (!j.is_number_integer()) parse_fail(context, "expected an integer");
  return j.get<int>();
}

std::string expect_string(const Json& j, const std::string& context) {
  if (!j.is_string()) parse_fail(context, "expected a string");
  return j.get<std::string>();
}

}  // namespace

void require_keys(const Json& object, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional,
                  const std::string& context) {
  expect_object(object, context);
  for (const auto& item : object.items()) {
    const bool known =
        std::find(required.begin(), required.end(), item.key()) !=
            required.end() ||
        std::find(optional.begin(), optional.end(), item.key()) !=
            optional.end();
    if (!known) parse_fail(context, "unknown key \"" + item.key() + "\"");
  }
  for (const auto& key : required) {
    if (!object.contains(key)) {
      parse_fail(context, "missing required key \"" + key + "\"");
    }
  }
}

namespace {

/* folds -0.0 into +0.0 so algebraically equal documents are byte-equal */
double normalized(double x) { return x + 0.0; }

}  // namespace

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(normalized(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& context) {
  expect_array(j, context);
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) parse_fail(context, "matrix needs at least one row");
  const Json& first = j.at(0);
  expect_array(first, context + "[0]");
  const Eigen::Index cols = static_cast<Eigen::Index>(first.size());
  if (cols == 0) parse_fail(context, "matrix rows need at least one entry");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string row_ctx = context + "[" + std::to_string(i) + "]";
    const Json& row = expect_array(j.at(static_cast<std::size_t>(i)), row_ctx);
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      parse_fail(row_ctx, "ragged matrix rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = expect_number(row.at(static_cast<std::size_t>(k)),
                              row_ctx + "[" + std::to_string(k) + "]");
    }
  }
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(normalized(v(i)));
  }
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& context) {
  expect_array(j, context);
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        expect_number(j.at(i), context + "[" + std::to_string(i) + "]");
  }
  return v;
}

Json operator_to_json(const LinearOperator& alpha) {
  return Json{{"n", alpha.dim()}, {"rows", matrix_to_json(alpha.entries())}};
}

LinearOperator operator_from_json(const Json& j) {
  require_keys(j, {"n", "rows"}, {}, "operator");
  const int n = expect_int(j.at("n"), "operator.n");
  if (n < 1 || n > 100) {
    parse_fail("operator.n", "dimension must lie in [1, 100]");
  }
  const Eigen::MatrixXd rows = matrix_from_json(j.at("rows"), "operator.rows");
  if (rows.rows() != n || rows.cols() != n) {
    parse_fail("operator.rows", "expected an n x n matrix");
  }
  return LinearOperator(rows);
}

Json subspace_to_json(const Subspace& s) {
  Json basis = Json::array();
  for (Eigen::Index c = 0; c < s.basis().cols(); ++c) {
    basis.push_back(vector_to_json(s.basis().col(c)));
  }
  return Json{{"ambient_dim", s.ambient_dim()},
              {"basis", std::move(basis)},
              {"label", s.label()}};
}

Subspace subspace_from_json(const Json& j) {
  require_keys(j, {"ambient_dim", "basis", "label"}, {}, "subspace");
  const int n = expect_int(j.at("ambient_dim"), "subspace.ambient_dim");
  if (n < 1 || n > 100) {
    parse_fail("subspace.ambient_dim", "dimension must lie in [1, 100]");
  }
  const std::string label = expect_string(j.at("label"), "subspace.label");
  const Json& basis_json = expect_array(j.at("basis"), "subspace.basis");
  Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(basis_json.size()));
  for (std::size_t c = 0; c < basis_json.size(); ++c) {
    const std::string ctx = "subspace.basis[" + std::to_string(c) + "]";
    const Eigen::VectorXd v = vector_from_json(basis_json.at(c), ctx);
    if (v.size() != n) parse_fail(ctx, "basis vector has wrong length");
    basis.col(static_cast<Eigen::Index>(c)) = v;
  }
  return Subspace::from_orthonormal(std::move(basis), label);
}

Json distribution_to_json(const ModelDistribution& mu) {
  Json out = Json::object();
  if (mu.gaussian_part()) {
    out["gaussian"] = Json{{"A", matrix_to_json(mu.gaussian_part()->exponent)},
                           {"b", vector_to_json(mu.gaussian_part()->mean)}};
  }
  if (mu.discrete_part()) {
    Json atoms = Json::array();
    for (const Atom& atom : mu.discrete_part()->atoms) {
      atoms.push_back(Json{{"point", vector_to_json(atom.point)},
                           {"weight", atom.weight}});
    }
    out["atoms"] = std::move(atoms);
  }
  if (mu.shift().size() > 0 && mu.shift().cwiseAbs().maxCoeff() > 0.0) {
    out["shift"] = vector_to_json(mu.shift());
  }
  if (out.empty()) {
    /* a pure point mass at the origin still needs its dimension recorded */
    out["shift"] = vector_to_json(mu.shift());
  }
  return out;
}

ModelDistribution distribution_from_json(const Json& j, int expected_dim) {
  require_keys(j, {}, {"gaussian", "atoms", "shift"}, "distribution");

  std::optional<GaussianComponent> gauss;
  if (j.contains("gaussian")) {
    const Json& g = j.at("gaussian");
    require_keys(g, {"A"}, {"b"}, "distribution.gaussian");
    GaussianComponent component;
    component.exponent = matrix_from_json(g.at("A"), "distribution.gaussian.A");
    if (g.contains("b")) {
      component.mean = vector_from_json(g.at("b"), "distribution.gaussian.b");
    } else {
      component.mean = Eigen::VectorXd::Zero(component.exponent.rows());
    }
    gauss = std::move(component);
  }

  std::optional<DiscreteMeasure> disc;
  if (j.contains("atoms")) {
    const Json& atoms_json = expect_array(j.at("atoms"), "distribution.atoms");
    if (atoms_json.empty()) {
      parse_fail("distribution.atoms", "atom list must not be empty");
    }
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < atoms_json.size(); ++i) {
      const std::string ctx = "distribution.atoms[" + std::to_string(i) + "]";
      require_keys(atoms_json.at(i), {"point", "weight"}, {}, ctx);
      Atom atom;
      atom.point = vector_from_json(atoms_json.at(i).at("point"),
                                    ctx + ".point");
      atom.weight = expect_number(atoms_json.at(i).at("weight"),
                                  ctx + ".weight");
      atoms.push_back(std::move(atom));
    }
    disc = DiscreteMeasure{std::move(atoms), {}};
  }

  std::optional<Eigen::VectorXd> shift;
  if (j.contains("shift")) {
    shift = vector_from_json(j.at("shift"), "distribution.shift");
  }

  int dim = expected_dim;
  if (gauss) dim = static_cast<int>(gauss->exponent.rows());
  else if (disc) dim = static_cast<int>(disc->atoms.front().point.size());
  else if (shift) dim = static_cast<int>(shift->size());
  if (dim < 1) {
    parse_fail("distribution",
               "cannot infer the dimension from an empty distribution");
  }
  if (expected_dim >= 1 && dim != expected_dim) {
    raise(ErrorCode::dimension_mismatch,
          "distribution dimension " + std::to_string(dim) +
              " does not match the expected " + std::to_string(expected_dim));
  }
  if (!shift) shift = Eigen::VectorXd::Zero(dim);
  return ModelDistribution::compose(std::move(gauss), std::move(disc),
                                    std::move(*shift));
}

Json residual_report_to_json(const ResidualReport& report) {
  return Json{{"equation", report.equation},
              {"sup_residual", report.sup_residual},
              {"argmax", Json{{"u", vector_to_json(report.argmax_u)},
                              {"v", vector_to_json(report.argmax_v)}}},
              {"points", report.points_evaluated}};
}

Json symmetry_report_to_json(const SymmetryTestReport& report) {
  Json points = Json::array();
  for (const auto& [u, v] : report.test_points) {
    points.push_back(Json{{"u", vector_to_json(u)}, {"v", vector_to_json(v)}});
  }
  return Json{{"statistic", report.statistic},
              {"threshold", report.threshold},
              {"rejected", report.rejected},
              {"samples", report.sample_count},
              {"seed", report.seed},
              {"test_points", std::move(points)},
              {"bootstrap", Json{{"resamples", report.bootstrap_resamples},
                                 {"percentile", report.bootstrap_percentile}}}};
}

Json spectral_summary_to_json(const SpectralSummary& summary) {
  Json eigenvalues = Json::array();
  for (const auto& lambda : summary.eigenvalues) {
    eigenvalues.push_back(Json{{"re", normalized(lambda.real())},
                               {"im", normalized(lambda.imag())}});
  }
  Json out{{"char_poly", summary.char_poly},
           {"eigenvalues", std::move(eigenvalues)},
           {"has_minus_one", summary.has_minus_one},
           {"minus_one_diagonalizable", summary.minus_one_diagonalizable}};
  if (summary.discriminant) out["discriminant"] = *summary.discriminant;
  return out;
}

Json solution_family_to_json(const SolutionFamily& family) {
  Json options = Json::array();
  for (const Subspace& s : family.gaussian_support_options) {
    options.push_back(subspace_to_json(s));
  }
  return Json{{"case_tag", case_tag_name(family.tag)},
              {"kernel", subspace_to_json(family.kernel)},
              {"complement", subspace_to_json(family.complement)},
              {"gaussian_support_options", std::move(options)},
              {"any_shared_line", family.any_shared_line},
              {"constraints", family.constraints},
              {"singular_flag", family.singular_flag},
              {"spectrum", spectral_summary_to_json(family.spectrum)}};
}

Json decomposition_to_json(const OperatorDecomposition& dec) {
  return Json{{"kernel", subspace_to_json(dec.kernel)},
              {"root", subspace_to_json(dec.root)},
              {"complement", subspace_to_json(dec.complement)},
              {"alpha_on_root", matrix_to_json(dec.alpha_on_root)},
              {"alpha_on_complement",
               matrix_to_json(dec.alpha_on_complement)},
              {"root_equals_eigen", dec.root_equals_eigen}};
}

Json witness_to_json(const Witness& witness) {
  Json out{{"mu1", distribution_to_json(witness.mu1)},
           {"mu2", distribution_to_json(witness.mu2)},
           {"shifts", Json{{"x1", vector_to_json(witness.x1)},
                           {"x2", vector_to_json(witness.x2)}}},
           {"residual_check", residual_report_to_json(witness.residual_check)}};
  if (witness.exponents) {
    out["exponents"] = Json{{"A1", matrix_to_json(witness.exponents->first)},
                            {"A2", matrix_to_json(witness.exponents->second)}};
  }
  if (!witness.omega_atoms.empty()) {
    Json atoms = Json::array();
    for (const Atom& atom : witness.omega_atoms) {
      atoms.push_back(Json{{"point", vector_to_json(atom.point)},
                           {"weight", atom.weight}});
    }
    out["omega_atoms"] = std::move(atoms);
  }
  return out;
}

}  // namespace heyde
