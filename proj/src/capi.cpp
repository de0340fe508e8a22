#include "heyde/heyde.h"

#include <cstring>
#include <new>
#include <random>
#include <string>

#include "heyde/classifier.hpp"
#include "heyde/distribution_model.hpp"
#include "heyde/json_io.hpp"
#include "heyde/operator_analysis.hpp"
#include "heyde/verifier.hpp"
#include "heyde/witness.hpp"

struct hy_operator {
  heyde::LinearOperator value;
};

struct hy_distribution {
  heyde::ModelDistribution value;
};

namespace {

thread_local std::string g_last_error;

hy_status status_of(heyde::ErrorCode code) {
  using heyde::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return HY_ERROR_INVALID_ARGUMENT;
    case ErrorCode::parse_error: return HY_ERROR_PARSE;
    case ErrorCode::dimension_mismatch: return HY_ERROR_DIMENSION_MISMATCH;
    case ErrorCode::not_invariant: return HY_ERROR_NOT_INVARIANT;
    case ErrorCode::domain_error: return HY_ERROR_DOMAIN;
    case ErrorCode::atom_blowup: return HY_ERROR_ATOM_BLOWUP;
    case ErrorCode::non_psd: return HY_ERROR_NON_PSD;
    case ErrorCode::atoms_outside_kernel: return HY_ERROR_ATOMS_OUTSIDE_KERNEL;
    case ErrorCode::residual_check_failed: return HY_ERROR_RESIDUAL_CHECK;
    case ErrorCode::internal: return HY_ERROR_INTERNAL;
  }
  return HY_ERROR_INTERNAL;
}

/* run fn, translating exceptions into status codes */
template <typename Fn>
hy_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HY_OK;
  } catch (const heyde::Error& error) {
    g_last_error = error.what();
    return status_of(error.code());
  } catch (const nlohmann::json::exception& error) {
    g_last_error = error.what();
    return HY_ERROR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return HY_ERROR_INTERNAL;
  } catch (const std::exception& error) {
    g_last_error = error.what();
    return HY_ERROR_INTERNAL;
  }
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

heyde::Json parse_document(const char* text, const std::string& context) {
  if (text == nullptr) {
    heyde::raise(heyde::ErrorCode::invalid_argument,
                 context + ": null input");
  }
  heyde::Json j = heyde::Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    heyde::raise(heyde::ErrorCode::parse_error,
                 context + ": malformed JSON");
  }
  return j;
}

heyde::Json parse_options(const char* options_json,
                          const std::string& context) {
  if (options_json == nullptr) return heyde::Json::object();
  return parse_document(options_json, context);
}

void require_out(const void* out, const char* what) {
  if (out == nullptr) {
    heyde::raise(heyde::ErrorCode::invalid_argument,
                 std::string(what) + ": null output pointer");
  }
}

double option_number(const heyde::Json& options, const char* key,
                     double fallback) {
  if (!options.contains(key)) return fallback;
  if (!options.at(key).is_number()) {
    heyde::raise(heyde::ErrorCode::parse_error,
                 std::string("options.") + key + ": expected a number");
  }
  return options.at(key).get<double>();
}

std::uint64_t option_seed(const heyde::Json& options) {
  if (!options.contains("seed")) return 0;
  if (!options.at("seed").is_number_integer() ||
      (options.at("seed").is_number_integer() &&
       !options.at("seed").is_number_unsigned() &&
       options.at("seed").get<long long>() < 0)) {
    heyde::raise(heyde::ErrorCode::parse_error,
                 "options.seed: expected a nonnegative integer");
  }
  return options.at("seed").get<std::uint64_t>();
}

}  // namespace

extern "C" {

const char* hy_status_name(hy_status status) {
  switch (status) {
    case HY_OK: return "HY_OK";
    case HY_ERROR_INVALID_ARGUMENT: return "HY_ERROR_INVALID_ARGUMENT";
    case HY_ERROR_PARSE: return "HY_ERROR_PARSE";
    case HY_ERROR_DIMENSION_MISMATCH: return "HY_ERROR_DIMENSION_MISMATCH";
    case HY_ERROR_NOT_INVARIANT: return "HY_ERROR_NOT_INVARIANT";
    case HY_ERROR_DOMAIN: return "HY_ERROR_DOMAIN";
    case HY_ERROR_ATOM_BLOWUP: return "HY_ERROR_ATOM_BLOWUP";
    case HY_ERROR_NON_PSD: return "HY_ERROR_NON_PSD";
    case HY_ERROR_ATOMS_OUTSIDE_KERNEL:
      return "HY_ERROR_ATOMS_OUTSIDE_KERNEL";
    case HY_ERROR_RESIDUAL_CHECK: return "HY_ERROR_RESIDUAL_CHECK";
    case HY_ERROR_INTERNAL: return "HY_ERROR_INTERNAL";
  }
  return "HY_ERROR_UNKNOWN";
}

const char* hy_last_error_message(void) { return g_last_error.c_str(); }

hy_status hy_operator_parse(const char* json_text, hy_operator** out) {
  return guarded([&] {
    require_out(out, "hy_operator_parse");
    const heyde::Json j = parse_document(json_text, "operator");
    *out = new hy_operator{heyde::operator_from_json(j)};
  });
}

hy_status hy_operator_create(int n, const double* entries, hy_operator** out) {
  return guarded([&] {
    require_out(out, "hy_operator_create");
    if (n < 1 || entries == nullptr) {
      heyde::raise(heyde::ErrorCode::invalid_argument,
                   "hy_operator_create: need n >= 1 and entries");
    }
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = entries[i * n + j];
    }
    *out = new hy_operator{heyde::LinearOperator(std::move(m))};
  });
}

hy_status hy_operator_jordan_cell(int n, hy_operator** out) {
  return guarded([&] {
    require_out(out, "hy_operator_jordan_cell");
    *out = new hy_operator{heyde::jordan_cell(n)};
  });
}

void hy_operator_free(hy_operator* op) { delete op; }

int hy_operator_dim(const hy_operator* op) {
  return op == nullptr ? 0 : op->value.dim();
}

hy_status hy_distribution_parse(const char* json_text, int expected_dim,
                                hy_distribution** out) {
  return guarded([&] {
    require_out(out, "hy_distribution_parse");
    const heyde::Json j = parse_document(json_text, "distribution");
    *out = new hy_distribution{
        heyde::distribution_from_json(j, expected_dim > 0 ? expected_dim : -1)};
  });
}

hy_status hy_distribution_point_mass(int n, const double* x,
                                     hy_distribution** out) {
  return guarded([&] {
    require_out(out, "hy_distribution_point_mass");
    if (n < 1 || x == nullptr) {
      heyde::raise(heyde::ErrorCode::invalid_argument,
                   "hy_distribution_point_mass: need n >= 1 and a point");
    }
    Eigen::VectorXd point(n);
    for (int i = 0; i < n; ++i) point(i) = x[i];
    *out = new hy_distribution{
        heyde::ModelDistribution::point_mass(std::move(point))};
  });
}

void hy_distribution_free(hy_distribution* dist) { delete dist; }

int hy_distribution_dim(const hy_distribution* dist) {
  return dist == nullptr ? 0 : dist->value.dim();
}

hy_status hy_distribution_cf(const hy_distribution* dist, const double* y,
                             double* out_re, double* out_im) {
  return guarded([&] {
    if (dist == nullptr || y == nullptr || out_re == nullptr ||
        out_im == nullptr) {
      heyde::raise(heyde::ErrorCode::invalid_argument,
                   "hy_distribution_cf: null argument");
    }
    Eigen::VectorXd point(dist->value.dim());
    for (int i = 0; i < dist->value.dim(); ++i) point(i) = y[i];
    const std::complex<double> value = heyde::cf_eval(dist->value, point);
    *out_re = value.real();
    *out_im = value.imag();
  });
}

hy_status hy_analyze(const hy_operator* op, char** out_json) {
  return guarded([&] {
    require_out(out_json, "hy_analyze");
    if (op == nullptr) {
      heyde::raise(heyde::ErrorCode::invalid_argument,
                   "hy_analyze: null operator");
    }
    const heyde::OperatorDecomposition dec = heyde::decompose(op->value);
    const heyde::SpectralSummary summary = heyde::spectral_summary(op->value);
    const heyde::Json out{
        {"command", "analyze"},
        {"operator", heyde::operator_to_json(op->value)},
        {"decomposition", heyde::decomposition_to_json(dec)},
        {"spectrum", heyde::spectral_summary_to_json(summary)}};
    *out_json = copy_string(out.dump(2));
  });
}

hy_status hy_classify(const hy_operator* op, char** out_json) {
  return guarded([&] {
    require_out(out_json, "hy_classify");
    if (op == nullptr) {
      heyde::raise(heyde::ErrorCode::invalid_argument,
                   "hy_classify: null operator");
    }
    const heyde::SolutionFamily family =
        op->value.dim() == 2 ? heyde::classify2d(op->value)
                             : heyde::classify_general(op->value);
    const heyde::Json out{{"command", "classify"},
                          {"operator", heyde::operator_to_json(op->value)},
                          {"family", heyde::solution_family_to_json(family)}};
    *out_json = copy_string(out.dump(2));
  });
}

hy_status hy_construct(const hy_operator* op, const char* options_json,
                       char** out_json) {
  return guarded([&] {
    require_out(out_json, "hy_construct");
    if (op == nullptr) {
      heyde::raise(heyde::ErrorCode::invalid_argument,
                   "hy_construct: null operator");
    }
    const heyde::Json options = parse_options(options_json, "options");
    heyde::require_keys(options, {},
                        {"omega_atoms", "shift", "gaussian_scale"}, "options");

    heyde::WitnessOptions witness_options;
    if (options.contains("omega_atoms")) {
      const heyde::Json& atoms = options.at("omega_atoms");
      if (!atoms.is_array()) {
        heyde::raise(heyde::ErrorCode::parse_error,
                     "options.omega_atoms: expected an array");
      }
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string ctx = "options.omega_atoms[" + std::to_string(i) +
                                "]";
        heyde::require_keys(atoms.at(i), {"point", "weight"}, {}, ctx);
        heyde::Atom atom;
        atom.point = heyde::vector_from_json(atoms.at(i).at("point"),
                                             ctx + ".point");
        if (!atoms.at(i).at("weight").is_number()) {
          heyde::raise(heyde::ErrorCode::parse_error,
                       ctx + ".weight: expected a number");
        }
        atom.weight = atoms.at(i).at("weight").get<double>();
        witness_options.omega_atoms.push_back(std::move(atom));
      }
    }
    if (options.contains("shift")) {
      witness_options.shift =
          heyde::vector_from_json(options.at("shift"), "options.shift");
    }
    witness_options.gaussian_scale =
        option_number(options, "gaussian_scale", 1.0);

    const heyde::Witness witness =
        heyde::construct_witness(op->value, witness_options);

    heyde::Json config{{"gaussian_scale", witness_options.gaussian_scale},
                       {"shift", heyde::vector_to_json(
                                     witness_options.shift
                                         ? *witness_options.shift
                                         : Eigen::VectorXd::Zero(
                                               op->value.dim()))}};
    const heyde::Json out{{"command", "construct"},
                          {"operator", heyde::operator_to_json(op->value)},
                          {"config", std::move(config)},
                          {"witness", heyde::witness_to_json(witness)}};
    *out_json = copy_string(out.dump(2));
  });
}

hy_status hy_verify(const hy_operator* op, const hy_distribution* mu1,
                    const hy_distribution* mu2, const char* options_json,
                    char** out_json, int* out_rejected) {
  return guarded([&] {
    require_out(out_json, "hy_verify");
    if (op == nullptr || mu1 == nullptr || mu2 == nullptr) {
      heyde::raise(heyde::ErrorCode::invalid_argument,
                   "hy_verify: null argument");
    }
    const heyde::Json options = parse_options(options_json, "options");
    heyde::require_keys(
        options, {}, {"equation", "grid_step", "grid_max", "seed", "threshold"},
        "options");

    std::string equation = "heyde";
    if (options.contains("equation")) {
      if (!options.at("equation").is_string()) {
        heyde::raise(heyde::ErrorCode::parse_error,
                     "options.equation: expected a string");
      }
      equation = options.at("equation").get<std::string>();
      if (equation != "heyde" && equation != "sd" && equation != "both") {
        heyde::raise(heyde::ErrorCode::parse_error,
                     "options.equation: expected \"heyde\", \"sd\" or "
                     "\"both\"");
      }
    }
    const double grid_step = option_number(options, "grid_step", 0.5);
    const double grid_max = option_number(options, "grid_max", 2.0);
    const double threshold = option_number(options, "threshold", 1e-9);
    const std::uint64_t seed = option_seed(options);
    if (threshold < 0.0) {
      heyde::raise(heyde::ErrorCode::invalid_argument,
                   "options.threshold: must be nonnegative");
    }

    const heyde::GridSpec grid =
        heyde::GridSpec::regular(op->value.dim(), grid_step, grid_max, seed);

    heyde::Json reports = heyde::Json::array();
    bool rejected = false;
    if (equation == "heyde" || equation == "both") {
      const heyde::ResidualReport report =
          heyde::heyde_residual(mu1->value, mu2->value, op->value, grid);
      rejected = rejected || report.sup_residual > threshold;
      reports.push_back(heyde::residual_report_to_json(report));
    }
    if (equation == "sd" || equation == "both") {
      const heyde::ResidualReport report =
          heyde::sd_residual(mu1->value, mu2->value, op->value, grid);
      rejected = rejected || report.sup_residual > threshold;
      reports.push_back(heyde::residual_report_to_json(report));
    }

    const heyde::Json out{
        {"command", "verify"},
        {"operator", heyde::operator_to_json(op->value)},
        {"config", heyde::Json{{"equation", equation},
                               {"grid_step", grid_step},
                               {"grid_max", grid_max},
                               {"seed", seed},
                               {"threshold", threshold}}},
        {"reports", std::move(reports)},
        {"rejected", rejected}};
    *out_json = copy_string(out.dump(2));
    if (out_rejected != nullptr) *out_rejected = rejected ? 1 : 0;
  });
}

hy_status hy_simulate(const hy_operator* op, const hy_distribution* mu1,
                      const hy_distribution* mu2, const char* options_json,
                      char** out_json, int* out_rejected) {
  return guarded([&] {
    require_out(out_json, "hy_simulate");
    if (op == nullptr || mu1 == nullptr || mu2 == nullptr) {
      heyde::raise(heyde::ErrorCode::invalid_argument,
                   "hy_simulate: null argument");
    }
    const heyde::Json options = parse_options(options_json, "options");
    heyde::require_keys(options, {}, {"seed", "samples", "test_points"},
                        "options");

    const std::uint64_t seed = option_seed(options);
    long samples = 100000;
    if (options.contains("samples")) {
      if (!options.at("samples").is_number_integer()) {
        heyde::raise(heyde::ErrorCode::parse_error,
                     "options.samples: expected an integer");
      }
      samples = options.at("samples").get<long>();
    }

    const int n = op->value.dim();
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> test_points;
    std::string points_source = "default";
    if (options.contains("test_points")) {
      points_source = "input";
      const heyde::Json& points = options.at("test_points");
      if (!points.is_array() || points.empty()) {
        heyde::raise(heyde::ErrorCode::parse_error,
                     "options.test_points: expected a nonempty array");
      }
      for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string ctx = "options.test_points[" + std::to_string(i) +
                                "]";
        heyde::require_keys(points.at(i), {"u", "v"}, {}, ctx);
        test_points.emplace_back(
            heyde::vector_from_json(points.at(i).at("u"), ctx + ".u"),
            heyde::vector_from_json(points.at(i).at("v"), ctx + ".v"));
      }
    } else {
      /* 20 seeded uniform points in [-2, 2]^(2n), independent of the
       * sampling stream */
      std::mt19937_64 rng(seed ^ 0x7e57b0075eed11c3ull);
      std::uniform_real_distribution<double> coord(-2.0, 2.0);
      for (int k = 0; k < 20; ++k) {
        Eigen::VectorXd u(n), v(n);
        for (int i = 0; i < n; ++i) u(i) = coord(rng);
        for (int i = 0; i < n; ++i) v(i) = coord(rng);
        test_points.emplace_back(std::move(u), std::move(v));
      }
    }

    const heyde::SymmetryTestReport report = heyde::mc_symmetry_test(
        mu1->value, mu2->value, op->value, samples, test_points, seed);

    const heyde::Json out{
        {"command", "simulate"},
        {"operator", heyde::operator_to_json(op->value)},
        {"config", heyde::Json{{"seed", seed},
                               {"samples", samples},
                               {"test_points_source", points_source}}},
        {"report", heyde::symmetry_report_to_json(report)},
        {"rejected", report.rejected}};
    *out_json = copy_string(out.dump(2));
    if (out_rejected != nullptr) *out_rejected = report.rejected ? 1 : 0;
  });
}

void hy_string_free(char* text) { delete[] text; }

}  /* extern "C" */
