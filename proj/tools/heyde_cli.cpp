/* Thin command-line front end over the C API: slices the input document,
 * forwards resolved options as JSON, and writes the library's report
 * verbatim.  Exit codes: 0 success, 1 error, 2 verification rejected. */
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "heyde/heyde.h"

namespace {

using Json = nlohmann::json;

int fail(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 1;
}

int fail_status(hy_status status) {
  std::cerr << "error: " << hy_last_error_message() << " ["
            << hy_status_name(status) << "]\n";
  return 1;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool check_keys(const Json& doc, const std::vector<std::string>& allowed,
                const std::vector<std::string>& required, std::string* error) {
  if (!doc.is_object()) {
    *error = "input document must be a JSON object";
    return false;
  }
  for (const auto& item : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) ==
        allowed.end()) {
      *error = "input: unknown key \"" + item.key() + "\"";
      return false;
    }
  }
  for (const auto& key : required) {
    if (!doc.contains(key)) {
      *error = "input: missing required key \"" + key + "\"";
      return false;
    }
  }
  return true;
}

int write_output(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text << "\n";
    return 0;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) return fail("cannot open output file " + output_path);
  out << text << "\n";
  return out ? 0 : fail("cannot write output file " + output_path);
}

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { hy_string_free(text); }
};

struct OwnedOperator {
  hy_operator* op = nullptr;
  ~OwnedOperator() { hy_operator_free(op); }
};

struct OwnedDistribution {
  hy_distribution* dist = nullptr;
  ~OwnedDistribution() { hy_distribution_free(dist); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heyde functional-equation toolkit"};
  app.require_subcommand(1);

  std::string input_path;
  std::string output_path;
  std::uint64_t seed = 0;
  long samples = 100000;
  double grid_step = 0.5;
  double grid_max = 2.0;
  double threshold = 1e-9;
  std::string equation = "heyde";

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", input_path, "input JSON document")->required();
    cmd->add_option("--output", output_path,
                    "output path (default: stdout)");
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "spectral decomposition relative to -1");
  add_common(analyze);

  CLI::App* classify =
      app.add_subcommand("classify", "solution-family classification");
  add_common(classify);

  CLI::App* construct =
      app.add_subcommand("construct", "build a witness pair");
  add_common(construct);

  CLI::App* verify = app.add_subcommand(
      "verify", "grid residuals of the functional equation(s)");
  add_common(verify);
  verify->add_option("--seed", seed, "grid subsample seed (n >= 3)");
  verify->add_option("--grid-step", grid_step, "grid spacing (default 0.5)");
  verify->add_option("--grid-max", grid_max, "grid extent (default 2)");
  verify->add_option("--threshold", threshold,
                     "rejection threshold on the sup residual (default 1e-9)");
  verify->add_option("--equation", equation, "heyde | sd | both")
      ->check(CLI::IsMember({"heyde", "sd", "both"}));

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo conditional-symmetry test");
  add_common(simulate);
  simulate->add_option("--seed", seed, "sampling seed");
  simulate->add_option("--samples", samples,
                       "Monte-Carlo sample count (default 100000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::optional<std::string> input = read_file(input_path);
  if (!input) return fail("cannot read input file " + input_path);

  const Json doc = Json::parse(*input, nullptr, false);
  if (doc.is_discarded()) return fail("input is not valid JSON");

  std::string error;
  OwnedString report;

  if (app.got_subcommand(analyze) || app.got_subcommand(classify)) {
    /* the whole document is the operator */
    OwnedOperator op;
    hy_status status = hy_operator_parse(input->c_str(), &op.op);
    if (status != HY_OK) return fail_status(status);
    status = app.got_subcommand(analyze) ? hy_analyze(op.op, &report.text)
                                         : hy_classify(op.op, &report.text);
    if (status != HY_OK) return fail_status(status);
    return write_output(report.text, output_path);
  }

  if (app.got_subcommand(construct)) {
    if (!check_keys(doc, {"operator", "omega_atoms", "shift", "gaussian_scale"},
                    {"operator"}, &error)) {
      return fail(error);
    }
    OwnedOperator op;
    hy_status status =
        hy_operator_parse(doc.at("operator").dump().c_str(), &op.op);
    if (status != HY_OK) return fail_status(status);

    Json options = Json::object();
    for (const char* key : {"omega_atoms", "shift", "gaussian_scale"}) {
      if (doc.contains(key)) options[key] = doc.at(key);
    }
    status = hy_construct(op.op, options.dump().c_str(), &report.text);
    if (status != HY_OK) return fail_status(status);
    return write_output(report.text, output_path);
  }

  /* verify / simulate share the triple input */
  const bool is_verify = app.got_subcommand(verify);
  const std::vector<std::string> allowed =
      is_verify ? std::vector<std::string>{"operator", "mu1", "mu2"}
                : std::vector<std::string>{"operator", "mu1", "mu2",
                                           "test_points"};
  if (!check_keys(doc, allowed, {"operator", "mu1", "mu2"}, &error)) {
    return fail(error);
  }

  OwnedOperator op;
  hy_status status =
      hy_operator_parse(doc.at("operator").dump().c_str(), &op.op);
  if (status != HY_OK) return fail_status(status);
  const int n = hy_operator_dim(op.op);

  OwnedDistribution mu1, mu2;
  status = hy_distribution_parse(doc.at("mu1").dump().c_str(), n, &mu1.dist);
  if (status != HY_OK) return fail_status(status);
  status = hy_distribution_parse(doc.at("mu2").dump().c_str(), n, &mu2.dist);
  if (status != HY_OK) return fail_status(status);

  int rejected = 0;
  if (is_verify) {
    const Json options{{"equation", equation},
                       {"grid_step", grid_step},
                       {"grid_max", grid_max},
                       {"seed", seed},
                       {"threshold", threshold}};
    status = hy_verify(op.op, mu1.dist, mu2.dist, options.dump().c_str(),
                       &report.text, &rejected);
  } else {
    Json options{{"seed", seed}, {"samples", samples}};
    if (doc.contains("test_points")) options["test_points"] = doc.at("test_points");
    status = hy_simulate(op.op, mu1.dist, mu2.dist, options.dump().c_str(),
                         &report.text, &rejected);
  }
  if (status != HY_OK) return fail_status(status);

  const int write_result = write_output(report.text, output_path);
  if (write_result != 0) return write_result;
  return rejected ? 2 : 0;
}
