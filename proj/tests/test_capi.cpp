#include <doctest.h>

#include <cmath>
#include <complex>
#include <json.hpp>
#include <string>

#include "heyde/heyde.h"

namespace {

using Json = nlohmann::json;

/* RAII helpers so failed CHECKs cannot leak handles */
struct OperatorHandle {
  hy_operator* ptr = nullptr;
  ~OperatorHandle() { hy_operator_free(ptr); }
};

struct DistributionHandle {
  hy_distribution* ptr = nullptr;
  ~DistributionHandle() { hy_distribution_free(ptr); }
};

struct StringHandle {
  char* ptr = nullptr;
  ~StringHandle() { hy_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? "" : ptr; }
};

constexpr const char* kJordanText =
    R"({"n": 2, "rows": [[-1.0, 1.0], [0.0, -1.0]]})";

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("status names cover the enum") {
  CHECK(std::string(hy_status_name(HY_OK)) == "HY_OK");
  CHECK(std::string(hy_status_name(HY_ERROR_PARSE)) == "HY_ERROR_PARSE");
  CHECK(std::string(hy_status_name(HY_ERROR_RESIDUAL_CHECK)) ==
        "HY_ERROR_RESIDUAL_CHECK");
}

TEST_CASE("operator lifecycle through the C boundary") {
  OperatorHandle op;
  REQUIRE(hy_operator_parse(kJordanText, &op.ptr) == HY_OK);
  CHECK(hy_operator_dim(op.ptr) == 2);
  CHECK(std::string(hy_last_error_message()).empty());

  /* malformed JSON */
  OperatorHandle bad;
  CHECK(hy_operator_parse("{not json", &bad.ptr) == HY_ERROR_PARSE);
  CHECK(!std::string(hy_last_error_message()).empty());

  /* singular matrix */
  OperatorHandle singular;
  CHECK(hy_operator_parse(R"({"n": 2, "rows": [[1, 2], [2, 4]]})",
                          &singular.ptr) == HY_ERROR_INVALID_ARGUMENT);

  /* dense creation */
  OperatorHandle dense;
  const double entries[4] = {-2.0, 0.0, 0.0, -3.0};
  REQUIRE(hy_operator_create(2, entries, &dense.ptr) == HY_OK);
  CHECK(hy_operator_dim(dense.ptr) == 2);
  CHECK(hy_operator_create(0, entries, &bad.ptr) ==
        HY_ERROR_INVALID_ARGUMENT);

  OperatorHandle jordan;
  REQUIRE(hy_operator_jordan_cell(3, &jordan.ptr) == HY_OK);
  CHECK(hy_operator_dim(jordan.ptr) == 3);
  OperatorHandle tiny;
  CHECK(hy_operator_jordan_cell(1, &tiny.ptr) == HY_ERROR_INVALID_ARGUMENT);

  /* null-pointer discipline */
  CHECK(hy_operator_parse(kJordanText, nullptr) ==
        HY_ERROR_INVALID_ARGUMENT);
  hy_operator_free(nullptr);  /* must be a no-op */
  hy_string_free(nullptr);
}

TEST_CASE("distribution parse and characteristic function") {
  DistributionHandle mu;
  const char* text = R"({
    "gaussian": {"A": [[0.5, 0.0], [0.0, 0.5]], "b": [1.0, -1.0]},
    "atoms": [{"point": [1.0, 0.0], "weight": 0.5},
              {"point": [-1.0, 0.0], "weight": 0.5}],
    "shift": [0.0, 0.25]})";
  REQUIRE(hy_distribution_parse(text, 0, &mu.ptr) == HY_OK);
  CHECK(hy_distribution_dim(mu.ptr) == 2);

  const double y[2] = {0.3, 0.7};
  double re = 0.0, im = 0.0;
  REQUIRE(hy_distribution_cf(mu.ptr, y, &re, &im) == HY_OK);
  const std::complex<double> expected =
      std::exp(std::complex<double>(
          -0.5 * (0.09 + 0.49), 0.3 - 0.7)) *
      std::cos(0.3) * std::exp(std::complex<double>(0.0, 0.25 * 0.7));
  CHECK(std::abs(std::complex<double>(re, im) - expected) <= 1e-14);

  /* expected_dim enforcement */
  DistributionHandle wrong;
  CHECK(hy_distribution_parse(text, 3, &wrong.ptr) ==
        HY_ERROR_DIMENSION_MISMATCH);

  /* unknown key */
  DistributionHandle unknown;
  CHECK(hy_distribution_parse(R"({"mystery": 1})", 0, &unknown.ptr) ==
        HY_ERROR_PARSE);

  /* point mass helper */
  DistributionHandle point;
  const double x[2] = {2.0, -1.0};
  REQUIRE(hy_distribution_point_mass(2, x, &point.ptr) == HY_OK);
  REQUIRE(hy_distribution_cf(point.ptr, y, &re, &im) == HY_OK);
  CHECK(re == doctest::Approx(std::cos(2.0 * 0.3 - 0.7)));
  CHECK(im == doctest::Approx(std::sin(2.0 * 0.3 - 0.7)));
}

TEST_CASE("analyze returns the decomposition as JSON") {
  OperatorHandle op;
  REQUIRE(hy_operator_parse(kJordanText, &op.ptr) == HY_OK);
  StringHandle out;
  REQUIRE(hy_analyze(op.ptr, &out.ptr) == HY_OK);
  const Json doc = Json::parse(out.str());
  CHECK(doc["command"] == "analyze");
  CHECK(doc["decomposition"]["kernel"]["basis"].size() == 1);
  CHECK(doc["decomposition"]["root"]["basis"].size() == 2);
  CHECK(doc["decomposition"]["root_equals_eigen"] == false);
  CHECK(doc["spectrum"]["has_minus_one"] == true);
  CHECK(doc["spectrum"]["minus_one_diagonalizable"] == false);
  CHECK(hy_analyze(nullptr, &out.ptr) == HY_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("classify returns the case tag") {
  OperatorHandle op;
  const double entries[4] = {-2.0, 0.0, 0.0, -3.0};
  REQUIRE(hy_operator_create(2, entries, &op.ptr) == HY_OK);
  StringHandle out;
  REQUIRE(hy_classify(op.ptr, &out.ptr) == HY_OK);
  const Json doc = Json::parse(out.str());
  CHECK(doc["command"] == "classify");
  CHECK(doc["family"]["case_tag"] == "GAUSSIAN_CHOICE");
  CHECK(doc["family"]["gaussian_support_options"].size() == 4);

  /* n = 3 takes the coarse path */
  OperatorHandle big;
  const double d3[9] = {-1, 0, 0, 0, 2, 0, 0, 0, 2};
  REQUIRE(hy_operator_create(3, d3, &big.ptr) == HY_OK);
  StringHandle out3;
  REQUIRE(hy_classify(big.ptr, &out3.ptr) == HY_OK);
  CHECK(Json::parse(out3.str())["family"]["case_tag"] ==
        "GAUSS_TIMES_SUBSPACE");
}

TEST_CASE("construct honors options and validates them") {
  OperatorHandle op;
  const double entries[4] = {-2.0, 0.0, 0.0, -3.0};
  REQUIRE(hy_operator_create(2, entries, &op.ptr) == HY_OK);

  StringHandle with_scale;
  REQUIRE(hy_construct(op.ptr, R"({"gaussian_scale": 0.5})",
                       &with_scale.ptr) == HY_OK);
  const Json doc = Json::parse(with_scale.str());
  CHECK(doc["command"] == "construct");
  CHECK(doc["config"]["gaussian_scale"] == 0.5);
  CHECK(doc["witness"]["residual_check"]["sup_residual"].get<double>() <=
        1e-9);
  /* exponents scale: ambient A2 = 0.5 I */
  CHECK(doc["witness"]["mu2"]["gaussian"]["A"][0][0].get<double>() ==
        doctest::Approx(0.5));

  StringHandle bad;
  CHECK(hy_construct(op.ptr, R"({"bogus": 1})", &bad.ptr) == HY_ERROR_PARSE);
  CHECK(std::string(hy_last_error_message()).find("bogus") !=
        std::string::npos);
  CHECK(hy_construct(op.ptr, R"({"gaussian_scale": -1.0})", &bad.ptr) ==
        HY_ERROR_INVALID_ARGUMENT);

  /* atoms off the kernel surface the dedicated status */
  OperatorHandle jordan;
  REQUIRE(hy_operator_jordan_cell(2, &jordan.ptr) == HY_OK);
  CHECK(hy_construct(
            jordan.ptr,
            R"({"omega_atoms": [{"point": [0.0, 1.0], "weight": 0.5},
                               {"point": [0.0, -1.0], "weight": 0.5}]})",
            &bad.ptr) == HY_ERROR_ATOMS_OUTSIDE_KERNEL);
}

TEST_CASE("verify accepts a constructed witness and rejects a perturbed "
          "pair") {
  OperatorHandle op;
  const double entries[4] = {-2.0, 0.0, 0.0, -3.0};
  REQUIRE(hy_operator_create(2, entries, &op.ptr) == HY_OK);

  StringHandle witness_json;
  REQUIRE(hy_construct(op.ptr, nullptr, &witness_json.ptr) == HY_OK);
  const Json witness = Json::parse(witness_json.str());

  DistributionHandle mu1, mu2;
  REQUIRE(hy_distribution_parse(witness["witness"]["mu1"].dump().c_str(), 2,
                                &mu1.ptr) == HY_OK);
  REQUIRE(hy_distribution_parse(witness["witness"]["mu2"].dump().c_str(), 2,
                                &mu2.ptr) == HY_OK);

  StringHandle report;
  int rejected = -1;
  REQUIRE(hy_verify(op.ptr, mu1.ptr, mu2.ptr, nullptr, &report.ptr,
                    &rejected) == HY_OK);
  CHECK(rejected == 0);
  const Json doc = Json::parse(report.str());
  CHECK(doc["rejected"] == false);
  CHECK(doc["reports"].size() == 1);
  CHECK(doc["reports"][0]["equation"] == "heyde");
  CHECK(doc["config"]["threshold"] == 1e-9);

  /* perturb mu1's exponent and watch the verdict flip */
  Json broken = witness["witness"]["mu1"];
  broken["gaussian"]["A"][0][0] =
      broken["gaussian"]["A"][0][0].get<double>() + 0.1;
  DistributionHandle bad;
  REQUIRE(hy_distribution_parse(broken.dump().c_str(), 2, &bad.ptr) == HY_OK);
  StringHandle report2;
  REQUIRE(hy_verify(op.ptr, bad.ptr, mu2.ptr, nullptr, &report2.ptr,
                    &rejected) == HY_OK);
  CHECK(rejected == 1);

  /* both equations on request */
  StringHandle both;
  REQUIRE(hy_verify(op.ptr, mu1.ptr, mu2.ptr, R"({"equation": "both"})",
                    &both.ptr, &rejected) == HY_OK);
  CHECK(Json::parse(both.str())["reports"].size() == 2);

  /* bad option value */
  StringHandle nope;
  CHECK(hy_verify(op.ptr, mu1.ptr, mu2.ptr, R"({"equation": "banana"})",
                  &nope.ptr, &rejected) == HY_ERROR_PARSE);
}

TEST_CASE("simulate is deterministic and returns byte-identical documents") {
  OperatorHandle op;
  REQUIRE(hy_operator_jordan_cell(2, &op.ptr) == HY_OK);

  DistributionHandle mu;
  REQUIRE(hy_distribution_parse(
              R"({"atoms": [{"point": [1.0, 0.0], "weight": 0.5},
                            {"point": [-1.0, 0.0], "weight": 0.5}]})",
              2, &mu.ptr) == HY_OK);

  const char* options = R"({"seed": 42, "samples": 10000})";
  StringHandle first, second;
  int rejected1 = -1, rejected2 = -1;
  REQUIRE(hy_simulate(op.ptr, mu.ptr, mu.ptr, options, &first.ptr,
                      &rejected1) == HY_OK);
  REQUIRE(hy_simulate(op.ptr, mu.ptr, mu.ptr, options, &second.ptr,
                      &rejected2) == HY_OK);
  CHECK(first.str() == second.str());
  CHECK(rejected1 == rejected2);
  /* kernel atoms satisfy the symmetry identity */
  CHECK(rejected1 == 0);

  const Json doc = Json::parse(first.str());
  CHECK(doc["config"]["samples"] == 10000);
  CHECK(doc["config"]["test_points_source"] == "default");
  CHECK(doc["report"]["test_points"].size() == 20);

  /* planted violation: atoms off the kernel */
  DistributionHandle bad;
  REQUIRE(hy_distribution_parse(
              R"({"atoms": [{"point": [0.0, 1.0], "weight": 0.5},
                            {"point": [0.0, -1.0], "weight": 0.5}]})",
              2, &bad.ptr) == HY_OK);
  StringHandle verdict;
  int rejected3 = -1;
  REQUIRE(hy_simulate(op.ptr, bad.ptr, bad.ptr,
                      R"({"seed": 42, "samples": 20000,
                          "test_points": [{"u": [0.5, 0.5], "v": [0.5, 0.5]},
                                          {"u": [1.0, 1.0], "v": [0.5, 0.5]}]})",
                      &verdict.ptr, &rejected3) == HY_OK);
  CHECK(rejected3 == 1);
  CHECK(Json::parse(verdict.str())["config"]["test_points_source"] ==
        "input");

  /* undersized sample budget is refused */
  StringHandle small;
  CHECK(hy_simulate(op.ptr, mu.ptr, mu.ptr, R"({"samples": 9999})",
                    &small.ptr, &rejected3) == HY_ERROR_INVALID_ARGUMENT);
}

}  /* TEST_SUITE */
