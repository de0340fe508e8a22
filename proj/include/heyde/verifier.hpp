#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "heyde/distribution_model.hpp"
#include "heyde/operator_analysis.hpp"

namespace heyde {

/* Characteristic-function magnitudes below this are treated as outside the
 * domain of the logarithm. */
inline constexpr double kCfFloor = 1e-6;

/* Evaluation grid for residual sups.  axis_values[i] lists the values taken
 * by coordinate i; pairs (u, v) are either the full product of grid points
 * with itself or a seeded random subsample of it. */
struct GridSpec {
  enum class PairMode { full_product, random_subsample };

  std::vector<std::vector<double>> axis_values;
  PairMode pair_mode = PairMode::full_product;
  long subsample_count = 10000;
  std::uint64_t subsample_seed = 0;

  int dim() const { return static_cast<int>(axis_values.size()); }
  long point_count() const;

  /* Axis {-max_extent, ..., max_extent} in the given step on every axis;
   * full product for dim <= 2, seeded 10^4-pair subsample for dim >= 3. */
  static GridSpec regular(int dim, double step, double max_extent,
                          std::uint64_t subsample_seed = 0);

  /* regular(dim, 0.5, 2.0). */
  static GridSpec defaults(int dim, std::uint64_t subsample_seed = 0);
};

struct ResidualReport {
  std::string equation;  /* "heyde" or "skitovich_darmois" */
  double sup_residual = 0.0;
  Eigen::VectorXd argmax_u;
  Eigen::VectorXd argmax_v;
  long points_evaluated = 0;
};

/* sup over pairs of |mu1^(u+v) mu2^(u+a~v) - mu1^(u-v) mu2^(u-a~v)|. */
ResidualReport heyde_residual(const ModelDistribution& mu1,
                              const ModelDistribution& mu2,
                              const LinearOperator& alpha,
                              const GridSpec& grid);

/* sup over pairs of
 * |mu1^(u+v) mu2^(u+a~v) - mu1^(u) mu2^(u) mu1^(v) mu2^(a~v)|. */
ResidualReport sd_residual(const ModelDistribution& mu1,
                           const ModelDistribution& mu2,
                           const LinearOperator& alpha,
                           const GridSpec& grid);

struct SymmetryTestReport {
  double statistic = 0.0;
  double threshold = 0.0;
  bool rejected = false;
  long sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> test_points;
  int bootstrap_resamples = 0;
  double bootstrap_percentile = 0.0;
};

/* Monte-Carlo check of the conditional-symmetry identity behind the Heyde
 * equation: with xi_j ~ mu_j independent, L1 = xi1 + xi2 and
 * L2 = xi1 + alpha xi2 must satisfy
 *   E exp{i(<u,L1> + <v,L2>)} = E exp{i(<u,L1> - <v,L2>)}
 * for all test points.  The statistic is the max over test points of the
 * empirical absolute difference; the null threshold comes from a Rademacher
 * sign-flip bootstrap (signs shared across test points within a resample).
 * sample_count >= 10^4. */
SymmetryTestReport mc_symmetry_test(
    const ModelDistribution& mu1, const ModelDistribution& mu2,
    const LinearOperator& alpha, long sample_count,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& test_points,
    std::uint64_t seed);

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

/* m-th forward difference sum_k (-1)^(m-k) C(m,k) P(y + k h). */
double finite_difference(const ScalarField& field, const Eigen::VectorXd& h,
                         int order, const Eigen::VectorXd& y);

struct DegreeProbeResult {
  bool is_polynomial = false;
  int degree = -1;  /* meaningful only when is_polynomial */
};

/* Decides whether the field behaves like a polynomial of degree <= max_degree
 * on the ball of radius region_radius (optionally restricted to a subspace),
 * by testing whether (m+1)-th differences vanish; reports the minimal such m.
 * Tolerance: 1e-8 * max(1, max |field| seen on the trials).  The field must
 * be evaluable on the ball of radius (max_degree + 2) * region_radius. */
DegreeProbeResult degree_probe(const ScalarField& field, int ambient_dim,
                               double region_radius, int max_degree,
                               int trial_count, std::uint64_t seed,
                               const Subspace* restrict_to = nullptr);

/* log of the (real, nonnegative) cf of symmetrize(mu) at y; domain_error
 * when that cf falls below kCfFloor. */
double log_symmetrized_cf(const ModelDistribution& mu,
                          const Eigen::VectorXd& y);

/* Same map as a reusable field; symmetrizes mu once up front. */
ScalarField log_symmetrized_cf_field(const ModelDistribution& mu);

}  // namespace heyde
