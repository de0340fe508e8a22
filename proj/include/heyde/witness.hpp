#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "heyde/distribution_model.hpp"
#include "heyde/operator_analysis.hpp"
#include "heyde/verifier.hpp"

namespace heyde {

/* A constructed witness must verify at least this well on the default grid. */
inline constexpr double kWitnessResidualTol = 1e-9;

/* Solution set of  A1 + A2 adj(alpha_G) = 0  over pairs of symmetric
 * matrices, with a distinguished PSD representative when one exists. */
struct MatrixEquationSolution {
  /* orthonormal basis of the solution space (joint Frobenius norm 1,
   * deterministic signs) */
  std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> basis_pairs;
  /* simultaneous PSD pair built from the negative real eigenvalues of
   * alpha_G: A2 = sum e e^T, A1 = sum (-lambda) e e^T */
  std::optional<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> psd_pair;
  bool psd_cone_nonempty = false;
};

/* Requires I + alpha_g invertible (alpha_g acts on the complement G). */
MatrixEquationSolution solve_matrix_equation(const Eigen::MatrixXd& alpha_g);

/* The compatible shift pair seeded by x: x2 = x, x1 = -alpha x, so that
 * x1 + alpha x2 = 0. */
std::pair<Eigen::VectorXd, Eigen::VectorXd> shift_pair(
    const LinearOperator& alpha, const Eigen::VectorXd& x);

struct WitnessOptions {
  /* atoms of the shared discrete factor; must lie in K.  Empty selects the
   * default two-atom measure on K (or no discrete factor when K = 0). */
  std::vector<Atom> omega_atoms;
  /* seed x for the shift pair; default 0 */
  std::optional<Eigen::VectorXd> shift;
  /* multiplies the Gaussian exponents */
  double gaussian_scale = 1.0;
};

struct Witness {
  ModelDistribution mu1;
  ModelDistribution mu2;
  /* Gaussian exponents in the coordinates of G's basis; absent when no
   * nondegenerate Gaussian factor is admissible */
  std::optional<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> exponents;
  std::vector<Atom> omega_atoms;
  Eigen::VectorXd x1;
  Eigen::VectorXd x2;
  OperatorDecomposition decomposition;
  ResidualReport residual_check;
};

/* Builds a pair (mu1, mu2) = (gamma_1 * omega * E_{x1}, gamma_2 * omega *
 * E_{x2}) satisfying the Heyde equation for alpha, with every applicable
 * factor as rich as alpha's spectral structure allows, and verifies it on
 * the default grid (throws residual_check_failed past kWitnessResidualTol). */
Witness construct_witness(const LinearOperator& alpha,
                          const WitnessOptions& options = {});

}  // namespace heyde
