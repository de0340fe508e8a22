#pragma once

#include <Eigen/Dense>
#include <string>

#include "heyde/errors.hpp"

namespace heyde {

/* Tolerances shared across the linear-algebra layer. */
inline constexpr double kOrthonormalityTol = 1e-12;
inline constexpr double kInvarianceTol = 1e-10;

/* Threshold under which a singular value of m counts as zero:
 * n * ||m||_2 * 1e-10. */
double rank_tolerance(const Eigen::MatrixXd& m);

/* Spectral norm ||m||_2 (largest singular value). */
double spectral_norm(const Eigen::MatrixXd& m);

/* An invertible linear operator on R^n, stored densely. */
class LinearOperator {
 public:
  /* Throws invalid_argument if entries is not square, has non-finite
   * entries, or is singular at rank_tolerance. */
  explicit LinearOperator(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double det_estimate() const { return det_estimate_; }

  /* Adjoint with respect to the standard inner product (the transpose). */
  LinearOperator adjoint() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd entries_;
  double det_estimate_ = 0.0;
};

/* The n x n operator with -1 on the diagonal and +1 on the superdiagonal;
 * its only eigenvalue is -1 with a one-dimensional eigenspace.  n >= 2. */
LinearOperator jordan_cell(int n);

/* A linear subspace of R^n carried as an orthonormal basis (n x k matrix,
 * possibly k = 0) plus a role label in
 * {K, F, G, H, L_lambda, annihilator, other}. */
class Subspace {
 public:
  /* basis columns must be orthonormal within kOrthonormalityTol. */
  static Subspace from_orthonormal(Eigen::MatrixXd basis, std::string label);

  /* Orthonormalizes the given spanning vectors (columns), dropping
   * near-dependent ones. */
  static Subspace from_span(int ambient_dim, const Eigen::MatrixXd& spanning,
                            std::string label);

  static Subspace zero(int ambient_dim, std::string label);
  static Subspace full(int ambient_dim, std::string label);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const std::string& label() const { return label_; }

  /* Orthogonal projection B B^T x onto the subspace. */
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;

  /* ||x - project(x)|| <= tol * max(1, ||x||). */
  bool contains(const Eigen::VectorXd& x, double tol = kInvarianceTol) const;

 private:
  Subspace(int ambient_dim, Eigen::MatrixXd basis, std::string label);

  int ambient_dim_;
  Eigen::MatrixXd basis_;  /* ambient_dim_ x dim, orthonormal columns */
  std::string label_;
};

/* Gram-Schmidt with re-orthogonalization; drops columns whose residual falls
 * below drop_tol * max(1, ||column||). */
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& vectors,
                               double drop_tol = 1e-10);

/* K = Ker(I + alpha), the eigenspace of -1 (zero subspace if -1 is not an
 * eigenvalue).  Rank decided by singular-value thresholding. */
Subspace kernel_of_identity_plus(const LinearOperator& alpha);

/* (I + alpha)^n, computed exactly over 64-bit integers when all entries of
 * I + alpha are integers of magnitude <= 1e6 (falling back to floating point
 * on overflow). */
Eigen::MatrixXd identity_plus_alpha_power(const LinearOperator& alpha);

/* F = Ker((I + alpha)^n): the root subspace of -1. */
Subspace root_subspace(const LinearOperator& alpha);

/* G = Im((I + alpha)^n): the alpha-invariant complement of F on which
 * I + alpha acts invertibly. */
Subspace invariant_complement(const LinearOperator& alpha);

/* Matrix of alpha restricted to s, in the coordinates of s's basis:
 * B^T alpha B.  Throws not_invariant if alpha s leaves s by more than
 * kInvarianceTol for some basis vector. */
Eigen::MatrixXd restriction(const LinearOperator& alpha, const Subspace& s);

/* Orthogonal complement (annihilator under the standard pairing). */
Subspace annihilator(const Subspace& s);

/* Ker(alpha - lambda I): eigenspace for a real eigenvalue (zero subspace if
 * lambda is not an eigenvalue).  Labelled "L_lambda". */
Subspace eigenspace(const LinearOperator& alpha, double lambda);

/* Decomposition of R^n relative to the -1 spectral structure of alpha:
 * R^n = F (+) G with K <= F, both alpha-invariant. */
struct OperatorDecomposition {
  Subspace kernel;             /* K, label "K" */
  Subspace root;               /* F, label "F" */
  Subspace complement;         /* G, label "G" */
  Eigen::MatrixXd alpha_on_root;        /* restriction to F */
  Eigen::MatrixXd alpha_on_complement;  /* restriction to G */
  bool root_equals_eigen;      /* dim F == dim K (-1 diagonalizable or absent) */
};

OperatorDecomposition decompose(const LinearOperator& alpha);

}  // namespace heyde
