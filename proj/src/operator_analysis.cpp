#include "heyde/operator_analysis.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>

namespace heyde {

namespace {

const std::set<std::string>& allowed_labels() {
  static const std::set<std::string> labels = {
      "K", "F", "G", "H", "L_lambda", "annihilator", "other"};
  return labels;
}

bool all_finite(const Eigen::MatrixXd& m) {
  return m.allFinite();
}

/* Orthonormal image/kernel bases of a square matrix at a given singular-value
 * threshold. */
struct RankSplit {
  Eigen::MatrixXd image;
  Eigen::MatrixXd kernel;
};

RankSplit split_by_rank(const Eigen::MatrixXd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  RankSplit split;
  split.image = svd.matrixU().leftCols(rank);
  split.kernel = svd.matrixV().rightCols(m.cols() - rank);
  return split;
}

using IntMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/* Exact integer matrix product; nullopt on 64-bit overflow. */
std::optional<IntMatrix> checked_product(const IntMatrix& a,
                                         const IntMatrix& b) {
  IntMatrix out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      std::int64_t acc = 0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        std::int64_t term = 0;
        if (__builtin_mul_overflow(a(i, k), b(k, j), &term)) return {};
        if (__builtin_add_overflow(acc, term, &acc)) return {};
      }
      out(i, j) = acc;
    }
  }
  return out;
}

bool integer_entries(const Eigen::MatrixXd& m, double limit) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double e = m(i, j);
      if (std::abs(e) > limit || e != std::nearbyint(e)) return false;
    }
  }
  return true;
}

}  // namespace

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double rank_tolerance(const Eigen::MatrixXd& m) {
  return static_cast<double>(m.rows()) * spectral_norm(m) * 1e-10;
}

LinearOperator::LinearOperator(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    raise(ErrorCode::invalid_argument, "operator matrix must be square");
  }
  if (!all_finite(entries_)) {
    raise(ErrorCode::invalid_argument,
          "operator matrix has non-finite entries");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(entries_);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol =
      static_cast<double>(entries_.rows()) * sv(0) * 1e-10;
  if (sv(sv.size() - 1) <= tol) {
    raise(ErrorCode::invalid_argument,
          "operator is singular (smallest singular value below tolerance)");
  }
  det_estimate_ = entries_.partialPivLu().determinant();
}

LinearOperator LinearOperator::adjoint() const {
  return LinearOperator(entries_.transpose());
}

Eigen::VectorXd LinearOperator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != entries_.rows()) {
    raise(ErrorCode::dimension_mismatch,
          "vector length does not match operator dimension");
  }
  return entries_ * x;
}

LinearOperator jordan_cell(int n) {
  if (n < 2) {
    raise(ErrorCode::invalid_argument, "jordan_cell requires n >= 2");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = -1.0;
    if (i + 1 < n) m(i, i + 1) = 1.0;
  }
  return LinearOperator(std::move(m));
}

Subspace::Subspace(int ambient_dim, Eigen::MatrixXd basis, std::string label)
    : ambient_dim_(ambient_dim),
      basis_(std::move(basis)),
      label_(std::move(label)) {}

Subspace Subspace::from_orthonormal(Eigen::MatrixXd basis, std::string label) {
  if (basis.rows() < 1) {
    raise(ErrorCode::invalid_argument, "subspace needs ambient dimension >= 1");
  }
  if (basis.cols() > basis.rows()) {
    raise(ErrorCode::invalid_argument,
          "subspace basis has more vectors than the ambient dimension");
  }
  if (!all_finite(basis)) {
    raise(ErrorCode::invalid_argument, "subspace basis has non-finite entries");
  }
  if (allowed_labels().count(label) == 0) {
    raise(ErrorCode::invalid_argument, "unknown subspace label: " + label);
  }
  if (basis.cols() > 0) {
    const Eigen::MatrixXd gram_defect =
        basis.transpose() * basis -
        Eigen::MatrixXd::Identity(basis.cols(), basis.cols());
    if (gram_defect.cwiseAbs().maxCoeff() > kOrthonormalityTol) {
      raise(ErrorCode::invalid_argument,
            "subspace basis is not orthonormal within 1e-12");
    }
  }
  const int n = static_cast<int>(basis.rows());
  return Subspace(n, std::move(basis), std::move(label));
}

Subspace Subspace::from_span(int ambient_dim, const Eigen::MatrixXd& spanning,
                             std::string label) {
  if (spanning.size() > 0 && spanning.rows() != ambient_dim) {
    raise(ErrorCode::dimension_mismatch,
          "spanning vectors do not match the ambient dimension");
  }
  Eigen::MatrixXd basis = orthonormalize(
      spanning.size() > 0 ? spanning : Eigen::MatrixXd(ambient_dim, 0));
  return from_orthonormal(
      basis.cols() > 0 ? basis : Eigen::MatrixXd(ambient_dim, 0),
      std::move(label));
}

Subspace Subspace::zero(int ambient_dim, std::string label) {
  return from_orthonormal(Eigen::MatrixXd(ambient_dim, 0), std::move(label));
}

Subspace Subspace::full(int ambient_dim, std::string label) {
  return from_orthonormal(Eigen::MatrixXd::Identity(ambient_dim, ambient_dim),
                          std::move(label));
}

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& x) const {
  if (x.size() != ambient_dim_) {
    raise(ErrorCode::dimension_mismatch,
          "vector length does not match subspace ambient dimension");
  }
  if (basis_.cols() == 0) return Eigen::VectorXd::Zero(ambient_dim_);
  return basis_ * (basis_.transpose() * x);
}

bool Subspace::contains(const Eigen::VectorXd& x, double tol) const {
  const Eigen::VectorXd residual = x - project(x);
  return residual.norm() <= tol * std::max(1.0, x.norm());
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& vectors,
                               double drop_tol) {
  const Eigen::Index n = vectors.rows();
  Eigen::MatrixXd basis(n, vectors.cols());
  Eigen::Index kept = 0;
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::VectorXd v = vectors.col(c);
    const double original_norm = v.norm();
    /* two Gram-Schmidt passes for numerical orthogonality */
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index b = 0; b < kept; ++b) {
        v -= basis.col(b).dot(v) * basis.col(b);
      }
    }
    if (v.norm() > drop_tol * std::max(1.0, original_norm)) {
      basis.col(kept++) = v / v.norm();
    }
  }
  return basis.leftCols(kept);
}

namespace {

/* True when alpha cannot be distinguished from -I at the library's 1e-10
 * decision scale for an operator of this norm.  I + alpha is then made of
 * construction rounding dust (e.g. a conjugation S (-I) S^-1 evaluated in
 * floating point), and rank decisions on it or its powers must read it as
 * the zero matrix: its own norm cannot calibrate a threshold. */
bool minus_identity_at_scale(const LinearOperator& alpha) {
  const int n = alpha.dim();
  const Eigen::MatrixXd base =
      Eigen::MatrixXd::Identity(n, n) + alpha.entries();
  return spectral_norm(base) <=
         static_cast<double>(n) *
             (1.0 + spectral_norm(alpha.entries())) * 1e-10;
}

}  // namespace

Subspace kernel_of_identity_plus(const LinearOperator& alpha) {
  const int n = alpha.dim();
  if (minus_identity_at_scale(alpha)) return Subspace::full(n, "K");
  const Eigen::MatrixXd m =
      Eigen::MatrixXd::Identity(n, n) + alpha.entries();
  RankSplit split = split_by_rank(m, rank_tolerance(m));
  return Subspace::from_orthonormal(split.kernel, "K");
}

Eigen::MatrixXd identity_plus_alpha_power(const LinearOperator& alpha) {
  const int n = alpha.dim();
  const Eigen::MatrixXd base =
      Eigen::MatrixXd::Identity(n, n) + alpha.entries();
  if (integer_entries(base, 1e6)) {
    IntMatrix acc = IntMatrix::Identity(n, n);
    const IntMatrix factor = base.cast<std::int64_t>();
    bool exact = true;
    for (int i = 0; i < n; ++i) {
      std::optional<IntMatrix> next = checked_product(acc, factor);
      if (!next) {
        exact = false;
        break;
      }
      acc = *next;
    }
    if (exact) return acc.cast<double>();
  }
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) power = power * base;
  return power;
}

namespace {

/* Threshold for rank decisions on (I + alpha)^n.  Anchored to the a-priori
 * scale ||I + alpha||^n rather than the computed power's own norm: when the
 * power collapses (nilpotent I + alpha), the result is pure rounding noise
 * and its own norm cannot calibrate a threshold. */
double power_rank_tolerance(const LinearOperator& alpha) {
  const int n = alpha.dim();
  const Eigen::MatrixXd base =
      Eigen::MatrixXd::Identity(n, n) + alpha.entries();
  return static_cast<double>(n) * std::pow(spectral_norm(base), n) * 1e-10;
}

}  // namespace

Subspace root_subspace(const LinearOperator& alpha) {
  if (minus_identity_at_scale(alpha)) {
    return Subspace::full(alpha.dim(), "F");
  }
  const Eigen::MatrixXd power = identity_plus_alpha_power(alpha);
  RankSplit split = split_by_rank(power, power_rank_tolerance(alpha));
  return Subspace::from_orthonormal(split.kernel, "F");
}

Subspace invariant_complement(const LinearOperator& alpha) {
  if (minus_identity_at_scale(alpha)) {
    return Subspace::zero(alpha.dim(), "G");
  }
  const Eigen::MatrixXd power = identity_plus_alpha_power(alpha);
  RankSplit split = split_by_rank(power, power_rank_tolerance(alpha));
  return Subspace::from_orthonormal(split.image, "G");
}

Eigen::MatrixXd restriction(const LinearOperator& alpha, const Subspace& s) {
  if (s.ambient_dim() != alpha.dim()) {
    raise(ErrorCode::dimension_mismatch,
          "subspace ambient dimension does not match the operator");
  }
  const Eigen::MatrixXd& basis = s.basis();
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    const Eigen::VectorXd image = alpha.entries() * basis.col(c);
    const Eigen::VectorXd residual = image - basis * (basis.transpose() * image);
    if (residual.norm() > kInvarianceTol * std::max(1.0, image.norm())) {
      std::ostringstream msg;
      msg << "subspace \"" << s.label()
          << "\" is not invariant under the operator (defect "
          << residual.norm() << ")";
      raise(ErrorCode::not_invariant, msg.str());
    }
  }
  return basis.transpose() * alpha.entries() * basis;
}

Subspace annihilator(const Subspace& s) {
  const int n = s.ambient_dim();
  if (s.dim() == 0) return Subspace::full(n, "annihilator");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.basis(), Eigen::ComputeFullU);
  return Subspace::from_orthonormal(svd.matrixU().rightCols(n - s.dim()),
                                    "annihilator");
}

Subspace eigenspace(const LinearOperator& alpha, double lambda) {
  const int n = alpha.dim();
  const Eigen::MatrixXd m =
      alpha.entries() - lambda * Eigen::MatrixXd::Identity(n, n);
  /* anchor the threshold to the operator's scale so that exact eigenvalues
   * of well-scaled operators are always detected */
  const double tol = static_cast<double>(n) *
                     std::max(spectral_norm(m), 1.0 + std::abs(lambda)) * 1e-10;
  RankSplit split = split_by_rank(m, tol);
  return Subspace::from_orthonormal(split.kernel, "L_lambda");
}

OperatorDecomposition decompose(const LinearOperator& alpha) {
  const int n = alpha.dim();
  Subspace kernel = kernel_of_identity_plus(alpha);
  Subspace root = Subspace::zero(n, "F");
  Subspace complement = Subspace::zero(n, "G");
  if (minus_identity_at_scale(alpha)) {
    root = Subspace::full(n, "F");
  } else {
    const Eigen::MatrixXd power = identity_plus_alpha_power(alpha);
    RankSplit split = split_by_rank(power, power_rank_tolerance(alpha));
    root = Subspace::from_orthonormal(split.kernel, "F");
    complement = Subspace::from_orthonormal(split.image, "G");
  }

  if (root.dim() + complement.dim() != n) {
    raise(ErrorCode::internal, "root/complement dimensions do not add up");
  }
  if (kernel.dim() > root.dim()) {
    raise(ErrorCode::internal, "kernel larger than root subspace");
  }

  OperatorDecomposition result{
      std::move(kernel),
      std::move(root),
      std::move(complement),
      Eigen::MatrixXd(),
      Eigen::MatrixXd(),
      false,
  };
  result.alpha_on_root = restriction(alpha, result.root);
  result.alpha_on_complement = restriction(alpha, result.complement);
  result.root_equals_eigen = result.root.dim() == result.kernel.dim();

  if (result.complement.dim() > 0) {
    const Eigen::MatrixXd shifted =
        Eigen::MatrixXd::Identity(result.complement.dim(),
                                  result.complement.dim()) +
        result.alpha_on_complement;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted);
    if (svd.singularValues()(svd.singularValues().size() - 1) <=
        rank_tolerance(shifted)) {
      raise(ErrorCode::internal,
            "I + alpha restricted to the complement is not invertible");
    }
  }
  return result;
}

}  // namespace heyde
