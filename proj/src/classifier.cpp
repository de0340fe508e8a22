#include "heyde/classifier.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace heyde {

namespace {

std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& a) {
  /* Faddeev-LeVerrier: exact in rational arithmetic, stable enough in
   * double precision for the small dimensions handled here. */
  const Eigen::Index n = a.rows();
  std::vector<double> coeff(static_cast<std::size_t>(n) + 1, 0.0);
  coeff[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + coeff[static_cast<std::size_t>(n - k + 1)] *
                    Eigen::MatrixXd::Identity(n, n);
    coeff[static_cast<std::size_t>(n - k)] =
        -(a * m).trace() / static_cast<double>(k);
  }
  return coeff;
}

std::vector<std::string> shifted_constraints() {
  return {"mu_j = omega * E_{x_j}", "omega supported in K",
          "x1 + alpha x2 = 0"};
}

std::vector<std::string> gauss_on_complement_constraints() {
  return {"mu_j = gamma_j * omega * E_{x_j}",
          "gamma_j Gaussian supported in a gaussian_support_option",
          "A1 + A2 adj(alpha_G) = 0", "omega supported in K",
          "x1 + alpha x2 = 0"};
}

std::vector<std::string> pure_gaussian_constraints() {
  return {"mu_j = gamma_j * E_{x_j}",
          "gamma_j Gaussian supported in a gaussian_support_option",
          "A1 + A2 adj(alpha) = 0", "x1 + alpha x2 = 0"};
}

std::vector<std::string> degenerate_constraints() {
  return {"mu_j = E_{x_j}", "x1 + alpha x2 = 0"};
}

}  // namespace

SpectralSummary spectral_summary(const LinearOperator& alpha) {
  const int n = alpha.dim();
  SpectralSummary summary;
  summary.char_poly = characteristic_polynomial(alpha.entries());

  Eigen::EigenSolver<Eigen::MatrixXd> solver(alpha.entries());
  summary.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    summary.eigenvalues.push_back(solver.eigenvalues()(i));
  }
  std::sort(summary.eigenvalues.begin(), summary.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });

  /* -1 membership and its diagonalizability are decided from the subspace
   * dimensions, which stay well-conditioned even for defective spectra */
  const int kernel_dim = kernel_of_identity_plus(alpha).dim();
  const int root_dim = root_subspace(alpha).dim();
  summary.has_minus_one = kernel_dim >= 1;
  summary.minus_one_diagonalizable = kernel_dim == root_dim;

  if (n == 2) {
    const double t = alpha.entries().trace();
    const double d = alpha.det_estimate();
    summary.discriminant = t * t - 4.0 * d;
  }
  return summary;
}

const char* case_tag_name(CaseTag tag) noexcept {
  switch (tag) {
    case CaseTag::arbitrary_equal: return "ARBITRARY_EQUAL";
    case CaseTag::shifted_subspace: return "SHIFTED_SUBSPACE";
    case CaseTag::gauss_times_subspace: return "GAUSS_TIMES_SUBSPACE";
    case CaseTag::gaussian_general: return "GAUSSIAN_GENERAL";
    case CaseTag::gaussian_line: return "GAUSSIAN_LINE";
    case CaseTag::gaussian_choice: return "GAUSSIAN_CHOICE";
    case CaseTag::degenerate_only: return "DEGENERATE_ONLY";
  }
  return "UNKNOWN";
}

SolutionFamily classify2d(const LinearOperator& alpha) {
  if (alpha.dim() != 2) {
    raise(ErrorCode::dimension_mismatch, "classify2d needs a 2x2 operator");
  }
  const OperatorDecomposition dec = decompose(alpha);
  SolutionFamily family;
  family.kernel = dec.kernel;
  family.complement = dec.complement;
  family.spectrum = spectral_summary(alpha);
  family.singular_flag = dec.root.dim() > dec.kernel.dim();

  const double snorm = spectral_norm(alpha.entries());
  const double disc_tol = 1e-9 * std::max(1.0, snorm * snorm);
  const double trace = alpha.entries().trace();
  const double disc = *family.spectrum.discriminant;
  const Subspace zero_support = Subspace::zero(2, "other");

  if (dec.kernel.dim() == 2) {
    /* alpha = -I */
    family.tag = CaseTag::arbitrary_equal;
    family.gaussian_support_options = {zero_support};
    family.constraints = {"mu1 = mu2"};
    return family;
  }

  if (dec.kernel.dim() == 1) {
    if (dec.root.dim() == 2) {
      /* -1 is a defective double eigenvalue: no Gaussian room at all */
      family.tag = CaseTag::shifted_subspace;
      family.gaussian_support_options = {zero_support};
      family.constraints = shifted_constraints();
      return family;
    }
    /* other eigenvalue: trace = -1 + lambda0 */
    const double lambda0 = trace + 1.0;
    if (lambda0 < 0.0) {
      family.tag = CaseTag::gauss_times_subspace;
      family.gaussian_support_options = {zero_support,
                                         eigenspace(alpha, lambda0)};
      family.constraints = gauss_on_complement_constraints();
    } else {
      family.tag = CaseTag::shifted_subspace;
      family.gaussian_support_options = {zero_support};
      family.constraints = shifted_constraints();
    }
    return family;
  }

  /* -1 is not an eigenvalue */
  if (disc < -disc_tol) {
    /* complex pair */
    family.tag = CaseTag::degenerate_only;
    family.gaussian_support_options = {zero_support};
    family.constraints = degenerate_constraints();
    return family;
  }

  if (std::abs(disc) <= disc_tol) {
    const double lambda0 = trace / 2.0;
    const Subspace line = eigenspace(alpha, lambda0);
    if (lambda0 >= 0.0) {
      family.tag = CaseTag::degenerate_only;
      family.gaussian_support_options = {zero_support};
      family.constraints = degenerate_constraints();
    } else if (line.dim() == 2) {
      /* alpha = lambda0 I: Gaussians on any shared line or the whole plane */
      family.tag = CaseTag::gaussian_choice;
      family.any_shared_line = true;
      family.gaussian_support_options = {zero_support,
                                         Subspace::full(2, "other")};
      family.constraints = pure_gaussian_constraints();
      family.constraints.push_back("supports may be any shared line");
    } else {
      /* defective double eigenvalue lambda0 < 0: one eigenline */
      family.tag = CaseTag::gaussian_line;
      family.gaussian_support_options = {zero_support, line};
      family.constraints = pure_gaussian_constraints();
    }
    return family;
  }

  /* distinct real eigenvalues */
  const double root = std::sqrt(disc);
  const double lambda_low = (trace - root) / 2.0;
  const double lambda_high = (trace + root) / 2.0;
  const bool low_neg = lambda_low < 0.0;
  const bool high_neg = lambda_high < 0.0;

  if (!low_neg && !high_neg) {
    family.tag = CaseTag::degenerate_only;
    family.gaussian_support_options = {zero_support};
    family.constraints = degenerate_constraints();
  } else if (low_neg && high_neg) {
    family.tag = CaseTag::gaussian_choice;
    family.gaussian_support_options = {zero_support,
                                       eigenspace(alpha, lambda_low),
                                       eigenspace(alpha, lambda_high),
                                       Subspace::full(2, "other")};
    family.constraints = pure_gaussian_constraints();
  } else {
    family.tag = CaseTag::gaussian_line;
    family.gaussian_support_options = {
        zero_support, eigenspace(alpha, low_neg ? lambda_low : lambda_high)};
    family.constraints = pure_gaussian_constraints();
  }
  return family;
}

SolutionFamily classify_general(const LinearOperator& alpha) {
  const int n = alpha.dim();
  const OperatorDecomposition dec = decompose(alpha);
  SolutionFamily family;
  family.kernel = dec.kernel;
  family.complement = dec.complement;
  family.spectrum = spectral_summary(alpha);
  family.singular_flag = dec.root.dim() > dec.kernel.dim();
  const Subspace zero_support = Subspace::zero(n, "other");

  if (dec.kernel.dim() == n) {
    family.tag = CaseTag::arbitrary_equal;
    family.gaussian_support_options = {zero_support};
    family.constraints = {"mu1 = mu2"};
  } else if (dec.kernel.dim() == 0) {
    family.tag = CaseTag::gaussian_general;
    family.gaussian_support_options = {zero_support, dec.complement};
    family.constraints = pure_gaussian_constraints();
  } else if (dec.complement.dim() == 0) {
    family.tag = CaseTag::shifted_subspace;
    family.gaussian_support_options = {zero_support};
    family.constraints = shifted_constraints();
  } else {
    family.tag = CaseTag::gauss_times_subspace;
    family.gaussian_support_options = {zero_support, dec.complement};
    family.constraints = gauss_on_complement_constraints();
  }
  return family;
}

}  // namespace heyde
