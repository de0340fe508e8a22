#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "heyde/operator_analysis.hpp"

namespace heyde {

struct SpectralSummary {
  /* monic characteristic polynomial of alpha, ascending:
   * char_poly[0] + char_poly[1] x + ... + char_poly[n] x^n,
   * char_poly[n] == 1 */
  std::vector<double> char_poly;
  /* eigenvalues sorted by (re, im) */
  std::vector<std::complex<double>> eigenvalues;
  bool has_minus_one = false;
  /* dim Ker(I + alpha) equals the algebraic multiplicity of -1
   * (vacuously true when -1 is not an eigenvalue) */
  bool minus_one_diagonalizable = true;
  /* trace^2 - 4 det, only for n == 2 */
  std::optional<double> discriminant;
};

SpectralSummary spectral_summary(const LinearOperator& alpha);

/* Shape of the full solution set of the Heyde equation for a given alpha. */
enum class CaseTag {
  /* -1 is the whole spectrum (alpha = -I): mu1 = mu2 arbitrary */
  arbitrary_equal,
  /* mu_j = omega * E_{x_j}, omega on K: no Gaussian component possible */
  shifted_subspace,
  /* mu_j = gamma_j * omega * E_{x_j}: Gaussian factor on G times a shared
   * measure on K */
  gauss_times_subspace,
  /* -1 not an eigenvalue, structure not refined further (general n) */
  gaussian_general,
  /* mu_j = gamma_j * E_{x_j}, gamma_j on one fixed eigenline */
  gaussian_line,
  /* gamma_j may live on either negative eigenline or the whole plane */
  gaussian_choice,
  /* only point masses solve the equation */
  degenerate_only,
};

const char* case_tag_name(CaseTag tag) noexcept;

struct SolutionFamily {
  CaseTag tag = CaseTag::degenerate_only;
  Subspace kernel;      /* K */
  Subspace complement;  /* G */
  /* exactly-attainable supports of the Gaussian factor (always includes the
   * zero subspace: degenerate Gaussians are admissible) */
  std::vector<Subspace> gaussian_support_options;
  /* isotropic negative case alpha = lambda0 I, lambda0 < 0: the two supports
   * may additionally be any shared line through the origin */
  bool any_shared_line = false;
  std::vector<std::string> constraints;
  /* set iff the root subspace of -1 strictly contains K; solutions then
   * involve measures singular w.r.t. Lebesgue along F */
  bool singular_flag = false;
  SpectralSummary spectrum;

  SolutionFamily()
      : kernel(Subspace::zero(1, "K")), complement(Subspace::zero(1, "G")) {}
};

/* Full case analysis on R^2. */
SolutionFamily classify2d(const LinearOperator& alpha);

/* Coarse classification for any n: decides only the K / G shape of the
 * solution family, not which Gaussian supports are attainable on G. */
SolutionFamily classify_general(const LinearOperator& alpha);

}  // namespace heyde
