#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "heyde/operator_analysis.hpp"

namespace heyde {

/* Atoms closer than this (per coordinate, relative) merge on convolution. */
inline constexpr double kAtomMergeTol = 1e-12;
/* Convolutions refuse to materialize more atoms than this. */
inline constexpr long kMaxAtoms = 1000000;
/* Exponent matrices may dip this far below PSD before being rejected. */
inline constexpr double kPsdTol = 1e-12;

/* Gaussian factor with characteristic function
 *   exp{ -<A y, y> + i <b, y> },
 * so the covariance matrix is 2A.  A must be symmetric PSD (possibly
 * singular: degenerate Gaussians are first-class citizens here). */
struct GaussianComponent {
  Eigen::MatrixXd exponent;  /* A */
  Eigen::VectorXd mean;      /* b */
};

struct Atom {
  Eigen::VectorXd point;
  double weight = 0.0;
};

/* Finitely supported measure; optionally tagged with a subspace the support
 * is asserted to lie in.  Weights are positive and sum to 1. */
struct DiscreteMeasure {
  std::vector<Atom> atoms;
  std::optional<Subspace> support;
};

/* A distribution of the form  gaussian * discrete * E_shift  (convolution),
 * closed under all operations below.  Each factor is optional. */
class ModelDistribution {
 public:
  static ModelDistribution point_mass(Eigen::VectorXd x);
  static ModelDistribution gaussian(Eigen::MatrixXd exponent,
                                    Eigen::VectorXd mean);
  static ModelDistribution discrete(std::vector<Atom> atoms,
                                    std::optional<Subspace> support = {});
  static ModelDistribution compose(std::optional<GaussianComponent> gauss,
                                   std::optional<DiscreteMeasure> disc,
                                   Eigen::VectorXd shift);

  int dim() const { return dim_; }
  const std::optional<GaussianComponent>& gaussian_part() const {
    return gaussian_;
  }
  const std::optional<DiscreteMeasure>& discrete_part() const {
    return discrete_;
  }
  const Eigen::VectorXd& shift() const { return shift_; }

 private:
  ModelDistribution() = default;

  int dim_ = 0;
  std::optional<GaussianComponent> gaussian_;
  std::optional<DiscreteMeasure> discrete_;
  Eigen::VectorXd shift_;
};

/* Exact characteristic function mu^(y) = E exp{i <y, X>}. */
std::complex<double> cf_eval(const ModelDistribution& mu,
                             const Eigen::VectorXd& y);

/* Convolution (independent sum).  Gaussian exponents add, atom sets convolve
 * with merging, shifts add.  Throws atom_blowup past kMaxAtoms. */
ModelDistribution convolve(const ModelDistribution& a,
                           const ModelDistribution& b);

/* Distribution of -X; its cf is the complex conjugate of mu's. */
ModelDistribution reflect(const ModelDistribution& mu);

/* mu * reflect(mu): symmetric, cf = |mu^|^2 (real, nonnegative). */
ModelDistribution symmetrize(const ModelDistribution& mu);

/* count independent draws, reproducible for a fixed seed. */
std::vector<Eigen::VectorXd> sample(const ModelDistribution& mu, long count,
                                    std::uint64_t seed);

}  // namespace heyde
