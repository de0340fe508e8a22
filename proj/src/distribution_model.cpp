#include "heyde/distribution_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <sstream>

namespace heyde {

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

bool points_match(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double scale = std::max({1.0, std::abs(a(i)), std::abs(b(i))});
    if (std::abs(a(i) - b(i)) > kAtomMergeTol * scale) return false;
  }
  return true;
}

/* Sort atoms lexicographically and merge near-coincident points. */
std::vector<Atom> canonicalize_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) {
              return lex_less(a.point, b.point);
            });
  std::vector<Atom> merged;
  for (Atom& atom : atoms) {
    if (!merged.empty() && points_match(merged.back().point, atom.point)) {
      merged.back().weight += atom.weight;
    } else {
      merged.push_back(std::move(atom));
    }
  }
  return merged;
}

void validate_gaussian(GaussianComponent& gauss) {
  const Eigen::Index n = gauss.exponent.rows();
  if (n < 1 || gauss.exponent.cols() != n) {
    raise(ErrorCode::invalid_argument, "gaussian exponent must be square");
  }
  if (!gauss.exponent.allFinite() || !gauss.mean.allFinite()) {
    raise(ErrorCode::invalid_argument, "gaussian has non-finite entries");
  }
  if (gauss.mean.size() != n) {
    raise(ErrorCode::dimension_mismatch,
          "gaussian mean length does not match the exponent matrix");
  }
  const double scale = std::max(1.0, gauss.exponent.cwiseAbs().maxCoeff());
  if ((gauss.exponent - gauss.exponent.transpose()).cwiseAbs().maxCoeff() >
      kPsdTol * scale) {
    raise(ErrorCode::invalid_argument, "gaussian exponent must be symmetric");
  }
  gauss.exponent = 0.5 * (gauss.exponent + gauss.exponent.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gauss.exponent);
  if (eig.eigenvalues()(0) < -kPsdTol * scale) {
    std::ostringstream msg;
    msg << "gaussian exponent is not positive semidefinite (eigenvalue "
        << eig.eigenvalues()(0) << ")";
    raise(ErrorCode::non_psd, msg.str());
  }
}

void validate_discrete(DiscreteMeasure& disc) {
  if (disc.atoms.empty()) {
    raise(ErrorCode::invalid_argument, "discrete measure needs atoms");
  }
  const Eigen::Index n = disc.atoms.front().point.size();
  if (n < 1) {
    raise(ErrorCode::invalid_argument, "atoms need dimension >= 1");
  }
  double total = 0.0;
  for (const Atom& atom : disc.atoms) {
    if (atom.point.size() != n) {
      raise(ErrorCode::dimension_mismatch, "atoms have mixed dimensions");
    }
    if (!atom.point.allFinite() || !std::isfinite(atom.weight)) {
      raise(ErrorCode::invalid_argument, "atom has non-finite entries");
    }
    if (atom.weight <= 0.0 || atom.weight > 1.0 + 1e-12) {
      raise(ErrorCode::invalid_argument, "atom weights must lie in (0, 1]");
    }
    total += atom.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "atom weights sum to " << total << ", expected 1";
    raise(ErrorCode::invalid_argument, msg.str());
  }
  if (disc.support) {
    if (disc.support->ambient_dim() != n) {
      raise(ErrorCode::dimension_mismatch,
            "support subspace does not match atom dimension");
    }
    for (const Atom& atom : disc.atoms) {
      if (!disc.support->contains(atom.point)) {
        raise(ErrorCode::invalid_argument,
              "atom lies outside the declared support subspace");
      }
    }
  }
  disc.atoms = canonicalize_atoms(std::move(disc.atoms));
}

#ifndef NDEBUG
void debug_check_convolution(const ModelDistribution& a,
                             const ModelDistribution& b,
                             const ModelDistribution& c) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd y(a.dim());
    for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = normal(rng);
    const std::complex<double> lhs = cf_eval(c, y);
    const std::complex<double> rhs = cf_eval(a, y) * cf_eval(b, y);
    assert(std::abs(lhs - rhs) <= 1e-9);
  }
}
#endif

}  // namespace

ModelDistribution ModelDistribution::point_mass(Eigen::VectorXd x) {
  return compose({}, {}, std::move(x));
}

ModelDistribution ModelDistribution::gaussian(Eigen::MatrixXd exponent,
                                              Eigen::VectorXd mean) {
  GaussianComponent gauss{std::move(exponent), std::move(mean)};
  const Eigen::Index n = gauss.exponent.rows();
  return compose(std::move(gauss), {}, Eigen::VectorXd::Zero(n));
}

ModelDistribution ModelDistribution::discrete(std::vector<Atom> atoms,
                                              std::optional<Subspace> support) {
  if (atoms.empty()) {
    raise(ErrorCode::invalid_argument, "discrete measure needs atoms");
  }
  const Eigen::Index n = atoms.front().point.size();
  DiscreteMeasure disc{std::move(atoms), std::move(support)};
  return compose({}, std::move(disc), Eigen::VectorXd::Zero(n));
}

ModelDistribution ModelDistribution::compose(
    std::optional<GaussianComponent> gauss, std::optional<DiscreteMeasure> disc,
    Eigen::VectorXd shift) {
  if (shift.size() < 1) {
    raise(ErrorCode::invalid_argument, "distribution needs dimension >= 1");
  }
  if (!shift.allFinite()) {
    raise(ErrorCode::invalid_argument, "shift has non-finite entries");
  }
  const int n = static_cast<int>(shift.size());
  if (gauss) {
    validate_gaussian(*gauss);
    if (gauss->exponent.rows() != n) {
      raise(ErrorCode::dimension_mismatch,
            "gaussian dimension does not match the shift");
    }
  }
  if (disc) {
    validate_discrete(*disc);
    if (disc->atoms.front().point.size() != n) {
      raise(ErrorCode::dimension_mismatch,
            "atom dimension does not match the shift");
    }
  }
  ModelDistribution mu;
  mu.dim_ = n;
  mu.gaussian_ = std::move(gauss);
  mu.discrete_ = std::move(disc);
  mu.shift_ = std::move(shift);
  return mu;
}

std::complex<double> cf_eval(const ModelDistribution& mu,
                             const Eigen::VectorXd& y) {
  if (y.size() != mu.dim()) {
    raise(ErrorCode::dimension_mismatch,
          "evaluation point does not match the distribution dimension");
  }
  if (!y.allFinite()) {
    raise(ErrorCode::invalid_argument,
          "evaluation point has non-finite entries");
  }
  const std::complex<double> i_unit(0.0, 1.0);
  std::complex<double> value = std::exp(i_unit * mu.shift().dot(y));
  if (mu.gaussian_part()) {
    const GaussianComponent& gauss = *mu.gaussian_part();
    const double quad = y.dot(gauss.exponent * y);
    value *= std::exp(-quad + i_unit * gauss.mean.dot(y));
  }
  if (mu.discrete_part()) {
    std::complex<double> atom_sum(0.0, 0.0);
    for (const Atom& atom : mu.discrete_part()->atoms) {
      atom_sum += atom.weight * std::exp(i_unit * atom.point.dot(y));
    }
    value *= atom_sum;
  }
  return value;
}

ModelDistribution convolve(const ModelDistribution& a,
                           const ModelDistribution& b) {
  if (a.dim() != b.dim()) {
    raise(ErrorCode::dimension_mismatch,
          "cannot convolve distributions of different dimensions");
  }
  std::optional<GaussianComponent> gauss;
  if (a.gaussian_part() && b.gaussian_part()) {
    gauss = GaussianComponent{
        a.gaussian_part()->exponent + b.gaussian_part()->exponent,
        a.gaussian_part()->mean + b.gaussian_part()->mean};
  } else if (a.gaussian_part()) {
    gauss = *a.gaussian_part();
  } else if (b.gaussian_part()) {
    gauss = *b.gaussian_part();
  }

  std::optional<DiscreteMeasure> disc;
  if (a.discrete_part() && b.discrete_part()) {
    const auto& atoms_a = a.discrete_part()->atoms;
    const auto& atoms_b = b.discrete_part()->atoms;
    const long product_size =
        static_cast<long>(atoms_a.size()) * static_cast<long>(atoms_b.size());
    if (product_size > kMaxAtoms) {
      std::ostringstream msg;
      msg << "convolution would produce " << product_size
          << " atoms (budget " << kMaxAtoms << ")";
      raise(ErrorCode::atom_blowup, msg.str());
    }
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(product_size));
    for (const Atom& pa : atoms_a) {
      for (const Atom& pb : atoms_b) {
        atoms.push_back(Atom{pa.point + pb.point, pa.weight * pb.weight});
      }
    }
    std::optional<Subspace> support;
    if (a.discrete_part()->support && b.discrete_part()->support) {
      Eigen::MatrixXd joint(a.dim(), a.discrete_part()->support->dim() +
                                         b.discrete_part()->support->dim());
      joint << a.discrete_part()->support->basis(),
          b.discrete_part()->support->basis();
      support = Subspace::from_span(a.dim(), joint,
                                    a.discrete_part()->support->label() ==
                                            b.discrete_part()->support->label()
                                        ? a.discrete_part()->support->label()
                                        : std::string("other"));
    }
    disc = DiscreteMeasure{std::move(atoms), std::move(support)};
  } else if (a.discrete_part()) {
    disc = *a.discrete_part();
  } else if (b.discrete_part()) {
    disc = *b.discrete_part();
  }

  ModelDistribution result = ModelDistribution::compose(
      std::move(gauss), std::move(disc), a.shift() + b.shift());
#ifndef NDEBUG
  debug_check_convolution(a, b, result);
#endif
  return result;
}

ModelDistribution reflect(const ModelDistribution& mu) {
  std::optional<GaussianComponent> gauss;
  if (mu.gaussian_part()) {
    gauss = GaussianComponent{mu.gaussian_part()->exponent,
                              -mu.gaussian_part()->mean};
  }
  std::optional<DiscreteMeasure> disc;
  if (mu.discrete_part()) {
    std::vector<Atom> atoms = mu.discrete_part()->atoms;
    for (Atom& atom : atoms) atom.point = -atom.point;
    disc = DiscreteMeasure{std::move(atoms), mu.discrete_part()->support};
  }
  return ModelDistribution::compose(std::move(gauss), std::move(disc),
                                    -mu.shift());
}

ModelDistribution symmetrize(const ModelDistribution& mu) {
  return convolve(mu, reflect(mu));
}

std::vector<Eigen::VectorXd> sample(const ModelDistribution& mu, long count,
                                    std::uint64_t seed) {
  if (count < 0) {
    raise(ErrorCode::invalid_argument, "sample count must be nonnegative");
  }
  const int n = mu.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  /* factor the covariance 2A once */
  Eigen::MatrixXd gauss_factor;
  if (mu.gaussian_part()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        mu.gaussian_part()->exponent);
    Eigen::VectorXd scales = eig.eigenvalues();
    for (Eigen::Index i = 0; i < scales.size(); ++i) {
      scales(i) = std::sqrt(2.0 * std::max(0.0, scales(i)));
    }
    gauss_factor = eig.eigenvectors() * scales.asDiagonal();
  }

  std::vector<double> cumulative;
  if (mu.discrete_part()) {
    double acc = 0.0;
    for (const Atom& atom : mu.discrete_part()->atoms) {
      acc += atom.weight;
      cumulative.push_back(acc);
    }
  }

  std::vector<Eigen::VectorXd> draws;
  draws.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    Eigen::VectorXd x = mu.shift();
    if (mu.gaussian_part()) {
      Eigen::VectorXd z(n);
      for (int k = 0; k < n; ++k) z(k) = normal(rng);
      /* cf exp{-<Ay,y> + i<b,y>} is the law N(b, 2A) */
      x += gauss_factor * z + mu.gaussian_part()->mean;
    }
    if (mu.discrete_part()) {
      const double u = uniform(rng) * cumulative.back();
      const auto it =
          std::upper_bound(cumulative.begin(), cumulative.end(), u);
      const std::size_t idx = std::min(
          static_cast<std::size_t>(it - cumulative.begin()),
          mu.discrete_part()->atoms.size() - 1);
      x += mu.discrete_part()->atoms[idx].point;
    }
    draws.push_back(std::move(x));
  }
  return draws;
}

}  // namespace heyde
