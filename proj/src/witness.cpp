#include "heyde/witness.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace heyde {

namespace {

/* symmetric-matrix coordinates: list of (i, j) index pairs with i <= j */
std::vector<std::pair<int, int>> sym_indices(int q) {
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < q; ++i) {
    for (int j = i; j < q; ++j) idx.emplace_back(i, j);
  }
  return idx;
}

Eigen::MatrixXd sym_basis_element(int q, int i, int j) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(q, q);
  m(i, j) = 1.0;
  m(j, i) = 1.0;
  return m;
}

}  // namespace

MatrixEquationSolution solve_matrix_equation(const Eigen::MatrixXd& alpha_g) {
  MatrixEquationSolution solution;
  const int q = static_cast<int>(alpha_g.rows());
  if (q == 0) return solution;
  if (alpha_g.cols() != q || !alpha_g.allFinite()) {
    raise(ErrorCode::invalid_argument,
          "matrix equation needs a finite square operator block");
  }
  {
    const Eigen::MatrixXd shifted =
        Eigen::MatrixXd::Identity(q, q) + alpha_g;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted);
    if (svd.singularValues()(q - 1) <= rank_tolerance(shifted)) {
      raise(ErrorCode::invalid_argument,
            "matrix equation requires I + alpha_G invertible");
    }
  }

  const auto idx = sym_indices(q);
  const int m = static_cast<int>(idx.size());
  const Eigen::MatrixXd adj = alpha_g.transpose();

  /* rows: the q^2 entries of A1 + A2 adj; columns: vech(A1), vech(A2) */
  Eigen::MatrixXd equation(q * q, 2 * m);
  for (int col = 0; col < m; ++col) {
    const Eigen::MatrixXd s = sym_basis_element(q, idx[col].first,
                                                idx[col].second);
    const Eigen::MatrixXd from_a2 = s * adj;
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) {
        equation(i * q + j, col) = s(i, j);
        equation(i * q + j, m + col) = from_a2(i, j);
      }
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      equation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(q * q, 2 * m)) *
                     (sv.size() > 0 ? sv(0) : 0.0) * 1e-10;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;

  for (int k = rank; k < 2 * m; ++k) {
    const Eigen::VectorXd coords = svd.matrixV().col(k);
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(q, q);
    for (int col = 0; col < m; ++col) {
      const auto [i, j] = idx[col];
      a1(i, j) = a1(j, i) = coords(col);
      a2(i, j) = a2(j, i) = coords(m + col);
    }
    const double norm = std::hypot(a1.norm(), a2.norm());
    a1 /= norm;
    a2 /= norm;
    /* deterministic sign: first nonzero coordinate positive */
    for (int col = 0; col < 2 * m; ++col) {
      const double c = col < m ? a1(idx[col].first, idx[col].second)
                               : a2(idx[col - m].first, idx[col - m].second);
      if (std::abs(c) > 1e-12) {
        if (c < 0.0) {
          a1 = -a1;
          a2 = -a2;
        }
        break;
      }
    }
    solution.basis_pairs.emplace_back(std::move(a1), std::move(a2));
  }

  /* PSD representative from the negative real eigenvalues of alpha_g */
  Eigen::EigenSolver<Eigen::MatrixXd> eig(alpha_g);
  const double snorm = spectral_norm(alpha_g);
  const double eig_tol = 1e-9 * std::max(1.0, snorm);
  std::vector<double> negatives;
  for (int i = 0; i < q; ++i) {
    const std::complex<double> lambda = eig.eigenvalues()(i);
    if (std::abs(lambda.imag()) <= eig_tol && lambda.real() < 0.0) {
      negatives.push_back(lambda.real());
    }
  }
  std::sort(negatives.begin(), negatives.end());
  negatives.erase(std::unique(negatives.begin(), negatives.end(),
                              [&](double a, double b) {
                                return std::abs(a - b) <= eig_tol;
                              }),
                  negatives.end());

  if (!negatives.empty()) {
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(q, q);
    bool found_vector = false;
    for (double lambda : negatives) {
      const Eigen::MatrixXd shifted =
          alpha_g - lambda * Eigen::MatrixXd::Identity(q, q);
      Eigen::JacobiSVD<Eigen::MatrixXd> ksvd(
          shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::VectorXd& ksv = ksvd.singularValues();
      const double ktol = static_cast<double>(q) *
                          std::max(ksv(0), 1.0 + std::abs(lambda)) * 1e-10;
      for (int i = q - 1; i >= 0 && ksv(i) <= ktol; --i) {
        const Eigen::VectorXd e = ksvd.matrixV().col(i);
        a1 += -lambda * e * e.transpose();
        a2 += e * e.transpose();
        found_vector = true;
      }
    }
    if (found_vector) {
      const double residual = (a1 + a2 * adj).norm();
      if (residual > 1e-10 * std::max(1.0, a1.norm() + a2.norm())) {
        raise(ErrorCode::internal,
              "constructed PSD pair fails the matrix equation");
      }
      solution.psd_pair = std::make_pair(std::move(a1), std::move(a2));
      solution.psd_cone_nonempty = true;
    }
  }
  return solution;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> shift_pair(
    const LinearOperator& alpha, const Eigen::VectorXd& x) {
  if (x.size() != alpha.dim()) {
    raise(ErrorCode::dimension_mismatch,
          "shift seed does not match the operator dimension");
  }
  if (!x.allFinite()) {
    raise(ErrorCode::invalid_argument, "shift seed has non-finite entries");
  }
  /* adding 0.0 turns -0.0 into +0.0 for stable serialization */
  Eigen::VectorXd x1 = -(alpha.entries() * x);
  x1.array() += 0.0;
  return {x1, x};
}

Witness construct_witness(const LinearOperator& alpha,
                          const WitnessOptions& options) {
  const int n = alpha.dim();
  if (!(options.gaussian_scale > 0.0) ||
      !std::isfinite(options.gaussian_scale)) {
    raise(ErrorCode::invalid_argument, "gaussian_scale must be positive");
  }
  OperatorDecomposition dec = decompose(alpha);

  /* Gaussian factors on G, embedded into the ambient space */
  std::optional<GaussianComponent> gauss1;
  std::optional<GaussianComponent> gauss2;
  std::optional<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> exponents;
  if (dec.complement.dim() > 0) {
    const MatrixEquationSolution solution =
        solve_matrix_equation(dec.alpha_on_complement);
    if (solution.psd_pair) {
      const Eigen::MatrixXd a1 =
          options.gaussian_scale * solution.psd_pair->first;
      const Eigen::MatrixXd a2 =
          options.gaussian_scale * solution.psd_pair->second;
      const Eigen::MatrixXd& basis = dec.complement.basis();
      gauss1 = GaussianComponent{basis * a1 * basis.transpose(),
                                 Eigen::VectorXd::Zero(n)};
      gauss2 = GaussianComponent{basis * a2 * basis.transpose(),
                                 Eigen::VectorXd::Zero(n)};
      exponents = std::make_pair(a1, a2);
    }
  }

  /* shared discrete factor on K */
  std::vector<Atom> omega = options.omega_atoms;
  if (omega.empty() && dec.kernel.dim() > 0) {
    const Eigen::VectorXd k = dec.kernel.basis().col(0);
    omega.push_back(Atom{k, 0.5});
    omega.push_back(Atom{-k, 0.5});
  }
  for (const Atom& atom : omega) {
    if (atom.point.size() != n) {
      raise(ErrorCode::dimension_mismatch,
            "omega atom does not match the operator dimension");
    }
    if (!dec.kernel.contains(atom.point)) {
      std::ostringstream msg;
      msg << "omega atom (";
      for (Eigen::Index i = 0; i < atom.point.size(); ++i) {
        msg << (i ? ", " : "") << atom.point(i);
      }
      msg << ") lies outside K = Ker(I + alpha)";
      raise(ErrorCode::atoms_outside_kernel, msg.str());
    }
  }
  std::optional<DiscreteMeasure> disc;
  if (!omega.empty()) {
    disc = DiscreteMeasure{omega, dec.kernel};
  }

  const Eigen::VectorXd seed =
      options.shift ? *options.shift : Eigen::VectorXd::Zero(n);
  const auto [x1, x2] = shift_pair(alpha, seed);

  ModelDistribution mu1 = ModelDistribution::compose(gauss1, disc, x1);
  ModelDistribution mu2 = ModelDistribution::compose(gauss2, disc, x2);

  ResidualReport check =
      heyde_residual(mu1, mu2, alpha, GridSpec::defaults(n));
  if (check.sup_residual > kWitnessResidualTol) {
    std::ostringstream msg;
    msg << "constructed witness has grid residual " << check.sup_residual
        << " (budget " << kWitnessResidualTol << ")";
    raise(ErrorCode::residual_check_failed, msg.str());
  }

  /* canonical atom order for reporting */
  if (disc) {
    ModelDistribution omega_only = ModelDistribution::discrete(omega);
    omega = omega_only.discrete_part()->atoms;
  }

  return Witness{std::move(mu1), std::move(mu2), std::move(exponents),
                 std::move(omega), x1, x2, std::move(dec), std::move(check)};
}

}  // namespace heyde
