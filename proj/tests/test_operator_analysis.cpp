#include <doctest.h>

#include <Eigen/Dense>

#include "heyde/operator_analysis.hpp"
#include "support/test_helpers.hpp"

using namespace heyde;
using namespace heyde::testing;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_SUITE("operator_analysis") {

TEST_CASE("constructor validates the matrix") {
  CHECK_NOTHROW(LinearOperator(mat2(-1, 1, 0, -1)));
  CHECK_THROWS_AS(LinearOperator(Eigen::MatrixXd::Zero(2, 3)),
                  const Error&);
  CHECK_THROWS_AS(LinearOperator(Eigen::MatrixXd::Zero(2, 2)),
                  const Error&);  /* singular */
  CHECK_THROWS_AS(LinearOperator(mat2(1, 2, 2, 4)), const Error&);
  Eigen::MatrixXd bad = mat2(1, 0, 0, 1);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(LinearOperator{bad}, const Error&);
  CHECK_THROWS_AS(LinearOperator(Eigen::MatrixXd(0, 0)), const Error&);

  try {
    LinearOperator{mat2(1, 2, 2, 4)};
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("adjoint is the transpose on the worked 2x2 example") {
  /* alpha = [[-1, 1], [0, -1]]; <alpha x, y> = <x, alpha~ y> forces
   * alpha~ = [[-1, 0], [1, -1]] */
  const LinearOperator alpha = jordan_cell(2);
  const Eigen::MatrixXd expected = mat2(-1, 0, 1, -1);
  CHECK((alpha.adjoint().entries() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adjoint is involutive and reverses products") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const LinearOperator a(random_invertible_away_from_minus_one(rng, n));
    const LinearOperator b(random_invertible_away_from_minus_one(rng, n));
    CHECK((a.adjoint().adjoint().entries() - a.entries())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    /* (ab)~ = b~ a~ */
    const Eigen::MatrixXd ab = a.entries() * b.entries();
    const Eigen::MatrixXd rhs =
        b.adjoint().entries() * a.adjoint().entries();
    CHECK((ab.transpose() - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    /* pairing identity on random vectors */
    const Eigen::VectorXd x = random_vector(rng, n);
    const Eigen::VectorXd y = random_vector(rng, n);
    CHECK(a.apply(x).dot(y) ==
          doctest::Approx(x.dot(a.adjoint().apply(y))).epsilon(1e-12));
  }
}

TEST_CASE("jordan_cell has -1 diagonal, +1 superdiagonal, and is nilpotent "
          "after the identity shift") {
  const LinearOperator j3 = jordan_cell(3);
  Eigen::MatrixXd expected(3, 3);
  expected << -1, 1, 0, 0, -1, 1, 0, 0, -1;
  CHECK((j3.entries() - expected).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd n =
      Eigen::MatrixXd::Identity(3, 3) + j3.entries();
  CHECK((n * n * n).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(jordan_cell(1), const Error&);
}

TEST_CASE("kernel_of_identity_plus on canonical operators") {
  /* alpha = -I: everything */
  const LinearOperator minus_i(-Eigen::MatrixXd::Identity(3, 3));
  CHECK(kernel_of_identity_plus(minus_i).dim() == 3);

  /* jordan cell: only the leading coordinate axis */
  const Subspace k = kernel_of_identity_plus(jordan_cell(2));
  CHECK(k.dim() == 1);
  CHECK(k.contains(Eigen::Vector2d(1, 0), 1e-12));
  CHECK(k.label() == "K");

  /* -1 not an eigenvalue: zero subspace */
  CHECK(kernel_of_identity_plus(LinearOperator(mat2(2, 0, 0, 3))).dim() == 0);

  /* mixed spectrum with a skew kernel direction:
   * [[-1, 1], [0, 2]] has K = span{(1, 0)} */
  const Subspace k2 =
      kernel_of_identity_plus(LinearOperator(mat2(-1, 1, 0, 2)));
  CHECK(k2.dim() == 1);
  CHECK(k2.contains(Eigen::Vector2d(1, 0), 1e-12));
}

TEST_CASE("root subspace picks up defective multiplicity") {
  /* jordan cell: K is a line but F is the whole plane */
  CHECK(root_subspace(jordan_cell(2)).dim() == 2);
  CHECK(root_subspace(jordan_cell(3)).dim() == 3);

  /* diagonalizable -1: F = K */
  const LinearOperator alpha(mat2(-1, 0, 0, 5));
  const Subspace f = root_subspace(alpha);
  CHECK(f.dim() == 1);
  CHECK(f.contains(Eigen::Vector2d(1, 0), 1e-12));

  /* [[-1, 1], [0, 2]]: (I + alpha)^2 = [[0, 3], [0, 9]], kernel still the
   * first axis: root equals eigen despite the coupling term */
  const Subspace f2 = root_subspace(LinearOperator(mat2(-1, 1, 0, 2)));
  CHECK(f2.dim() == 1);
  CHECK(f2.contains(Eigen::Vector2d(1, 0), 1e-12));
}

TEST_CASE("invariant complement: image of the shifted power") {
  /* [[-1, 1], [0, 2]]: G = Im((I+alpha)^2) = span{(1, 3)} -- not an axis */
  const Subspace g = invariant_complement(LinearOperator(mat2(-1, 1, 0, 2)));
  CHECK(g.dim() == 1);
  CHECK(g.contains(Eigen::Vector2d(1, 3).normalized(), 1e-10));

  CHECK(invariant_complement(jordan_cell(2)).dim() == 0);
  CHECK(invariant_complement(
            LinearOperator(-Eigen::MatrixXd::Identity(2, 2)))
            .dim() == 0);
  CHECK(invariant_complement(LinearOperator(mat2(2, 0, 0, 3))).dim() == 2);
}

TEST_CASE("restriction computes coordinates and rejects non-invariant "
          "subspaces") {
  const LinearOperator alpha(mat2(-1, 0, 0, 5));
  const Subspace e2 = Subspace::from_orthonormal(
      Eigen::MatrixXd::Identity(2, 2).col(1), "other");
  const Eigen::MatrixXd r = restriction(alpha, e2);
  CHECK(r.rows() == 1);
  CHECK(r(0, 0) == doctest::Approx(5.0));

  /* restriction of alpha to K is always -identity */
  const Subspace k = kernel_of_identity_plus(jordan_cell(3));
  const Eigen::MatrixXd rk = restriction(jordan_cell(3), k);
  CHECK((rk + Eigen::MatrixXd::Identity(k.dim(), k.dim()))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  /* span{e2} is not invariant under the jordan cell: alpha e2 = (1, -1) */
  CHECK_THROWS_AS(restriction(jordan_cell(2), e2), const Error&);
  try {
    restriction(jordan_cell(2), e2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_invariant);
  }
}

TEST_CASE("annihilator is the orthogonal complement") {
  const Subspace k = kernel_of_identity_plus(jordan_cell(2));
  const Subspace h = annihilator(k);
  CHECK(h.dim() == 1);
  CHECK(h.contains(Eigen::Vector2d(0, 1), 1e-12));
  CHECK(h.label() == "annihilator");

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int k_dim = 1 + static_cast<int>(rng() % (n - 1));
    const Subspace s =
        Subspace::from_span(n, random_matrix(rng, n, k_dim), "other");
    const Subspace ann = annihilator(s);
    CHECK(ann.dim() == n - s.dim());
    CHECK((s.basis().transpose() * ann.basis()).cwiseAbs().maxCoeff() <=
          1e-10);
    /* double annihilator returns the original span */
    CHECK(same_span(annihilator(ann), s));
  }
}

TEST_CASE("eigenspace finds real eigenlines and rejects non-eigenvalues") {
  const LinearOperator alpha(mat2(-2, 0, 0, -3));
  const Subspace l2 = eigenspace(alpha, -2.0);
  CHECK(l2.dim() == 1);
  CHECK(l2.contains(Eigen::Vector2d(1, 0), 1e-12));
  CHECK(l2.label() == "L_lambda");
  CHECK(eigenspace(alpha, -2.5).dim() == 0);

  /* defective eigenvalue still has only a one-dimensional eigenspace */
  CHECK(eigenspace(jordan_cell(3), -1.0).dim() == 1);
}

TEST_CASE("orthonormalize drops dependent columns and returns orthonormal "
          "output") {
  Eigen::MatrixXd v(3, 3);
  v.col(0) = Eigen::Vector3d(1, 1, 0);
  v.col(1) = Eigen::Vector3d(2, 2, 0);  /* dependent */
  v.col(2) = Eigen::Vector3d(0, 1, 1);
  const Eigen::MatrixXd q = orthonormalize(v);
  CHECK(q.cols() == 2);
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd m = random_matrix(rng, 4, 3);
    const Eigen::MatrixXd q2 = orthonormalize(m);
    CHECK((q2.transpose() * q2 -
           Eigen::MatrixXd::Identity(q2.cols(), q2.cols()))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
}

TEST_CASE("subspace validation and projections") {
  CHECK_THROWS_AS(
      Subspace::from_orthonormal(mat2(1, 0, 1, 0), "other"),
      const Error&);  /* columns not orthonormal */
  CHECK_THROWS_AS(Subspace::from_orthonormal(
                      Eigen::MatrixXd::Identity(2, 2), "banana"),
                  const Error&);  /* unknown label */

  const Subspace s = Subspace::from_span(
      2, Eigen::Vector2d(3, 4), "other");
  const Eigen::VectorXd p = s.project(Eigen::Vector2d(1, 0));
  /* projection onto span{(3,4)/5}: <x, u> u with u = (0.6, 0.8) */
  CHECK(p(0) == doctest::Approx(0.36));
  CHECK(p(1) == doctest::Approx(0.48));
  CHECK(s.contains(Eigen::Vector2d(3, 4)));
  CHECK(!s.contains(Eigen::Vector2d(4, -3)));
  CHECK(Subspace::zero(3, "other").project(Eigen::Vector3d(1, 2, 3)).norm() ==
        0.0);
}

TEST_CASE("identity_plus_alpha_power matches repeated multiplication and is "
          "exact for integer input") {
  /* jordan cell n = 3: (I + alpha)^3 must be exactly zero, not rounding
   * noise -- this is what the integer path guarantees */
  CHECK(identity_plus_alpha_power(jordan_cell(3)).cwiseAbs().maxCoeff() ==
        0.0);

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const LinearOperator alpha(
        random_invertible_away_from_minus_one(rng, n));
    const Eigen::MatrixXd base =
        Eigen::MatrixXd::Identity(n, n) + alpha.entries();
    Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < n; ++k) expected = expected * base;
    CHECK((identity_plus_alpha_power(alpha) - expected)
              .cwiseAbs()
              .maxCoeff() <= 1e-9 * std::max(1.0, expected.norm()));
  }
}

TEST_CASE("decompose satisfies the structural invariants on random "
          "operators") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const Eigen::MatrixXd m = (trial % 3 == 0 && n >= 1)
                                  ? random_minus_one_structured(rng, n)
                                  : random_invertible_away_from_minus_one(
                                        rng, n);
    const LinearOperator alpha(m);
    const OperatorDecomposition dec = decompose(alpha);

    CHECK(dec.root.dim() + dec.complement.dim() == n);
    CHECK(dec.kernel.dim() <= dec.root.dim());
    CHECK(dec.root_equals_eigen == (dec.root.dim() == dec.kernel.dim()));

    /* K sits inside F */
    for (int c = 0; c < dec.kernel.dim(); ++c) {
      CHECK(dec.root.contains(dec.kernel.basis().col(c), 1e-8));
    }

    /* F and G are transversal: largest principal cosine bounded away
     * from 1 */
    CHECK(max_principal_cosine(dec.root, dec.complement) < 1.0 - 1e-6);

    /* alpha restricted to K is -identity */
    if (dec.kernel.dim() > 0) {
      const Eigen::MatrixXd rk = restriction(alpha, dec.kernel);
      CHECK((rk + Eigen::MatrixXd::Identity(rk.rows(), rk.cols()))
                .cwiseAbs()
                .maxCoeff() <= 1e-8);
    }

    /* I + alpha_G is invertible */
    if (dec.complement.dim() > 0) {
      const Eigen::MatrixXd shifted =
          Eigen::MatrixXd::Identity(dec.complement.dim(),
                                    dec.complement.dim()) +
          dec.alpha_on_complement;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted);
      CHECK(svd.singularValues().minCoeff() >
            rank_tolerance(shifted));
    }

    /* restrictions reproduce alpha on basis vectors */
    if (dec.root.dim() > 0) {
      const Eigen::MatrixXd recon =
          dec.root.basis() * dec.alpha_on_root;
      CHECK((alpha.entries() * dec.root.basis() - recon)
                .cwiseAbs()
                .maxCoeff() <= 1e-7);
    }
  }
}

TEST_CASE("decompose on the skew mixed example keeps K and G independent "
          "but not orthogonal") {
  /* [[-1, 1], [0, 2]]: K = span{e1}, G = span{(1, 3)}; the two lines are
   * transversal though their principal cosine is 1/sqrt(10) away from 0 */
  const LinearOperator alpha(mat2(-1, 1, 0, 2));
  const OperatorDecomposition dec = decompose(alpha);
  CHECK(dec.kernel.dim() == 1);
  CHECK(dec.root.dim() == 1);
  CHECK(dec.complement.dim() == 1);
  CHECK(dec.root_equals_eigen);
  CHECK(dec.kernel.contains(Eigen::Vector2d(1, 0), 1e-10));
  CHECK(dec.complement.contains(Eigen::Vector2d(1, 3).normalized(), 1e-10));
  const double cosine =
      max_principal_cosine(dec.kernel, dec.complement);
  CHECK(cosine == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-9));
  CHECK(dec.alpha_on_complement(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("rank tolerance scales with the matrix") {
  const Eigen::MatrixXd big = 1e6 * Eigen::MatrixXd::Identity(3, 3);
  CHECK(rank_tolerance(big) == doctest::Approx(3.0 * 1e6 * 1e-10));
  CHECK(spectral_norm(mat2(3, 0, 0, -7)) == doctest::Approx(7.0));
}

}  /* TEST_SUITE */
