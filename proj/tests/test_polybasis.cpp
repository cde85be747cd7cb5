#include "doctest.h"
#include "helpers.hpp"

#include <Eigen/Eigenvalues>

#include <momix/moments.hpp>
#include <momix/multiindex.hpp>
#include <momix/polynomial.hpp>

using namespace momix;

TEST_CASE("oracle self-check: quadrature agrees with the moment recursion") {
  // two independent oracle routes must agree before anything else is trusted
  for (int k = 0; k <= 8; ++k) {
    const double q = testhelp::gauss_moment_quad(k, 0.7, 0.2);
    const double r = testhelp::gauss_moment_recursion(k, 0.7, 0.2);
    CHECK(std::abs(q - r) <= 1e-10 * (1.0 + std::abs(r)));
  }
  CHECK(testhelp::exp_moment_quad(0, 0.4) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(testhelp::poisson_moment_sum(0, 2.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(testhelp::poisson_moment_sum(1, 2.5) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("basis sizes") {
  CHECK(GradedBasis(1, 1).size() == 2);
  CHECK(GradedBasis(2, 2).size() == 6);
  CHECK(GradedBasis(4, 4).size() == 70);
  CHECK(basis_size(4, 4) == 70);
}

TEST_CASE("graded order: constant first, degree-major, deterministic") {
  GradedBasis b(3, 3);
  CHECK(b.at(0).degree() == 0);
  for (int i = 1; i < b.size(); ++i) CHECK(b.at(i - 1).degree() <= b.at(i).degree());
  // positions round-trip
  for (int i = 0; i < b.size(); ++i) CHECK(b.position(b.at(i)) == i);
  CHECK(basis_size(3, 3) == static_cast<std::uint64_t>(b.size()));
}

TEST_CASE("multi-index degree and addition") {
  MultiIndex a{1, 2, 0};
  CHECK(a.degree() == 3);
  MultiIndex b{0, 1, 4};
  CHECK((a + b).exp == std::vector<int>{1, 3, 4});
}

TEST_CASE("riesz examples") {
  SUBCASE("constant polynomial returns the mass") {
    PseudoMomentSequence y(2, 2);
    y[0] = 0.75;
    CHECK(riesz(y, Polynomial::constant(2, 1.0)) == doctest::Approx(0.75));
  }
  SUBCASE("Dirac at 0.5, f = x^2") {
    std::vector<Eigen::VectorXd> atom{Eigen::VectorXd::Constant(1, 0.5)};
    PseudoMomentSequence y = testhelp::atomic_moments(atom, {1.0}, 4);
    Polynomial f = Polynomial::monomial(MultiIndex{2});
    CHECK(riesz(y, f) == doctest::Approx(0.25));
  }
  SUBCASE("x^3 against exact N(1,1) moments") {
    PseudoMomentSequence y(1, 4);
    for (int k = 0; k <= 4; ++k) y[k] = testhelp::gauss_moment_quad(k, 1.0, 1.0);
    Polynomial f = Polynomial::monomial(MultiIndex{3});
    CHECK(riesz(y, f) == doctest::Approx(4.0).epsilon(1e-8));
  }
  SUBCASE("degree overflow rejected") {
    PseudoMomentSequence y(1, 2);
    CHECK_THROWS(riesz(y, Polynomial::monomial(MultiIndex{3})));
  }
}

TEST_CASE("riesz linearity on random inputs") {
  Rng rng(11);
  PseudoMomentSequence y(2, 4);
  for (int i = 0; i < y.basis().size(); ++i) y[i] = rng.uniform(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial f(2), g(2);
    GradedBasis b(2, 4);
    for (int t = 0; t < 5; ++t) {
      f.add_term(b.at(rng.uniform_int(b.size())), rng.uniform(-2.0, 2.0));
      g.add_term(b.at(rng.uniform_int(b.size())), rng.uniform(-2.0, 2.0));
    }
    const double a = rng.uniform(-3.0, 3.0), c = rng.uniform(-3.0, 3.0);
    const double lhs = riesz(y, f * a + g * c);
    const double rhs = a * riesz(y, f) + c * riesz(y, g);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("moment matrix examples") {
  SUBCASE("1D order-1 Hankel") {
    PseudoMomentSequence y(1, 2);
    y[0] = 1.0;
    y[1] = 0.4;
    y[2] = 0.9;
    Eigen::MatrixXd M = moment_matrix(y, 1);
    CHECK(M(0, 0) == 1.0);
    CHECK(M(0, 1) == 0.4);
    CHECK(M(1, 0) == 0.4);
    CHECK(M(1, 1) == 0.9);
  }
  SUBCASE("Dirac at 0.3 gives rank one v v^T") {
    std::vector<Eigen::VectorXd> atom{Eigen::VectorXd::Constant(1, 0.3)};
    PseudoMomentSequence y = testhelp::atomic_moments(atom, {1.0}, 6);
    Eigen::MatrixXd M = moment_matrix(y, 3);
    Eigen::VectorXd v(4);
    v << 1.0, 0.3, 0.09, 0.027;
    CHECK((M - v * v.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("two atoms give rank 2 PSD") {
    std::vector<Eigen::VectorXd> atoms{Eigen::VectorXd::Constant(1, 0.2),
                                       Eigen::VectorXd::Constant(1, 0.8)};
    PseudoMomentSequence y = testhelp::atomic_moments(atoms, {0.5, 0.5}, 6);
    Eigen::MatrixXd M = moment_matrix(y, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > 1e-10 * es.eigenvalues().maxCoeff()) ++rank;
    CHECK(rank == 2);
  }
}

TEST_CASE("moment matrix is bit-symmetric and Hankel in 1D") {
  Rng rng(5);
  PseudoMomentSequence y(1, 8);
  for (int i = 0; i < y.basis().size(); ++i) y[i] = rng.uniform(-1.0, 1.0);
  Eigen::MatrixXd M = moment_matrix(y, 4);
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      CHECK(M(i, j) == M(j, i));           // exactly, not approximately
      CHECK(M(i, j) == y[i + j]);          // entry depends on i + j only
    }
}

TEST_CASE("atomic moment matrices: PSD, rank equals atom count") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const int p = 1 + rng.uniform_int(3);
    const int K = 1 + rng.uniform_int(3);
    std::vector<Eigen::VectorXd> atoms;
    std::vector<double> w;
    for (int k = 0; k < K; ++k) {
      Eigen::VectorXd t(p);
      for (int j = 0; j < p; ++j) t[j] = rng.uniform(-1.0, 1.0);
      atoms.push_back(t);
      w.push_back(rng.uniform(0.1, 1.0));
    }
    const int d = K;  // rank saturates once d >= atom count
    PseudoMomentSequence y = testhelp::atomic_moments(atoms, w, 2 * d);
    Eigen::MatrixXd M = moment_matrix(y, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * std::max(1.0, es.eigenvalues().maxCoeff()));
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > 1e-9 * es.eigenvalues().maxCoeff()) ++rank;
    CHECK(rank == K);
  }
}

TEST_CASE("localizing matrix") {
  std::vector<Eigen::VectorXd> in{Eigen::VectorXd::Constant(1, 0.3)};
  std::vector<Eigen::VectorXd> out{Eigen::VectorXd::Constant(1, 1.5)};
  Polynomial r(1);  // x (1 - x)
  r.add_term(MultiIndex{1}, 1.0);
  r.add_term(MultiIndex{2}, -1.0);

  SUBCASE("r = 1 equals the moment matrix at the same order") {
    Rng rng(3);
    PseudoMomentSequence y(2, 4);
    for (int i = 0; i < y.basis().size(); ++i) y[i] = rng.uniform(-1.0, 1.0);
    Eigen::MatrixXd L = localizing_matrix(y, Polynomial::constant(2, 1.0), 2);
    Eigen::MatrixXd M = moment_matrix(y, 2);
    CHECK((L - M).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("feasible atom: PSD") {
    PseudoMomentSequence y = testhelp::atomic_moments(in, {1.0}, 4);
    Eigen::MatrixXd L = localizing_matrix(y, r, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
  SUBCASE("infeasible atom: indefinite") {
    PseudoMomentSequence y = testhelp::atomic_moments(out, {1.0}, 4);
    Eigen::MatrixXd L = localizing_matrix(y, r, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    CHECK(es.eigenvalues().minCoeff() < -1e-6);
  }
}

TEST_CASE("polynomial arithmetic basics") {
  Polynomial f = Polynomial::variable(2, 0);
  Polynomial g = Polynomial::variable(2, 1);
  Polynomial h = f * f + g * 3.0;  // x^2 + 3y
  CHECK(h.degree() == 2);
  Eigen::Vector2d pt(2.0, 5.0);
  CHECK(h.evaluate(pt) == doctest::Approx(19.0));
  h -= h;
  CHECK(h.is_zero());
  // zero coefficients are dropped from storage
  Polynomial z(1);
  z.add_term(MultiIndex{1}, 1.0);
  z.add_term(MultiIndex{1}, -1.0);
  CHECK(z.num_terms() == 0);
}
