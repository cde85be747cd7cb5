#include "doctest.h"
#include "helpers.hpp"

#include <momix/families.hpp>
#include <momix/rng.hpp>

using namespace momix;

namespace {

double eval1(const Polynomial& p, double t) {
  return p.evaluate(Eigen::VectorXd::Constant(1, t));
}

}  // namespace

TEST_CASE("univariate Gaussian moment polynomials") {
  Eigen::Vector2d ms(0.7, 0.2);
  CHECK(gaussian1d_moment_poly(0).evaluate(ms) == doctest::Approx(1.0));
  CHECK(gaussian1d_moment_poly(1).evaluate(ms) == doctest::Approx(0.7));
  // m^3 + 3 m s^2
  CHECK(gaussian1d_moment_poly(3).evaluate(ms) ==
        doctest::Approx(0.343 + 3 * 0.7 * 0.04).epsilon(1e-12));
  // m^4 + 6 m^2 s^2 + 3 s^4
  CHECK(gaussian1d_moment_poly(4).evaluate(ms) ==
        doctest::Approx(0.2401 + 6 * 0.49 * 0.04 + 3 * 0.0016).epsilon(1e-12));
  for (int k = 0; k <= 8; ++k)
    CHECK(gaussian1d_moment_poly(k).evaluate(ms) ==
          doctest::Approx(testhelp::gauss_moment_quad(k, 0.7, 0.2)).epsilon(1e-9));
}

TEST_CASE("Poisson moment polynomials are Touchard polynomials") {
  // closed forms for low degrees
  Eigen::VectorXd lam = Eigen::VectorXd::Constant(1, 2.5);
  const double l = 2.5;
  CHECK(poisson_moment_poly(1).evaluate(lam) == doctest::Approx(l));
  CHECK(poisson_moment_poly(2).evaluate(lam) == doctest::Approx(l + l * l));
  CHECK(poisson_moment_poly(3).evaluate(lam) ==
        doctest::Approx(l + 3 * l * l + l * l * l).epsilon(1e-12));
  // values at lambda = 1 are the Bell numbers
  const double bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (int k = 0; k <= 8; ++k) CHECK(eval1(poisson_moment_poly(k), 1.0) == doctest::Approx(bell[k]));
  // against direct summation of the pmf
  for (int k = 0; k <= 8; ++k)
    CHECK(poisson_moment_poly(k).evaluate(lam) ==
          doctest::Approx(testhelp::poisson_moment_sum(k, l)).epsilon(1e-10));
}

TEST_CASE("exponential moment polynomials: k! eta^k") {
  const double eta = 0.4;
  CHECK(eval1(exponential_moment_poly(1), eta) == doctest::Approx(eta));
  CHECK(eval1(exponential_moment_poly(2), eta) == doctest::Approx(2 * eta * eta));
  CHECK(eval1(exponential_moment_poly(4), eta) ==
        doctest::Approx(24 * eta * eta * eta * eta).epsilon(1e-12));
  for (int k = 0; k <= 8; ++k)
    CHECK(eval1(exponential_moment_poly(k), eta) ==
          doctest::Approx(testhelp::exp_moment_quad(k, eta)).epsilon(1e-8));
}

TEST_CASE("diagonal Gaussian on R^2: coordinates are independent") {
  ParametricFamily fam = ParametricFamily::gaussian_diagonal(2);
  CHECK(fam.param_dim() == 4);
  Eigen::VectorXd theta(4);
  theta << 0.3, 0.8, 0.1, 0.25;  // (m1, m2, s1, s2)
  CHECK(fam.component_moment(MultiIndex{0, 0}, theta) == doctest::Approx(1.0));
  CHECK(fam.component_moment(MultiIndex{1, 1}, theta) == doctest::Approx(0.3 * 0.8));
  CHECK(fam.component_moment(MultiIndex{2, 0}, theta) ==
        doctest::Approx(0.09 + 0.01).epsilon(1e-12));
  CHECK(fam.component_moment(MultiIndex{2, 3}, theta) ==
        doctest::Approx(testhelp::gauss2_moment_quad(2, 3, 0.3, 0.1, 0.8, 0.25)).epsilon(1e-9));
}

TEST_CASE("moment map matches quadrature or summation for every family") {
  // the central property: p_alpha(theta) equals the alpha-th component
  // moment for random feasible parameters, all degrees up to 8
  Rng rng(29);
  for (int trial = 0; trial < 3; ++trial) {
    SUBCASE("gaussian") {
      ParametricFamily fam = ParametricFamily::gaussian_diagonal(1);
      Eigen::Vector2d theta(rng.uniform(0.05, 1.0), rng.uniform(0.05, 0.5));
      for (int k = 0; k <= 8; ++k) {
        const double truth = testhelp::gauss_moment_quad(k, theta[0], theta[1]);
        CHECK(fam.component_moment(MultiIndex{k}, theta) ==
              doctest::Approx(truth).epsilon(1e-8));
        CHECK(fam.moment_poly(MultiIndex{k}).degree() <= k);
      }
    }
    SUBCASE("poisson") {
      ParametricFamily fam = ParametricFamily::poisson(1);
      Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, rng.uniform(0.2, 5.0));
      for (int k = 0; k <= 8; ++k) {
        const double truth = testhelp::poisson_moment_sum(k, theta[0]);
        CHECK(fam.component_moment(MultiIndex{k}, theta) ==
              doctest::Approx(truth).epsilon(1e-8));
        CHECK(fam.moment_poly(MultiIndex{k}).degree() <= k);
      }
    }
    SUBCASE("exponential") {
      ParametricFamily fam = ParametricFamily::exponential(1);
      Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, rng.uniform(0.05, 1.0));
      for (int k = 0; k <= 8; ++k) {
        const double truth = testhelp::exp_moment_quad(k, theta[0]);
        CHECK(fam.component_moment(MultiIndex{k}, theta) ==
              doctest::Approx(truth).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("trace regularizer") {
  SUBCASE("p = 1, d = 1: theta^2") {
    Polynomial r = trace_regularizer(1, 1);
    CHECK(eval1(r, 0.5) == doctest::Approx(0.25));
    CHECK(r.degree() == 2);
  }
  SUBCASE("p = 1, d = 2: theta^2 + theta^4") {
    Polynomial r = trace_regularizer(1, 2);
    CHECK(eval1(r, 0.5) == doctest::Approx(0.25 + 0.0625));
  }
  SUBCASE("p = 2, d = 1: theta1^2 + theta2^2") {
    Polynomial r = trace_regularizer(2, 1);
    Eigen::Vector2d t(0.3, 0.4);
    CHECK(r.evaluate(t) == doctest::Approx(0.25));
  }
  SUBCASE("equals trace of the moment matrix minus the mass") {
    Rng rng(7);
    std::vector<Eigen::VectorXd> atoms;
    std::vector<double> w;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector2d t(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      atoms.push_back(t);
      w.push_back(rng.uniform(0.1, 1.0));
    }
    PseudoMomentSequence phi = testhelp::atomic_moments(atoms, w, 4);
    const double lhs = riesz(phi, trace_regularizer(2, 2));
    const double rhs = moment_matrix(phi, 2).trace() - phi.mass();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("box parameter sets") {
  SemiAlgebraicSet S = box_set({0.0, 0.05}, {1.0, 1.0});
  CHECK(S.pvars() == 2);
  CHECK(S.constraints().size() == 2);
  CHECK(S.half_degrees() == std::vector<int>{1, 1});
  Eigen::Vector2d in(0.5, 0.5), edge(0.0, 0.05), out(1.2, 0.5);
  CHECK(S.violation(in) < 0.0);
  CHECK(S.violation(edge) == doctest::Approx(0.0));
  CHECK(S.violation(out) > 0.0);
  // (theta - l)(u - theta) at an interior point
  Polynomial r0 = S.constraints()[0];
  CHECK(r0.evaluate(in) == doctest::Approx(0.25));
  CHECK(S.has_box());
  CHECK_THROWS(box_set({0.0}, {0.0, 1.0}));
  CHECK_THROWS(box_set({1.0}, {1.0}));  // empty interior
}

TEST_CASE("family registry round-trips names") {
  for (FamilyKind k :
       {FamilyKind::gaussian_diagonal, FamilyKind::poisson, FamilyKind::exponential})
    CHECK(family_from_name(family_name(k)) == k);
  CHECK_THROWS(family_from_name("cauchy"));
  ParametricFamily f = ParametricFamily::make(FamilyKind::poisson, 3);
  CHECK(f.param_dim() == 3);
  CHECK(f.data_dim() == 3);
}
