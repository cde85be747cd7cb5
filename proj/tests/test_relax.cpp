#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <set>

#include <momix/relax.hpp>
#include <momix/sdp.hpp>

using namespace momix;

namespace {

PseudoMomentSequence gauss_moments(double m, double s, int maxdeg) {
  PseudoMomentSequence mu(1, maxdeg);
  for (int k = 0; k <= maxdeg; ++k) mu[k] = testhelp::gauss_moment_recursion(k, m, s);
  return mu;
}

RelaxationSpec gauss_spec(Distance dist, int d, double eps,
                          Regularizer reg = Regularizer::none(2)) {
  return RelaxationSpec(dist, d, eps, ParametricFamily::gaussian_diagonal(1),
                        box_set({0.0, 0.05}, {1.0, 1.0}), std::move(reg));
}

int block_size(const SdpProblem& p, const std::string& label) {
  for (const auto& b : p.blocks)
    if (b.label == label) return b.size;
  return -1;
}

}  // namespace

TEST_CASE("transport relaxation shape at n = 1, gaussian, d = 2") {
  PseudoMomentSequence mu = gauss_moments(0.5, 0.1, 4);
  SdpProblem prob = build_w2(mu, gauss_spec(Distance::w2, 2, 0.0));

  // joint sequence on (x, y) truncated at 4, pure-x entries pinned
  CHECK(prob.group("lambda").basis.size() == 15);
  CHECK(prob.eliminated_vars == 5);
  CHECK(prob.group("phi").basis.size() == 15);
  CHECK(prob.num_vars == 10 + 15);

  CHECK(block_size(prob, "moment_lambda") == 6);
  CHECK(block_size(prob, "moment_phi") == 6);
  CHECK(block_size(prob, "localizing_0") == 3);
  CHECK(block_size(prob, "localizing_1") == 3);

  // marginal matching both ways plus normalization, counted with the
  // data-side rows eliminated at build time
  CHECK(prob.logical_equalities == 11);
  CHECK(prob.equalities.size() == 5);

  // pinned entries are reported through entry_var
  double fixed = 0.0;
  CHECK(prob.entry_var("lambda", MultiIndex{2, 0}, &fixed) == -1);
  CHECK(fixed == doctest::Approx(mu[2]));
  CHECK(prob.entry_var("phi", MultiIndex{1, 1}) >= 0);
  CHECK_THROWS(prob.group("nonexistent"));
}

TEST_CASE("every variable is pinned by some block or equality") {
  PseudoMomentSequence mu = gauss_moments(0.5, 0.1, 6);
  for (Distance dist : {Distance::w2, Distance::tv}) {
    SdpProblem prob = dist == Distance::w2 ? build_w2(mu, gauss_spec(dist, 3, 0.0))
                                           : build_tv(mu, gauss_spec(dist, 3, 0.0));
    std::set<int> seen;
    for (const auto& b : prob.blocks)
      for (const auto& e : b.entries) seen.insert(e.var);
    for (const auto& r : prob.equalities)
      for (const auto& t : r.terms) seen.insert(t.var);
    for (int v = 0; v < prob.num_vars; ++v) CHECK(seen.count(v) == 1);
  }
}

TEST_CASE("diagonal coupling plus a point mass is feasible for the transport problem") {
  // hand-built certificate: lambda = pushforward of mu under t -> (t, t),
  // phi = delta at the generating parameter; no solver involved
  const double m = 0.5, s = 0.1;
  PseudoMomentSequence mu = gauss_moments(m, s, 4);

  for (double eps : {0.0, 1e-2}) {
    Regularizer reg{trace_regularizer(2, 1), eps};
    SdpProblem prob = build_w2(mu, gauss_spec(Distance::w2, 2, eps, reg));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(prob.num_vars);

    const VariableGroup& lam = prob.group("lambda");
    for (int i = 0; i < lam.basis.size(); ++i) {
      if (lam.var_of[i] < 0) continue;
      const MultiIndex& ab = lam.basis.at(i);
      x[lam.var_of[i]] = mu.value(MultiIndex{ab.exp[0] + ab.exp[1]});
    }
    const VariableGroup& ph = prob.group("phi");
    for (int i = 0; i < ph.basis.size(); ++i) {
      const MultiIndex& g = ph.basis.at(i);
      x[ph.var_of[i]] = std::pow(m, g.exp[0]) * std::pow(s, g.exp[1]);
    }

    CHECK(prob.max_equality_violation(x) <= 1e-12);
    CHECK(prob.min_block_eigenvalue(x) >= -1e-10);
    // transport cost vanishes on the diagonal, leaving only the penalty
    const double want = eps * (m * m + s * s);
    CHECK(prob.objective_value(x) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("zero split plus a point mass is feasible for the variation problem") {
  const double m = 0.5, s = 0.1;
  PseudoMomentSequence mu = gauss_moments(m, s, 6);
  SdpProblem prob = build_tv(mu, gauss_spec(Distance::tv, 3, 0.0));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(prob.num_vars);
  const VariableGroup& ph = prob.group("phi");
  for (int i = 0; i < ph.basis.size(); ++i) {
    const MultiIndex& g = ph.basis.at(i);
    x[ph.var_of[i]] = std::pow(m, g.exp[0]) * std::pow(s, g.exp[1]);
  }

  CHECK(prob.max_equality_violation(x) <= 1e-10);
  CHECK(prob.min_block_eigenvalue(x) >= -1e-10);
  CHECK(prob.objective_value(x) == doctest::Approx(0.0));
}

TEST_CASE("variation relaxation shape at n = 1, gaussian, d = 3") {
  PseudoMomentSequence mu = gauss_moments(0.5, 0.1, 6);
  SdpProblem prob = build_tv(mu, gauss_spec(Distance::tv, 3, 0.0));

  CHECK(block_size(prob, "dominate_plus") == 4);
  CHECK(block_size(prob, "moment_psi_plus") == 4);
  CHECK(block_size(prob, "dominate_minus") == 4);
  CHECK(block_size(prob, "moment_psi_minus") == 4);
  CHECK(block_size(prob, "moment_phi") == 10);
  CHECK(prob.logical_equalities == 8);
  CHECK(prob.num_vars == 7 + 7 + 28);
}

TEST_CASE("exact single component gives near-zero objective") {
  // data generated by one family member: both distances should find it
  for (int d : {1, 2, 3}) {
    PseudoMomentSequence mu = gauss_moments(0.5, 0.1, 2 * d);
    SdpProblem prob = build_w2(mu, gauss_spec(Distance::w2, d, 0.0));
    ConicSolution sol = solve(prob);
    CHECK(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_objective <= 1e-6);
    CHECK(sol.primal_objective >= -1e-8);
    CHECK(duality_gap(prob, sol) <= 1e-6);
  }
  {
    PseudoMomentSequence mu = gauss_moments(0.5, 0.1, 6);
    SdpProblem prob = build_tv(mu, gauss_spec(Distance::tv, 3, 0.0));
    ConicSolution sol = solve(prob);
    CHECK(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_objective <= 1e-6);
    CHECK(sol.primal_objective >= -1e-8);
  }
}

TEST_CASE("hierarchy values grow with the order and stay below the generating mixture") {
  ParametricFamily fam = ParametricFamily::gaussian_diagonal(1);
  std::vector<Eigen::VectorXd> thetas{Eigen::Vector2d(0.25, 0.08), Eigen::Vector2d(0.7, 0.12)};
  std::vector<double> w{0.35, 0.65};
  PseudoMomentSequence mu = testhelp::mixture_moments(fam, thetas, w, 6);

  const double eps = 1e-2;
  Regularizer reg{trace_regularizer(2, 1), eps};  // held fixed across orders
  double upper = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k)
    upper += eps * w[k] * (thetas[k][0] * thetas[k][0] + thetas[k][1] * thetas[k][1]);

  double prev = -1e30;
  for (int d : {1, 2, 3}) {
    SdpProblem prob = build_w2(mu, gauss_spec(Distance::w2, d, eps, reg));
    ConicSolution sol = solve(prob);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_objective >= prev - 1e-7);
    CHECK(sol.primal_objective <= upper + 1e-7);
    prev = sol.primal_objective;
  }
}

TEST_CASE("variation objective lies in [0, 2] and detects a mismatch") {
  // data is a well separated two-component mixture but the parameter box
  // only admits components near the left one
  ParametricFamily fam = ParametricFamily::gaussian_diagonal(1);
  std::vector<Eigen::VectorXd> thetas{Eigen::Vector2d(0.2, 0.05), Eigen::Vector2d(0.8, 0.05)};
  PseudoMomentSequence mu = testhelp::mixture_moments(fam, thetas, {0.5, 0.5}, 4);
  RelaxationSpec spec(Distance::tv, 2, 0.0, fam, box_set({0.0, 0.04}, {0.3, 0.06}),
                      Regularizer::none(2));
  ConicSolution sol = solve(build_tv(mu, spec));
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.primal_objective >= 0.05);  // half the mass cannot be reached
  CHECK(sol.primal_objective <= 2.0 + 1e-8);
}

TEST_CASE("univariate projection tags the coordinate") {
  PseudoMomentSequence mu = gauss_moments(0.4, 0.2, 4);
  SdpProblem prob = build_univariate_projection(mu, 7, gauss_spec(Distance::w2, 2, 0.0));
  CHECK(prob.coordinate == 7);
  CHECK(prob.distance == "w2");
}

TEST_CASE("input validation") {
  PseudoMomentSequence mu = gauss_moments(0.5, 0.1, 4);
  CHECK_THROWS(build_w2(mu, gauss_spec(Distance::tv, 2, 0.0)));   // distance mismatch
  CHECK_THROWS(build_w2(mu, gauss_spec(Distance::w2, 3, 0.0)));   // moments stop at 4 < 2d
  CHECK_THROWS(RelaxationSpec(Distance::w2, 0, 0.0, ParametricFamily::gaussian_diagonal(1),
                              box_set({0.0, 0.05}, {1.0, 1.0}), Regularizer::none(2)));
  CHECK_THROWS(RelaxationSpec(Distance::w2, 2, -1.0, ParametricFamily::gaussian_diagonal(1),
                              box_set({0.0, 0.05}, {1.0, 1.0}), Regularizer::none(2)));
  CHECK_THROWS(RelaxationSpec(Distance::w2, 2, 0.0, ParametricFamily::gaussian_diagonal(1),
                              box_set({0.0}, {1.0}), Regularizer::none(1)));  // set dim 1 != 2
  PseudoMomentSequence bad = mu;
  bad[0] = 0.9;  // not a probability measure
  CHECK_THROWS(build_w2(bad, gauss_spec(Distance::w2, 2, 0.0)));
  ConicSolution unconverged;  // default status is numerical_limit
  SdpProblem prob = build_w2(mu, gauss_spec(Distance::w2, 2, 0.0));
  CHECK_THROWS(duality_gap(prob, unconverged));
}
