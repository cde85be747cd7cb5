#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "momix/moments.hpp"
#include "momix/relax.hpp"

namespace momix {

enum class SolveStatus { optimal, infeasible, unbounded, numerical_limit };

std::string status_name(SolveStatus s);

struct SolverOptions {
  // scaled residual tolerances; the dual residual picks up rounding noise once
  // the primal slab goes nearly singular, so it gets more headroom than the gap
  double feas_tol = 1e-5;
  double gap_tol = 1e-6;
  int max_iters = 200;
  bool verbose = false;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::numerical_limit;
  Eigen::VectorXd primal;                    // x
  Eigen::VectorXd dual_equalities;           // y
  std::vector<Eigen::MatrixXd> dual_blocks;  // Z, one per PSD block
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;  // <S, Z>
  int iterations = 0;

  // copied from the problem so moment vectors can be rebuilt later
  std::vector<VariableGroup> groups;
};

// Primal-dual path-following interior-point method with Nesterov-Todd
// scaling and a Mehrotra corrector, specialized to small dense blocks.
// Deterministic: equal inputs and options give bit-identical output.
ConicSolution solve(const SdpProblem& problem, const SolverOptions& opts = {});

// Pseudo-moment sequence of one tagged measure, fixed entries included.
PseudoMomentSequence extract_moment_vector(const ConicSolution& solution, const std::string& tag);

}  // namespace momix
