#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "momix/relax.hpp"
#include "momix/sdp.hpp"

namespace momix {

// Thrown when the echelon or eigen structure of a moment matrix does not
// support extracting the requested number of atoms.
class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RankEstimate {
  int khat = 0;
  Eigen::VectorXd eigenvalues;  // descending, negatives clipped to zero
  double energy_kept = 1.0;
  bool degenerate = false;  // matrix was numerically zero
};

// Smallest r whose leading eigenvalues carry a (1 - tol) fraction of the
// total spectral mass.  Scale invariant.
RankEstimate estimate_rank(const Eigen::MatrixXd& M, double tol);

struct FlatnessDetail {
  bool flat = false;
  int rank_high = 0;
  int rank_low = 0;
};

// Principal block of the order-d moment matrix indexed by the monomials
// supported on the given parameter subset; the full matrix when empty.
Eigen::MatrixXd principal_moment_matrix(const PseudoMomentSequence& phi, int d,
                                        const std::vector<int>& subset);

// Compares the rank estimates of the order-d and order-(d - d_min) moment
// matrices of phi under one tolerance.  An optional coordinate subset
// restricts both matrices to monomials supported on those parameters.
FlatnessDetail flatness_detail(const PseudoMomentSequence& phi, int d, int d_min, double tol,
                               const std::vector<int>& param_subset = {});
bool flatness_check(const PseudoMomentSequence& phi, int d, int d_min, double tol);

// Support points of an order-d moment matrix of numerical rank K: truncated
// eigenfactorization, column echelon form, shift operators solved in the
// least-squares sense, joint diagonalization through a seeded random
// combination.  Atoms are returned in lexicographic order.
std::vector<Eigen::VectorXd> extract_atoms(const Eigen::MatrixXd& M, const GradedBasis& basis,
                                           int K, std::uint64_t seed);

// Weights from the generalized Vandermonde system on all monomials of
// degree <= d.  Atoms closer than 1e-6 are merged first (the list shrinks);
// negative solutions are clipped and the total renormalized to the mass.
std::vector<double> recover_weights(std::vector<Eigen::VectorXd>& atoms,
                                    const PseudoMomentSequence& phi, int d);

struct AtomicMeasure {
  std::vector<Eigen::VectorXd> atoms;
  std::vector<double> weights;
};

struct OrderTrace {
  int order = 0;
  std::string solve_status;
  double objective = 0.0;
  double gap = 0.0;
  int rank_high = 0;
  int rank_low = 0;
  bool flat = false;
};

struct Algorithm1Options {
  double tol = 1e-2;  // rank tolerance
  int max_order = 0;  // 0 means the spec order
  std::uint64_t seed = 0;
  std::vector<int> rank_params;  // optional: estimate ranks on these parameters only
  // rebuild a trace regularizer to match each attempted order
  bool track_order_regularizer = true;
  SolverOptions solver;
};

struct Algorithm1Result {
  enum class Status { flat, approximate, failed };
  Status status = Status::failed;
  int khat = 0;
  AtomicMeasure measure;
  double objective = 0.0;
  double gap = 0.0;
  int order_final = 0;
  PseudoMomentSequence phi = PseudoMomentSequence(1, 0);
  std::vector<OrderTrace> trace;
  std::string message;
};

std::string algorithm1_status_name(Algorithm1Result::Status s);

// Full pipeline: solve the relaxation at increasing orders until the
// flatness certificate holds, then extract the atomic mixing measure.  If
// flatness never holds the final eigenspace is still extracted and the
// result is labeled approximate.
Algorithm1Result run_algorithm1(const PseudoMomentSequence& mu, const RelaxationSpec& spec,
                                const Algorithm1Options& opts);

}  // namespace momix
