#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "momix/families.hpp"
#include "momix/moments.hpp"

namespace momix {

enum class Distance { w2, tv };

std::string distance_name(Distance d);
Distance distance_from_name(const std::string& name);

// Everything that pins down one relaxation: transport or total-variation
// objective, order d, regularization, component family and parameter set.
struct RelaxationSpec {
  Distance distance;
  int order;       // d
  double epsilon;  // regularization strength
  ParametricFamily family;
  SemiAlgebraicSet set;
  Regularizer regularizer;

  RelaxationSpec(Distance dist, int d, double eps, ParametricFamily fam, SemiAlgebraicSet s,
                 Regularizer reg)
      : distance(dist), order(d), epsilon(eps), family(std::move(fam)), set(std::move(s)),
        regularizer(std::move(reg)) {}

  // max over constraint half-degrees and ceil(deg R / 2)
  int d_min() const;
  void validate() const;
};

struct EqTerm {
  int var;
  double coef;
};

struct EqRow {
  std::vector<EqTerm> terms;
  double rhs = 0.0;
};

struct BlockEntry {
  int row, col;  // row <= col
  int var;
  double coef;
};

// Symmetric matrix-valued affine map offset + sum_i x_i F_i required PSD.
struct PsdBlock {
  std::string label;
  int size = 0;
  Eigen::MatrixXd offset;
  std::vector<BlockEntry> entries;

  Eigen::MatrixXd value(const Eigen::VectorXd& x) const;
};

// Pseudo-moment vector of one measure inside the scalar variable layout.
// Entries pinned by the data are stored as fixed values, not variables.
struct VariableGroup {
  std::string tag;
  GradedBasis basis;
  std::vector<int> var_of;          // -1 where fixed
  std::vector<double> fixed_value;  // valid where var_of < 0
};

// min c'x + c0  s.t.  equality rows hold and every block is PSD.
struct SdpProblem {
  int num_vars = 0;
  Eigen::VectorXd objective;
  double objective_const = 0.0;
  std::vector<EqRow> equalities;
  std::vector<PsdBlock> blocks;
  std::vector<VariableGroup> groups;

  // bookkeeping: moment-matching conditions encoded, counting the ones
  // eliminated by substituting data moments into the blocks
  int logical_equalities = 0;
  int eliminated_vars = 0;

  // provenance for reports
  std::string distance;
  int order = 0;
  double epsilon = 0.0;
  int coordinate = -1;

  const VariableGroup& group(const std::string& tag) const;
  double objective_value(const Eigen::VectorXd& x) const;
  double max_equality_violation(const Eigen::VectorXd& x) const;
  // most negative block eigenvalue at x (0 if all PSD)
  double min_block_eigenvalue(const Eigen::VectorXd& x) const;

  // variable id of a group entry, or -1 with the fixed value in *fixed
  int entry_var(const std::string& tag, const MultiIndex& alpha, double* fixed = nullptr) const;

  void write_text(std::ostream& os) const;
};

// Degree-2d transport relaxation: couples the data moments with the moments
// of the mixture through a joint pseudo-moment sequence on (x, y).
SdpProblem build_w2(const PseudoMomentSequence& mu, const RelaxationSpec& spec);

// Degree-2d total-variation relaxation via a Hahn-Jordan split dominated by
// the data measure on one side and the mixture on the other.
SdpProblem build_tv(const PseudoMomentSequence& mu, const RelaxationSpec& spec);

// One-dimensional fit of a single data coordinate; spec must carry the
// per-coordinate family and projected parameter set.
SdpProblem build_univariate_projection(const PseudoMomentSequence& mu1d, int coordinate,
                                       const RelaxationSpec& spec);

struct ConicSolution;  // sdp.hpp
double duality_gap(const SdpProblem& problem, const ConicSolution& solution);

}  // namespace momix
