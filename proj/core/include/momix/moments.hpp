#pragma once

#include <Eigen/Core>

#include "momix/multiindex.hpp"
#include "momix/polynomial.hpp"

namespace momix {

// Truncated pseudo-moment sequence: one value per monomial of degree
// <= maxdeg, stored in graded basis order.  Entry 0 is the mass.
class PseudoMomentSequence {
 public:
  PseudoMomentSequence() = default;
  PseudoMomentSequence(int nvars, int maxdeg)
      : basis_(nvars, maxdeg), values_(Eigen::VectorXd::Zero(basis_.size())) {}
  PseudoMomentSequence(GradedBasis basis, Eigen::VectorXd values);

  int nvars() const { return basis_.nvars(); }
  int maxdeg() const { return basis_.maxdeg(); }
  const GradedBasis& basis() const { return basis_; }

  double mass() const { return values_[0]; }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  double value(const MultiIndex& alpha) const { return values_[basis_.position(alpha)]; }
  void set_value(const MultiIndex& alpha, double v) { values_[basis_.position(alpha)] = v; }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  // Moments of the weighted atomic measure sum_i w_i delta_{points[i]}.
  static PseudoMomentSequence of_atoms(const std::vector<Eigen::VectorXd>& points,
                                       const std::vector<double>& weights, int maxdeg);

 private:
  GradedBasis basis_;
  Eigen::VectorXd values_;
};

// L_y(f) = sum_alpha f_alpha y_alpha.  Throws if deg f exceeds the sequence.
double riesz(const PseudoMomentSequence& y, const Polynomial& f);

// Moment matrix M_d(y): rows and columns indexed by monomials of degree <= d,
// entry (a, b) = y_{a+b}.  Symmetric bit-for-bit by construction.
Eigen::MatrixXd moment_matrix(const PseudoMomentSequence& y, int d);

// Localizing matrix M_d(r y): rows and columns indexed by monomials of degree
// <= d - ceil(deg(r)/2), entry (a, b) = sum_g r_g y_{a+b+g}.  With r = 1 this
// is the moment matrix of order d.
Eigen::MatrixXd localizing_matrix(const PseudoMomentSequence& y, const Polynomial& r, int d);

}  // namespace momix
