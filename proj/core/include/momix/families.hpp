#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "momix/polynomial.hpp"

namespace momix {

// Parameter set {theta : r_j(theta) >= 0}.  When built from coordinate
// bounds the box is kept for sampling and reporting.
class SemiAlgebraicSet {
 public:
  SemiAlgebraicSet() = default;
  SemiAlgebraicSet(int pvars, std::vector<Polynomial> constraints);

  int pvars() const { return pvars_; }
  const std::vector<Polynomial>& constraints() const { return constraints_; }
  // half-degrees d_j = ceil(deg r_j / 2)
  const std::vector<int>& half_degrees() const { return half_degrees_; }
  int max_half_degree() const;

  bool has_box() const { return !lowers_.empty(); }
  const std::vector<double>& lowers() const { return lowers_; }
  const std::vector<double>& uppers() const { return uppers_; }

  // largest violation of the constraints at theta; <= 0 means feasible
  double violation(const Eigen::VectorXd& theta) const;

  friend SemiAlgebraicSet box_set(const std::vector<double>& lowers,
                                  const std::vector<double>& uppers);

 private:
  int pvars_ = 0;
  std::vector<Polynomial> constraints_;
  std::vector<int> half_degrees_;
  std::vector<double> lowers_, uppers_;
};

// One constraint (theta_i - l_i)(u_i - theta_i) >= 0 per coordinate.
SemiAlgebraicSet box_set(const std::vector<double>& lowers, const std::vector<double>& uppers);

// R(theta) = sum over nonzero gamma in N^p_d of theta^(2 gamma); applying the
// Riesz functional of phi gives trace M_d(phi) minus the mass.
Polynomial trace_regularizer(int pvars, int d);

struct Regularizer {
  Polynomial poly;       // R over the parameters
  double strength = 0.0; // epsilon

  static Regularizer none(int pvars) { return {Polynomial(pvars), 0.0}; }
};

// k-th moment of N(m, sigma^2) as a polynomial in (m, sigma).
Polynomial gaussian1d_moment_poly(int k);
// k-th moment of Poisson(lambda): Touchard polynomial in lambda.
Polynomial poisson_moment_poly(int k);
// k-th moment of the exponential with mean eta: k! eta^k.
Polynomial exponential_moment_poly(int k);

enum class FamilyKind { gaussian_diagonal, poisson, exponential };

std::string family_name(FamilyKind kind);
FamilyKind family_from_name(const std::string& name);

// Component family on R^n with polynomial moment maps: alpha-th moment of
// the component with parameter theta is a polynomial p_alpha(theta) with
// deg p_alpha <= |alpha|.  Coordinates of a component are independent.
class ParametricFamily {
 public:
  static ParametricFamily gaussian_diagonal(int data_dim);  // theta = (m_1..m_n, s_1..s_n)
  static ParametricFamily poisson(int data_dim);            // theta = (lambda_1..lambda_n)
  static ParametricFamily exponential(int data_dim);        // theta = (eta_1..eta_n), mean parametrization
  static ParametricFamily make(FamilyKind kind, int data_dim);

  FamilyKind kind() const;
  std::string name() const;
  int data_dim() const;
  int param_dim() const;

  // Memoized; safe to call concurrently.
  const Polynomial& moment_poly(const MultiIndex& alpha) const;

  // Moment of the single component with parameter theta.
  double component_moment(const MultiIndex& alpha, const Eigen::VectorXd& theta) const;

 private:
  struct Impl;
  explicit ParametricFamily(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

}  // namespace momix
