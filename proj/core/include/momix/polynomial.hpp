#pragma once

#include <Eigen/Core>
#include <map>
#include <vector>

#include "momix/multiindex.hpp"

namespace momix {

// Sparse polynomial over a fixed variable count.  Zero coefficients are
// never stored.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c);
  // x_i as a polynomial
  static Polynomial variable(int nvars, int i);
  static Polynomial monomial(const MultiIndex& alpha, double c = 1.0);

  int nvars() const { return nvars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }

  double coeff(const MultiIndex& alpha) const;
  void set_coeff(const MultiIndex& alpha, double c);
  void add_term(const MultiIndex& alpha, double c);

  const std::map<std::vector<int>, double>& terms() const { return terms_; }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double s) const;

  double evaluate(const Eigen::VectorXd& point) const;

  std::string to_string() const;

 private:
  void check_compatible(const Polynomial& other) const;

  int nvars_ = 0;
  std::map<std::vector<int>, double> terms_;
};

}  // namespace momix
