#include "momix/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace momix {

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.set_coeff(MultiIndex(std::vector<int>(nvars, 0)), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  if (i < 0 || i >= nvars) throw std::out_of_range("Polynomial::variable: index out of range");
  Polynomial p(nvars);
  std::vector<int> e(nvars, 0);
  e[i] = 1;
  p.set_coeff(MultiIndex(std::move(e)), 1.0);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, double c) {
  Polynomial p(alpha.nvars());
  p.set_coeff(alpha, c);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int deg = 0;
    for (int v : e) deg += v;
    if (deg > d) d = deg;
  }
  return d;
}

double Polynomial::coeff(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha.exp);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::set_coeff(const MultiIndex& alpha, double c) {
  if (alpha.nvars() != nvars_) throw std::invalid_argument("Polynomial: wrong variable count");
  if (c == 0.0)
    terms_.erase(alpha.exp);
  else
    terms_[alpha.exp] = c;
}

void Polynomial::add_term(const MultiIndex& alpha, double c) {
  if (alpha.nvars() != nvars_) throw std::invalid_argument("Polynomial: wrong variable count");
  auto it = terms_.find(alpha.exp);
  if (it == terms_.end()) {
    if (c != 0.0) terms_[alpha.exp] = c;
    return;
  }
  it->second += c;
  if (it->second == 0.0) terms_.erase(it);
}

void Polynomial::check_compatible(const Polynomial& other) const {
  if (nvars_ != other.nvars_) throw std::invalid_argument("Polynomial: mixed variable counts");
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_) add_term(MultiIndex(e), c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [e, c] : other.terms_) add_term(MultiIndex(e), -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial out(*this);
  out += other;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial out(*this);
  out -= other;
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  check_compatible(other);
  Polynomial out(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      std::vector<int> e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out.add_term(MultiIndex(std::move(e)), ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out(*this);
  out *= s;
  return out;
}

double Polynomial::evaluate(const Eigen::VectorXd& point) const {
  if (point.size() != nvars_) throw std::invalid_argument("Polynomial::evaluate: wrong point dimension");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= point[i];
    }
    acc += term;
  }
  return acc;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) {
        os << "*x" << i;
        if (e[i] > 1) os << '^' << e[i];
      }
    }
  }
  return os.str();
}

}  // namespace momix
