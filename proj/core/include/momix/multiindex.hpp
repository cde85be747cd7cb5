#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace momix {

// Exponent vector of a monomial in a fixed number of variables.
struct MultiIndex {
  std::vector<int> exp;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e) : exp(std::move(e)) {}
  MultiIndex(std::initializer_list<int> e) : exp(e) {}

  int nvars() const { return static_cast<int>(exp.size()); }

  int degree() const {
    int d = 0;
    for (int e : exp) d += e;
    return d;
  }

  MultiIndex operator+(const MultiIndex& other) const;

  bool operator==(const MultiIndex& other) const { return exp == other.exp; }
  bool operator<(const MultiIndex& other) const { return exp < other.exp; }

  std::string to_string() const;
};

// Number of monomials in n variables of degree <= d, i.e. binomial(n+d, d).
// Throws on overflow rather than silently wrapping.
std::uint64_t basis_size(int nvars, int maxdeg);

// All multi-indices with degree <= maxdeg in graded order: degree first,
// then lexicographically by exponents within a degree, so the constant
// monomial is first and x1^k precedes x1^(k-1)*x2.
class GradedBasis {
 public:
  GradedBasis() = default;
  GradedBasis(int nvars, int maxdeg);

  int nvars() const { return nvars_; }
  int maxdeg() const { return maxdeg_; }
  int size() const { return static_cast<int>(list_.size()); }

  const MultiIndex& at(int i) const { return list_[i]; }
  const std::vector<MultiIndex>& all() const { return list_; }

  bool contains(const MultiIndex& alpha) const { return index_.count(alpha.exp) != 0; }

  // Position in graded order; throws if the index lies outside the basis.
  int position(const MultiIndex& alpha) const;

 private:
  int nvars_ = 0;
  int maxdeg_ = 0;
  std::vector<MultiIndex> list_;
  std::map<std::vector<int>, int> index_;
};

}  // namespace momix
