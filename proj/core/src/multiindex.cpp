#include "momix/multiindex.hpp"

#include <limits>
#include <sstream>

namespace momix {

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (exp.size() != other.exp.size()) throw std::invalid_argument("multiindex: mixed variable counts");
  MultiIndex out(exp);
  for (std::size_t i = 0; i < exp.size(); ++i) out.exp[i] += other.exp[i];
  return out;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (i) os << ',';
    os << exp[i];
  }
  os << ')';
  return os.str();
}

std::uint64_t basis_size(int nvars, int maxdeg) {
  if (nvars < 0 || maxdeg < 0) throw std::invalid_argument("basis_size: negative argument");
  // binomial(nvars + maxdeg, maxdeg) with overflow guard
  std::uint64_t result = 1;
  for (int i = 1; i <= maxdeg; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(nvars) + static_cast<std::uint64_t>(i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num)
      throw std::overflow_error("basis_size: binomial overflow");
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

namespace {

void emit_degree(int nvars, int pos, int remaining, std::vector<int>& scratch,
                 std::vector<MultiIndex>& out) {
  if (pos == nvars - 1) {
    scratch[pos] = remaining;
    out.emplace_back(scratch);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    scratch[pos] = e;
    emit_degree(nvars, pos + 1, remaining - e, scratch, out);
  }
}

}  // namespace

GradedBasis::GradedBasis(int nvars, int maxdeg) : nvars_(nvars), maxdeg_(maxdeg) {
  if (nvars <= 0) throw std::invalid_argument("GradedBasis: nvars must be positive");
  if (maxdeg < 0) throw std::invalid_argument("GradedBasis: maxdeg must be nonnegative");
  const std::uint64_t total = basis_size(nvars, maxdeg);
  if (total > (1u << 22)) throw std::overflow_error("GradedBasis: basis too large");
  list_.reserve(total);
  std::vector<int> scratch(nvars, 0);
  for (int deg = 0; deg <= maxdeg; ++deg) emit_degree(nvars, 0, deg, scratch, list_);
  for (int i = 0; i < static_cast<int>(list_.size()); ++i) index_[list_[i].exp] = i;
}

int GradedBasis::position(const MultiIndex& alpha) const {
  auto it = index_.find(alpha.exp);
  if (it == index_.end())
    throw std::out_of_range("GradedBasis: index " + alpha.to_string() + " outside basis");
  return it->second;
}

}  // namespace momix
