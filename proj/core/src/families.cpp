#include "momix/families.hpp"

#include <mutex>
#include <map>
#include <stdexcept>

namespace momix {

SemiAlgebraicSet::SemiAlgebraicSet(int pvars, std::vector<Polynomial> constraints)
    : pvars_(pvars), constraints_(std::move(constraints)) {
  for (const auto& r : constraints_) {
    if (r.nvars() != pvars_) throw std::invalid_argument("SemiAlgebraicSet: variable count mismatch");
    if (r.is_zero()) throw std::invalid_argument("SemiAlgebraicSet: zero constraint");
    half_degrees_.push_back((r.degree() + 1) / 2);
  }
}

int SemiAlgebraicSet::max_half_degree() const {
  int d = 0;
  for (int h : half_degrees_) d = std::max(d, h);
  return d;
}

double SemiAlgebraicSet::violation(const Eigen::VectorXd& theta) const {
  double worst = 0.0;
  for (const auto& r : constraints_) worst = std::max(worst, -r.evaluate(theta));
  return worst;
}

SemiAlgebraicSet box_set(const std::vector<double>& lowers, const std::vector<double>& uppers) {
  if (lowers.empty() || lowers.size() != uppers.size())
    throw std::invalid_argument("box_set: bound count mismatch");
  const int p = static_cast<int>(lowers.size());
  std::vector<Polynomial> constraints;
  for (int i = 0; i < p; ++i) {
    if (!(lowers[i] < uppers[i])) throw std::invalid_argument("box_set: degenerate interval");
    const Polynomial t = Polynomial::variable(p, i);
    const Polynomial lo = Polynomial::constant(p, lowers[i]);
    const Polynomial hi = Polynomial::constant(p, uppers[i]);
    constraints.push_back((t - lo) * (hi - t));
  }
  SemiAlgebraicSet set(p, std::move(constraints));
  set.lowers_ = lowers;
  set.uppers_ = uppers;
  return set;
}

Polynomial trace_regularizer(int pvars, int d) {
  if (pvars <= 0 || d < 1) throw std::invalid_argument("trace_regularizer: bad arguments");
  Polynomial R(pvars);
  const GradedBasis basis(pvars, d);
  for (int i = 1; i < basis.size(); ++i) {  // skip gamma = 0
    std::vector<int> e = basis.at(i).exp;
    for (int& v : e) v *= 2;
    R.add_term(MultiIndex(std::move(e)), 1.0);
  }
  return R;
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double double_factorial_odd(int l) {
  // (2l - 1)!! with the empty product equal to 1
  double r = 1.0;
  for (int v = 2 * l - 1; v > 1; v -= 2) r *= v;
  return r;
}

}  // namespace

Polynomial gaussian1d_moment_poly(int k) {
  if (k < 0) throw std::invalid_argument("gaussian1d_moment_poly: negative order");
  // E[(m + sigma Z)^k] = sum_l binom(k, 2l) m^(k-2l) sigma^(2l) (2l-1)!!
  Polynomial p(2);
  for (int l = 0; 2 * l <= k; ++l)
    p.add_term(MultiIndex({k - 2 * l, 2 * l}), binom(k, 2 * l) * double_factorial_odd(l));
  return p;
}

Polynomial poisson_moment_poly(int k) {
  if (k < 0) throw std::invalid_argument("poisson_moment_poly: negative order");
  // Touchard polynomial via the Stirling recursion S(k,j) = j S(k-1,j) + S(k-1,j-1)
  std::vector<std::vector<double>> S(k + 1, std::vector<double>(k + 1, 0.0));
  S[0][0] = 1.0;
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= i; ++j) S[i][j] = j * S[i - 1][j] + S[i - 1][j - 1];
  Polynomial p(1);
  if (k == 0) {
    p.add_term(MultiIndex({0}), 1.0);
    return p;
  }
  for (int j = 1; j <= k; ++j)
    if (S[k][j] != 0.0) p.add_term(MultiIndex({j}), S[k][j]);
  return p;
}

Polynomial exponential_moment_poly(int k) {
  if (k < 0) throw std::invalid_argument("exponential_moment_poly: negative order");
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  Polynomial p(1);
  p.add_term(MultiIndex({k}), fact);
  return p;
}

std::string family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::gaussian_diagonal: return "gaussian";
    case FamilyKind::poisson: return "poisson";
    case FamilyKind::exponential: return "exponential";
  }
  throw std::logic_error("family_name: unknown kind");
}

FamilyKind family_from_name(const std::string& name) {
  if (name == "gaussian" || name == "gaussian_diagonal") return FamilyKind::gaussian_diagonal;
  if (name == "poisson") return FamilyKind::poisson;
  if (name == "exponential") return FamilyKind::exponential;
  throw std::invalid_argument("unknown family: " + name);
}

struct ParametricFamily::Impl {
  FamilyKind kind;
  int data_dim;
  int param_dim;
  mutable std::mutex mutex;
  mutable std::map<std::vector<int>, Polynomial> cache;

  // 1D moment polynomial of coordinate i embedded into the p parameter variables
  Polynomial coordinate_poly(int i, int k) const {
    switch (kind) {
      case FamilyKind::gaussian_diagonal: {
        const Polynomial base = gaussian1d_moment_poly(k);  // vars (m, sigma)
        Polynomial out(param_dim);
        for (const auto& [e, c] : base.terms()) {
          std::vector<int> exp(param_dim, 0);
          exp[i] = e[0];
          exp[data_dim + i] = e[1];
          out.add_term(MultiIndex(std::move(exp)), c);
        }
        return out;
      }
      case FamilyKind::poisson:
      case FamilyKind::exponential: {
        const Polynomial base =
            kind == FamilyKind::poisson ? poisson_moment_poly(k) : exponential_moment_poly(k);
        Polynomial out(param_dim);
        for (const auto& [e, c] : base.terms()) {
          std::vector<int> exp(param_dim, 0);
          exp[i] = e[0];
          out.add_term(MultiIndex(std::move(exp)), c);
        }
        return out;
      }
    }
    throw std::logic_error("coordinate_poly: unknown kind");
  }

  Polynomial build(const MultiIndex& alpha) const {
    Polynomial p = Polynomial::constant(param_dim, 1.0);
    for (int i = 0; i < data_dim; ++i)
      if (alpha.exp[i] > 0) p = p * coordinate_poly(i, alpha.exp[i]);
    return p;
  }
};

ParametricFamily ParametricFamily::gaussian_diagonal(int data_dim) {
  if (data_dim <= 0) throw std::invalid_argument("gaussian_diagonal: bad dimension");
  auto impl = std::make_shared<Impl>();
  impl->kind = FamilyKind::gaussian_diagonal;
  impl->data_dim = data_dim;
  impl->param_dim = 2 * data_dim;
  return ParametricFamily(std::move(impl));
}

ParametricFamily ParametricFamily::poisson(int data_dim) {
  if (data_dim <= 0) throw std::invalid_argument("poisson: bad dimension");
  auto impl = std::make_shared<Impl>();
  impl->kind = FamilyKind::poisson;
  impl->data_dim = data_dim;
  impl->param_dim = data_dim;
  return ParametricFamily(std::move(impl));
}

ParametricFamily ParametricFamily::exponential(int data_dim) {
  if (data_dim <= 0) throw std::invalid_argument("exponential: bad dimension");
  auto impl = std::make_shared<Impl>();
  impl->kind = FamilyKind::exponential;
  impl->data_dim = data_dim;
  impl->param_dim = data_dim;
  return ParametricFamily(std::move(impl));
}

ParametricFamily ParametricFamily::make(FamilyKind kind, int data_dim) {
  switch (kind) {
    case FamilyKind::gaussian_diagonal: return gaussian_diagonal(data_dim);
    case FamilyKind::poisson: return poisson(data_dim);
    case FamilyKind::exponential: return exponential(data_dim);
  }
  throw std::logic_error("ParametricFamily::make: unknown kind");
}

FamilyKind ParametricFamily::kind() const { return impl_->kind; }
std::string ParametricFamily::name() const { return family_name(impl_->kind); }
int ParametricFamily::data_dim() const { return impl_->data_dim; }
int ParametricFamily::param_dim() const { return impl_->param_dim; }

const Polynomial& ParametricFamily::moment_poly(const MultiIndex& alpha) const {
  if (alpha.nvars() != impl_->data_dim)
    throw std::invalid_argument("moment_poly: index dimension mismatch");
  std::lock_guard<std::mutex> lock(impl_->mutex);
  auto it = impl_->cache.find(alpha.exp);
  if (it == impl_->cache.end()) it = impl_->cache.emplace(alpha.exp, impl_->build(alpha)).first;
  return it->second;
}

double ParametricFamily::component_moment(const MultiIndex& alpha,
                                          const Eigen::VectorXd& theta) const {
  return moment_poly(alpha).evaluate(theta);
}

}  // namespace momix
