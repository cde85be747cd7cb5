#include "momix/relax.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "momix/sdp.hpp"

namespace momix {

std::string distance_name(Distance d) { return d == Distance::w2 ? "w2" : "tv"; }

Distance distance_from_name(const std::string& name) {
  if (name == "w2" || name == "wasserstein") return Distance::w2;
  if (name == "tv") return Distance::tv;
  throw std::invalid_argument("unknown distance: " + name);
}

int RelaxationSpec::d_min() const {
  int d = set.max_half_degree();
  if (!regularizer.poly.is_zero()) d = std::max(d, (regularizer.poly.degree() + 1) / 2);
  return std::max(d, 1);
}

void RelaxationSpec::validate() const {
  if (order < 1) throw std::invalid_argument("RelaxationSpec: order must be >= 1");
  if (epsilon < 0.0) throw std::invalid_argument("RelaxationSpec: negative epsilon");
  if (set.pvars() != family.param_dim())
    throw std::invalid_argument("RelaxationSpec: set dimension does not match family parameters");
  if (!regularizer.poly.is_zero() && regularizer.poly.nvars() != family.param_dim())
    throw std::invalid_argument("RelaxationSpec: regularizer dimension mismatch");
  if (order < d_min()) throw std::invalid_argument("RelaxationSpec: order below d_min");
}

Eigen::MatrixXd PsdBlock::value(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd M = offset;
  for (const auto& e : entries) {
    M(e.row, e.col) += e.coef * x[e.var];
    if (e.row != e.col) M(e.col, e.row) += e.coef * x[e.var];
  }
  return M;
}

const VariableGroup& SdpProblem::group(const std::string& tag) const {
  for (const auto& g : groups)
    if (g.tag == tag) return g;
  throw std::out_of_range("SdpProblem: no variable group " + tag);
}

double SdpProblem::objective_value(const Eigen::VectorXd& x) const {
  return objective.dot(x) + objective_const;
}

double SdpProblem::max_equality_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (const auto& row : equalities) {
    double acc = -row.rhs;
    for (const auto& t : row.terms) acc += t.coef * x[t.var];
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

double SdpProblem::min_block_eigenvalue(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (const auto& b : blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.value(x), Eigen::EigenvaluesOnly);
    worst = std::min(worst, es.eigenvalues().minCoeff());
  }
  return worst;
}

int SdpProblem::entry_var(const std::string& tag, const MultiIndex& alpha, double* fixed) const {
  const VariableGroup& g = group(tag);
  const int pos = g.basis.position(alpha);
  if (g.var_of[pos] < 0 && fixed) *fixed = g.fixed_value[pos];
  return g.var_of[pos];
}

void SdpProblem::write_text(std::ostream& os) const {
  os << "sdp " << distance << " order " << order << " epsilon " << epsilon << "\n";
  os << "vars " << num_vars << "\n";
  os << "objective_const " << objective_const << "\n";
  for (int i = 0; i < objective.size(); ++i)
    if (objective[i] != 0.0) os << "obj " << i << " " << objective[i] << "\n";
  for (std::size_t r = 0; r < equalities.size(); ++r) {
    for (const auto& t : equalities[r].terms)
      os << "eq " << r << " " << t.var << " " << t.coef << "\n";
    os << "rhs " << r << " " << equalities[r].rhs << "\n";
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    os << "block " << b << " " << blocks[b].label << " size " << blocks[b].size << "\n";
    for (int i = 0; i < blocks[b].size; ++i)
      for (int j = i; j < blocks[b].size; ++j)
        if (blocks[b].offset(i, j) != 0.0)
          os << "off " << b << " " << i << " " << j << " " << blocks[b].offset(i, j) << "\n";
    for (const auto& e : blocks[b].entries)
      os << "ent " << b << " " << e.row << " " << e.col << " " << e.var << " " << e.coef << "\n";
  }
}

namespace {

// Merges per-cell coefficients so each (row, col, var) appears once.
class BlockBuilder {
 public:
  BlockBuilder(std::string label, int size)
      : label_(std::move(label)), size_(size), offset_(Eigen::MatrixXd::Zero(size, size)) {}

  void add_offset(int r, int c, double v) {
    offset_(r, c) += v;
    if (r != c) offset_(c, r) += v;
  }

  void add(int r, int c, int var, double coef) {
    if (coef == 0.0) return;
    coef_[{r, c, var}] += coef;
  }

  PsdBlock finish() const {
    PsdBlock b;
    b.label = label_;
    b.size = size_;
    b.offset = offset_;
    b.entries.reserve(coef_.size());
    for (const auto& [key, coef] : coef_) {
      if (coef == 0.0) continue;
      b.entries.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), coef});
    }
    return b;
  }

 private:
  std::string label_;
  int size_;
  Eigen::MatrixXd offset_;
  std::map<std::tuple<int, int, int>, double> coef_;
};

void check_mu(const PseudoMomentSequence& mu, const RelaxationSpec& spec) {
  spec.validate();
  if (mu.nvars() != spec.family.data_dim())
    throw std::invalid_argument("build: data moment dimension does not match family");
  if (mu.maxdeg() < 2 * spec.order)
    throw std::invalid_argument("build: data moments must reach degree 2d");
  if (std::abs(mu.mass() - 1.0) > 1e-8)
    throw std::invalid_argument("build: data moments are not a probability measure");
}

// Localizing blocks of the mixing-measure variables phi, j = 0 giving the
// plain moment matrix.
void append_phi_blocks(const RelaxationSpec& spec, const VariableGroup& phi,
                       std::vector<PsdBlock>& out) {
  const int p = spec.family.param_dim();
  const int d = spec.order;
  {
    const GradedBasis rows(p, d);
    BlockBuilder bb("moment_phi", rows.size());
    for (int i = 0; i < rows.size(); ++i)
      for (int j = i; j < rows.size(); ++j)
        bb.add(i, j, phi.var_of[phi.basis.position(rows.at(i) + rows.at(j))], 1.0);
    out.push_back(bb.finish());
  }
  const auto& constraints = spec.set.constraints();
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const Polynomial& r = constraints[k];
    const int dk = spec.set.half_degrees()[k];
    const GradedBasis rows(p, d - dk);
    BlockBuilder bb("localizing_" + std::to_string(k), rows.size());
    for (int i = 0; i < rows.size(); ++i) {
      for (int j = i; j < rows.size(); ++j) {
        const MultiIndex ab = rows.at(i) + rows.at(j);
        for (const auto& [e, c] : r.terms())
          bb.add(i, j, phi.var_of[phi.basis.position(ab + MultiIndex(e))], c);
      }
    }
    out.push_back(bb.finish());
  }
}

void add_regularizer_objective(const RelaxationSpec& spec, const VariableGroup& phi,
                               Eigen::VectorXd& c, double& c0) {
  if (spec.epsilon == 0.0 || spec.regularizer.poly.is_zero()) return;
  for (const auto& [e, coef] : spec.regularizer.poly.terms()) {
    const int pos = phi.basis.position(MultiIndex(e));
    if (phi.var_of[pos] >= 0)
      c[phi.var_of[pos]] += spec.epsilon * coef;
    else
      c0 += spec.epsilon * coef * phi.fixed_value[pos];
  }
}

}  // namespace

SdpProblem build_w2(const PseudoMomentSequence& mu, const RelaxationSpec& spec) {
  if (spec.distance != Distance::w2) throw std::invalid_argument("build_w2: spec distance is not w2");
  check_mu(mu, spec);
  const int n = spec.family.data_dim();
  const int p = spec.family.param_dim();
  const int d = spec.order;

  SdpProblem prob;
  prob.distance = "w2";
  prob.order = d;
  prob.epsilon = spec.epsilon;

  // lambda lives on (x, y); entries with empty y-half are pinned to the data
  // moments at build time
  VariableGroup lambda{"lambda", GradedBasis(2 * n, 2 * d), {}, {}};
  lambda.var_of.assign(lambda.basis.size(), -1);
  lambda.fixed_value.assign(lambda.basis.size(), 0.0);
  int next = 0;
  for (int i = 0; i < lambda.basis.size(); ++i) {
    const MultiIndex& ab = lambda.basis.at(i);
    bool y_empty = true;
    for (int j = n; j < 2 * n; ++j)
      if (ab.exp[j] != 0) y_empty = false;
    if (y_empty) {
      std::vector<int> a(ab.exp.begin(), ab.exp.begin() + n);
      lambda.fixed_value[i] = mu.value(MultiIndex(std::move(a)));
      ++prob.eliminated_vars;
    } else {
      lambda.var_of[i] = next++;
    }
  }

  VariableGroup phi{"phi", GradedBasis(p, 2 * d), {}, {}};
  phi.var_of.assign(phi.basis.size(), -1);
  phi.fixed_value.assign(phi.basis.size(), 0.0);
  for (int i = 0; i < phi.basis.size(); ++i) phi.var_of[i] = next++;

  prob.num_vars = next;
  prob.objective = Eigen::VectorXd::Zero(next);

  // transport cost sum_i (x_i - y_i)^2
  for (int i = 0; i < n; ++i) {
    std::vector<int> xx(2 * n, 0), xy(2 * n, 0), yy(2 * n, 0);
    xx[i] = 2;
    xy[i] = 1;
    xy[n + i] = 1;
    yy[n + i] = 2;
    const int pxx = lambda.basis.position(MultiIndex(std::move(xx)));
    prob.objective_const += lambda.fixed_value[pxx];  // data side is pinned
    prob.objective[lambda.var_of[lambda.basis.position(MultiIndex(std::move(xy)))]] += -2.0;
    prob.objective[lambda.var_of[lambda.basis.position(MultiIndex(std::move(yy)))]] += 1.0;
  }
  add_regularizer_objective(spec, phi, prob.objective, prob.objective_const);

  // y-marginal of lambda equals the mixture moments; the alpha = 0 row
  // reduces to the mass normalization phi_0 = 1
  const GradedBasis data_basis(n, 2 * d);
  for (int a = 0; a < data_basis.size(); ++a) {
    const MultiIndex& alpha = data_basis.at(a);
    EqRow row;
    std::vector<int> e(2 * n, 0);
    for (int j = 0; j < n; ++j) e[n + j] = alpha.exp[j];
    const int lpos = lambda.basis.position(MultiIndex(std::move(e)));
    if (lambda.var_of[lpos] >= 0)
      row.terms.push_back({lambda.var_of[lpos], 1.0});
    else
      row.rhs -= lambda.fixed_value[lpos];
    const Polynomial& pa = spec.family.moment_poly(alpha);
    for (const auto& [ge, gc] : pa.terms())
      row.terms.push_back({phi.var_of[phi.basis.position(MultiIndex(ge))], -gc});
    prob.equalities.push_back(std::move(row));
  }
  prob.logical_equalities = 2 * data_basis.size() + 1;

  {
    const GradedBasis rows(2 * n, d);
    BlockBuilder bb("moment_lambda", rows.size());
    for (int i = 0; i < rows.size(); ++i) {
      for (int j = i; j < rows.size(); ++j) {
        const int pos = lambda.basis.position(rows.at(i) + rows.at(j));
        if (lambda.var_of[pos] >= 0)
          bb.add(i, j, lambda.var_of[pos], 1.0);
        else
          bb.add_offset(i, j, lambda.fixed_value[pos]);
      }
    }
    prob.blocks.push_back(bb.finish());
  }
  append_phi_blocks(spec, phi, prob.blocks);

  prob.groups.push_back(std::move(lambda));
  prob.groups.push_back(std::move(phi));
  return prob;
}

SdpProblem build_tv(const PseudoMomentSequence& mu, const RelaxationSpec& spec) {
  if (spec.distance != Distance::tv) throw std::invalid_argument("build_tv: spec distance is not tv");
  check_mu(mu, spec);
  const int n = spec.family.data_dim();
  const int p = spec.family.param_dim();
  const int d = spec.order;

  SdpProblem prob;
  prob.distance = "tv";
  prob.order = d;
  prob.epsilon = spec.epsilon;

  const GradedBasis data_basis(n, 2 * d);
  auto make_group = [&](const std::string& tag, int nvars, int& next) {
    VariableGroup g{tag, GradedBasis(nvars, 2 * d), {}, {}};
    g.var_of.assign(g.basis.size(), -1);
    g.fixed_value.assign(g.basis.size(), 0.0);
    for (int i = 0; i < g.basis.size(); ++i) g.var_of[i] = next++;
    return g;
  };
  int next = 0;
  VariableGroup psi_plus = make_group("psi_plus", n, next);
  VariableGroup psi_minus = make_group("psi_minus", n, next);
  VariableGroup phi = make_group("phi", p, next);
  prob.num_vars = next;
  prob.objective = Eigen::VectorXd::Zero(next);

  prob.objective[psi_plus.var_of[0]] += 1.0;
  prob.objective[psi_minus.var_of[0]] += 1.0;
  add_regularizer_objective(spec, phi, prob.objective, prob.objective_const);

  // Hahn-Jordan split: psi+ - psi- = mu - nu_phi at every degree <= 2d
  for (int a = 0; a < data_basis.size(); ++a) {
    const MultiIndex& alpha = data_basis.at(a);
    EqRow row;
    row.terms.push_back({psi_plus.var_of[a], 1.0});
    row.terms.push_back({psi_minus.var_of[a], -1.0});
    const Polynomial& pa = spec.family.moment_poly(alpha);
    for (const auto& [ge, gc] : pa.terms())
      row.terms.push_back({phi.var_of[phi.basis.position(MultiIndex(ge))], gc});
    row.rhs = mu.value(alpha);
    prob.equalities.push_back(std::move(row));
  }
  {
    EqRow norm;
    norm.terms.push_back({phi.var_of[0], 1.0});
    norm.rhs = 1.0;
    prob.equalities.push_back(std::move(norm));
  }
  prob.logical_equalities = data_basis.size() + 1;

  const GradedBasis rows(n, d);
  {
    // M_d(mu) - M_d(psi+) >= 0: domination by the data measure
    BlockBuilder bb("dominate_plus", rows.size());
    for (int i = 0; i < rows.size(); ++i) {
      for (int j = i; j < rows.size(); ++j) {
        const MultiIndex ab = rows.at(i) + rows.at(j);
        bb.add_offset(i, j, mu.value(ab));
        bb.add(i, j, psi_plus.var_of[psi_plus.basis.position(ab)], -1.0);
      }
    }
    prob.blocks.push_back(bb.finish());
  }
  {
    BlockBuilder bb("moment_psi_plus", rows.size());
    for (int i = 0; i < rows.size(); ++i)
      for (int j = i; j < rows.size(); ++j)
        bb.add(i, j, psi_plus.var_of[psi_plus.basis.position(rows.at(i) + rows.at(j))], 1.0);
    prob.blocks.push_back(bb.finish());
  }
  {
    // M_d(p; phi) - M_d(psi-) >= 0: domination by the mixture
    BlockBuilder bb("dominate_minus", rows.size());
    for (int i = 0; i < rows.size(); ++i) {
      for (int j = i; j < rows.size(); ++j) {
        const MultiIndex ab = rows.at(i) + rows.at(j);
        const Polynomial& pab = spec.family.moment_poly(ab);
        for (const auto& [ge, gc] : pab.terms())
          bb.add(i, j, phi.var_of[phi.basis.position(MultiIndex(ge))], gc);
        bb.add(i, j, psi_minus.var_of[psi_minus.basis.position(ab)], -1.0);
      }
    }
    prob.blocks.push_back(bb.finish());
  }
  {
    BlockBuilder bb("moment_psi_minus", rows.size());
    for (int i = 0; i < rows.size(); ++i)
      for (int j = i; j < rows.size(); ++j)
        bb.add(i, j, psi_minus.var_of[psi_minus.basis.position(rows.at(i) + rows.at(j))], 1.0);
    prob.blocks.push_back(bb.finish());
  }
  append_phi_blocks(spec, phi, prob.blocks);

  prob.groups.push_back(std::move(psi_plus));
  prob.groups.push_back(std::move(psi_minus));
  prob.groups.push_back(std::move(phi));
  return prob;
}

SdpProblem build_univariate_projection(const PseudoMomentSequence& mu1d, int coordinate,
                                       const RelaxationSpec& spec) {
  if (mu1d.nvars() != 1)
    throw std::invalid_argument("build_univariate_projection: expected 1D moments");
  if (spec.family.data_dim() != 1)
    throw std::invalid_argument("build_univariate_projection: family must be univariate");
  if (coordinate < 0) throw std::invalid_argument("build_univariate_projection: bad coordinate");
  SdpProblem prob =
      spec.distance == Distance::w2 ? build_w2(mu1d, spec) : build_tv(mu1d, spec);
  prob.coordinate = coordinate;
  return prob;
}

double duality_gap(const SdpProblem& problem, const ConicSolution& solution) {
  (void)problem;
  if (solution.status != SolveStatus::optimal)
    throw std::invalid_argument("duality_gap: solution is not optimal");
  return std::abs(solution.primal_objective - solution.dual_objective) /
         (1.0 + std::abs(solution.primal_objective));
}

}  // namespace momix
