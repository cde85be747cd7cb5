#include "momix/moments.hpp"

#include <stdexcept>

namespace momix {

PseudoMomentSequence::PseudoMomentSequence(GradedBasis basis, Eigen::VectorXd values)
    : basis_(std::move(basis)), values_(std::move(values)) {
  if (values_.size() != basis_.size())
    throw std::invalid_argument("PseudoMomentSequence: value count does not match basis");
}

PseudoMomentSequence PseudoMomentSequence::of_atoms(const std::vector<Eigen::VectorXd>& points,
                                                    const std::vector<double>& weights,
                                                    int maxdeg) {
  if (points.empty() || points.size() != weights.size())
    throw std::invalid_argument("of_atoms: point/weight mismatch");
  const int nvars = static_cast<int>(points[0].size());
  PseudoMomentSequence y(nvars, maxdeg);
  for (int i = 0; i < y.basis().size(); ++i) {
    const MultiIndex& alpha = y.basis().at(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      double mono = 1.0;
      for (int j = 0; j < nvars; ++j)
        for (int e = 0; e < alpha.exp[j]; ++e) mono *= points[k][j];
      acc += weights[k] * mono;
    }
    y[i] = acc;
  }
  return y;
}

double riesz(const PseudoMomentSequence& y, const Polynomial& f) {
  if (f.nvars() != y.nvars()) throw std::invalid_argument("riesz: variable count mismatch");
  if (f.degree() > y.maxdeg()) throw std::invalid_argument("riesz: polynomial degree exceeds sequence");
  double acc = 0.0;
  for (const auto& [e, c] : f.terms()) acc += c * y.value(MultiIndex(e));
  return acc;
}

Eigen::MatrixXd moment_matrix(const PseudoMomentSequence& y, int d) {
  if (2 * d > y.maxdeg()) throw std::invalid_argument("moment_matrix: order exceeds sequence degree");
  const GradedBasis rows(y.nvars(), d);
  const int s = rows.size();
  Eigen::MatrixXd M(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      const double v = y.value(rows.at(i) + rows.at(j));
      M(i, j) = v;
      M(j, i) = v;
    }
  }
  return M;
}

Eigen::MatrixXd localizing_matrix(const PseudoMomentSequence& y, const Polynomial& r, int d) {
  if (r.nvars() != y.nvars()) throw std::invalid_argument("localizing_matrix: variable count mismatch");
  if (r.is_zero()) throw std::invalid_argument("localizing_matrix: zero constraint polynomial");
  const int dr = (r.degree() + 1) / 2;
  if (dr > d) throw std::invalid_argument("localizing_matrix: constraint degree exceeds 2d");
  if (2 * d > y.maxdeg()) throw std::invalid_argument("localizing_matrix: order exceeds sequence degree");
  const GradedBasis rows(y.nvars(), d - dr);
  const int s = rows.size();
  Eigen::MatrixXd M(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      const MultiIndex ab = rows.at(i) + rows.at(j);
      double acc = 0.0;
      for (const auto& [e, c] : r.terms()) acc += c * y.value(ab + MultiIndex(e));
      M(i, j) = acc;
      M(j, i) = acc;
    }
  }
  return M;
}

}  // namespace momix
