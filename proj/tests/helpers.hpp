#pragma once

// Shared fixtures and numeric oracles.  The oracles are deliberately
// independent of the implementations they check: moments come from
// quadrature or direct summation here, never from the library's closed
// forms, so a bug in the moment maps cannot hide behind itself.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <momix/data.hpp>
#include <momix/families.hpp>
#include <momix/moments.hpp>
#include <momix/rng.hpp>

namespace testhelp {

// Composite Simpson.  The integrands below are smooth, so a fixed fine grid
// beats adaptive bookkeeping.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// E[x^k] of N(m, s^2), integrated over +-12 standard deviations.
inline double gauss_moment_quad(int k, double m, double s) {
  const double inv = 1.0 / (s * std::sqrt(2.0 * M_PI));
  auto f = [&](double x) {
    const double z = (x - m) / s;
    return std::pow(x, k) * inv * std::exp(-0.5 * z * z);
  };
  return simpson(f, m - 12.0 * s, m + 12.0 * s, 8000);
}

// E[x^a * y^b] for independent N(mx, sx^2), N(my, sy^2).
inline double gauss2_moment_quad(int a, int b, double mx, double sx, double my, double sy) {
  return gauss_moment_quad(a, mx, sx) * gauss_moment_quad(b, my, sy);
}

// E[x^k] of the exponential distribution with mean eta.
inline double exp_moment_quad(int k, double eta) {
  auto f = [&](double x) { return std::pow(x, k) * std::exp(-x / eta) / eta; };
  // the integrand of x^8 still has all its mass far below 80 means
  return simpson(f, 0.0, eta * (80.0 + 10.0 * k), 20000);
}

// E[x^k] of Poisson(lambda) by direct summation.
inline double poisson_moment_sum(int k, double lambda) {
  double acc = 0.0;
  double pmf = std::exp(-lambda);  // P(X = 0)
  const int xmax = static_cast<int>(lambda) + 60 + 10 * k;
  for (int x = 0; x <= xmax; ++x) {
    acc += std::pow(static_cast<double>(x), k) * pmf;
    pmf *= lambda / (x + 1);
  }
  return acc;
}

// Exact normal moments by the textbook recursion M_k = m M_{k-1} + (k-1) s^2 M_{k-2};
// a second independent route used to cross-check the quadrature itself.
inline double gauss_moment_recursion(int k, double m, double s) {
  std::vector<double> M{1.0, m};
  for (int j = 2; j <= k; ++j) M.push_back(m * M[j - 1] + (j - 1) * s * s * M[j - 2]);
  return M[static_cast<std::size_t>(k)];
}

// Moments of sum_i w_i delta_{theta_i} up to maxdeg, computed by direct
// power sums (no library moment code on this path).
inline momix::PseudoMomentSequence atomic_moments(const std::vector<Eigen::VectorXd>& atoms,
                                                  const std::vector<double>& weights, int maxdeg) {
  const int p = static_cast<int>(atoms.at(0).size());
  momix::PseudoMomentSequence out(p, maxdeg);
  for (int i = 0; i < out.basis().size(); ++i) {
    const auto& e = out.basis().at(i).exp;
    double v = 0.0;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      double term = weights[a];
      for (int j = 0; j < p; ++j) term *= std::pow(atoms[a][j], e[static_cast<std::size_t>(j)]);
      v += term;
    }
    out[i] = v;
  }
  return out;
}

// Moments of the mixture sum_i w_i mu_{theta_i} of a parametric family.
inline momix::PseudoMomentSequence mixture_moments(const momix::ParametricFamily& fam,
                                                   const std::vector<Eigen::VectorXd>& thetas,
                                                   const std::vector<double>& weights, int maxdeg) {
  momix::PseudoMomentSequence out(fam.data_dim(), maxdeg);
  momix::GradedBasis basis(fam.data_dim(), maxdeg);
  for (int i = 0; i < basis.size(); ++i) {
    double v = 0.0;
    for (std::size_t a = 0; a < thetas.size(); ++a)
      v += weights[a] * fam.component_moment(basis.at(i), thetas[a]);
    out[i] = v;
  }
  return out;
}

// Canonical ordering for atom comparison: lexicographic, weights carried.
inline void sort_atoms(std::vector<Eigen::VectorXd>& atoms, std::vector<double>* weights = nullptr) {
  std::vector<std::size_t> idx(atoms.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto lex = [&](std::size_t a, std::size_t b) {
    for (int j = 0; j < atoms[a].size(); ++j) {
      if (atoms[a][j] < atoms[b][j]) return true;
      if (atoms[a][j] > atoms[b][j]) return false;
    }
    return false;
  };
  std::sort(idx.begin(), idx.end(), lex);
  std::vector<Eigen::VectorXd> sa;
  std::vector<double> sw;
  for (std::size_t i : idx) {
    sa.push_back(atoms[i]);
    if (weights) sw.push_back((*weights)[i]);
  }
  atoms = std::move(sa);
  if (weights) *weights = std::move(sw);
}

// max_i ||a_i - b_i||_inf after both sides are canonically sorted
inline double atom_set_distance(std::vector<Eigen::VectorXd> a, std::vector<Eigen::VectorXd> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  sort_atoms(a);
  sort_atoms(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return worst;
}

inline std::vector<double> uniform_sample(int n, std::uint64_t seed) {
  momix::Rng rng(seed);
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (auto& x : xs) x = rng.uniform();
  return xs;
}

inline momix::PseudoMomentSequence moments_of_1d(const std::vector<double>& xs, int maxdeg) {
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) pts(static_cast<Eigen::Index>(i), 0) = xs[i];
  return momix::empirical_moments(pts, maxdeg);
}

}  // namespace testhelp
