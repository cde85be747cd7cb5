#include "momix/extract.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "momix/rng.hpp"

namespace momix {

namespace {

// Rows of the order-d basis whose monomials only touch the given parameters.
std::vector<int> supported_rows(const GradedBasis& basis, const std::vector<int>& subset) {
  std::vector<bool> keep(static_cast<std::size_t>(basis.nvars()), false);
  for (int v : subset) {
    if (v < 0 || v >= basis.nvars()) throw std::invalid_argument("parameter index out of range");
    keep[static_cast<std::size_t>(v)] = true;
  }
  std::vector<int> rows;
  for (int i = 0; i < basis.size(); ++i) {
    const auto& e = basis.at(i).exp;
    bool ok = true;
    for (int v = 0; v < basis.nvars(); ++v) {
      if (e[static_cast<std::size_t>(v)] > 0 && !keep[static_cast<std::size_t>(v)]) {
        ok = false;
        break;
      }
    }
    if (ok) rows.push_back(i);
  }
  return rows;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

Eigen::MatrixXd principal_moment_matrix(const PseudoMomentSequence& phi, int d,
                                        const std::vector<int>& subset) {
  Eigen::MatrixXd M = moment_matrix(phi, d);
  if (subset.empty()) return M;
  GradedBasis basis(phi.nvars(), d);
  const std::vector<int> rows = supported_rows(basis, subset);
  Eigen::MatrixXd P(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) P(i, j) = M(rows[i], rows[j]);
  return P;
}

RankEstimate estimate_rank(const Eigen::MatrixXd& M, double tol) {
  if (M.rows() != M.cols()) throw std::invalid_argument("estimate_rank: matrix must be square");
  if (tol < 0.0 || tol >= 1.0) throw std::invalid_argument("estimate_rank: tol must be in [0, 1)");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
  RankEstimate est;
  est.eigenvalues = eig.eigenvalues().reverse();  // descending
  for (int i = 0; i < est.eigenvalues.size(); ++i)
    est.eigenvalues[i] = std::max(0.0, est.eigenvalues[i]);
  const double total = est.eigenvalues.sum();
  if (total <= 0.0) {
    est.khat = 0;
    est.energy_kept = 0.0;
    est.degenerate = true;
    return est;
  }
  double acc = 0.0;
  for (int r = 0; r < est.eigenvalues.size(); ++r) {
    acc += est.eigenvalues[r];
    if (acc >= (1.0 - tol) * total) {
      est.khat = r + 1;
      est.energy_kept = acc / total;
      break;
    }
  }
  if (est.khat == 0) {  // guard against rounding in the final partial sum
    est.khat = static_cast<int>(est.eigenvalues.size());
    est.energy_kept = 1.0;
  }
  return est;
}

FlatnessDetail flatness_detail(const PseudoMomentSequence& phi, int d, int d_min, double tol,
                               const std::vector<int>& param_subset) {
  if (d_min < 1) throw std::invalid_argument("flatness_detail: d_min must be >= 1");
  if (d - d_min < 0) throw std::invalid_argument("flatness_detail: d - d_min is negative");
  FlatnessDetail out;
  out.rank_high = estimate_rank(principal_moment_matrix(phi, d, param_subset), tol).khat;
  out.rank_low = estimate_rank(principal_moment_matrix(phi, d - d_min, param_subset), tol).khat;
  out.flat = out.rank_high > 0 && out.rank_high == out.rank_low;
  return out;
}

bool flatness_check(const PseudoMomentSequence& phi, int d, int d_min, double tol) {
  return flatness_detail(phi, d, d_min, tol).flat;
}

std::vector<Eigen::VectorXd> extract_atoms(const Eigen::MatrixXd& M, const GradedBasis& basis,
                                           int K, std::uint64_t seed) {
  const int s = static_cast<int>(M.rows());
  if (M.cols() != s || basis.size() != s)
    throw std::invalid_argument("extract_atoms: matrix and basis sizes disagree");
  if (K < 1 || K > s) throw std::invalid_argument("extract_atoms: K out of range");
  const int p = basis.nvars();
  const int d = basis.maxdeg();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
  // Truncated factor C with M ~ C C^T, columns ordered by decreasing energy.
  Eigen::MatrixXd C(s, K);
  for (int j = 0; j < K; ++j) {
    const int src = s - 1 - j;
    const double lam = std::max(0.0, eig.eigenvalues()[src]);
    C.col(j) = eig.eigenvectors().col(src) * std::sqrt(lam);
  }

  // Reduced column echelon form.  Pivot rows are scanned in graded order so
  // the pivot monomials form the lowest-degree basis of the column space.
  Eigen::MatrixXd U = C;
  const double pivot_tol = 1e-8 * std::max(1.0, C.cwiseAbs().maxCoeff());
  std::vector<int> pivot_rows;
  int col = 0;
  for (int row = 0; row < s && col < K; ++row) {
    int best = col;
    for (int j = col + 1; j < K; ++j)
      if (std::abs(U(row, j)) > std::abs(U(row, best))) best = j;
    if (std::abs(U(row, best)) <= pivot_tol) continue;
    U.col(col).swap(U.col(best));
    U.col(col) /= U(row, col);
    for (int j = 0; j < K; ++j) {
      if (j == col) continue;
      U.col(j) -= U(row, j) * U.col(col);
    }
    pivot_rows.push_back(row);
    ++col;
  }
  if (col < K)
    throw ExtractionError("extract_atoms: echelon rank below requested atom count; "
                          "increase the relaxation order or loosen the rank tolerance");

  // Every pivot monomial must admit all single-variable shifts inside the
  // basis, otherwise the shift operators cannot be formed at this order.
  for (int r : pivot_rows) {
    if (basis.at(r).degree() >= d && d > 0)
      throw ExtractionError("extract_atoms: pivot monomial of full degree; "
                            "increase the relaxation order");
  }

  // Shift operators N_v from all rows of degree <= d - 1, least squares.
  std::vector<int> low_rows;
  for (int i = 0; i < s; ++i)
    if (basis.at(i).degree() <= d - 1) low_rows.push_back(i);
  const int nl = static_cast<int>(low_rows.size());
  Eigen::MatrixXd UL(nl, K);
  for (int i = 0; i < nl; ++i) UL.row(i) = U.row(low_rows[i]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(UL);
  if (qr.rank() < K)
    throw ExtractionError("extract_atoms: low-degree rows do not span the column space; "
                          "increase the relaxation order");

  std::vector<Eigen::MatrixXd> N(static_cast<std::size_t>(p));
  for (int v = 0; v < p; ++v) {
    Eigen::MatrixXd shifted(nl, K);
    for (int i = 0; i < nl; ++i) {
      MultiIndex m = basis.at(low_rows[i]);
      m.exp[static_cast<std::size_t>(v)] += 1;
      shifted.row(i) = U.row(basis.position(m));
    }
    N[static_cast<std::size_t>(v)] = qr.solve(shifted);
  }

  // Simultaneous approximate diagonalization via one random combination.
  Rng rng(seed, 0x7e);
  Eigen::VectorXd kappa(p);
  for (int v = 0; v < p; ++v) kappa[v] = rng.normal();
  kappa /= kappa.norm();
  Eigen::MatrixXd Nmix = Eigen::MatrixXd::Zero(K, K);
  for (int v = 0; v < p; ++v) Nmix += kappa[v] * N[static_cast<std::size_t>(v)];

  Eigen::RealSchur<Eigen::MatrixXd> schur(Nmix);
  const Eigen::MatrixXd& Q = schur.matrixU();

  std::vector<Eigen::VectorXd> atoms;
  atoms.reserve(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    Eigen::VectorXd theta(p);
    for (int v = 0; v < p; ++v)
      theta[v] = Q.col(i).dot(N[static_cast<std::size_t>(v)] * Q.col(i));
    atoms.push_back(std::move(theta));
  }
  std::sort(atoms.begin(), atoms.end(), lex_less);
  return atoms;
}

std::vector<double> recover_weights(std::vector<Eigen::VectorXd>& atoms,
                                    const PseudoMomentSequence& phi, int d) {
  if (atoms.empty()) throw std::invalid_argument("recover_weights: no atoms");
  const int p = phi.nvars();
  for (const auto& a : atoms)
    if (a.size() != p) throw std::invalid_argument("recover_weights: atom dimension mismatch");

  // Merge near-duplicate atoms; duplicates make the Vandermonde singular.
  constexpr double merge_tol = 1e-6;
  std::vector<Eigen::VectorXd> merged;
  for (const auto& a : atoms) {
    bool absorbed = false;
    for (auto& m : merged) {
      if ((m - a).norm() < merge_tol) {
        m = 0.5 * (m + a);
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(a);
  }
  atoms = merged;

  GradedBasis basis(p, d);
  const int rows = basis.size();
  const int K = static_cast<int>(atoms.size());
  Eigen::MatrixXd V(rows, K);
  Eigen::VectorXd rhs(rows);
  for (int i = 0; i < rows; ++i) {
    const auto& e = basis.at(i).exp;
    for (int j = 0; j < K; ++j) {
      double val = 1.0;
      for (int v = 0; v < p; ++v) val *= std::pow(atoms[static_cast<std::size_t>(j)][v], e[static_cast<std::size_t>(v)]);
      V(i, j) = val;
    }
    rhs[i] = phi.value(basis.at(i));
  }
  Eigen::VectorXd w = V.colPivHouseholderQr().solve(rhs);

  const double mass = phi.mass();
  for (int j = 0; j < K; ++j) w[j] = std::max(0.0, w[j]);
  const double sum = w.sum();
  if (sum <= 0.0) throw ExtractionError("recover_weights: all weights vanished");
  w *= mass / sum;
  return std::vector<double>(w.data(), w.data() + K);
}

std::string algorithm1_status_name(Algorithm1Result::Status s) {
  switch (s) {
    case Algorithm1Result::Status::flat: return "flat";
    case Algorithm1Result::Status::approximate: return "approximate";
    case Algorithm1Result::Status::failed: return "failed";
  }
  return "unknown";
}

Algorithm1Result run_algorithm1(const PseudoMomentSequence& mu, const RelaxationSpec& spec,
                                const Algorithm1Options& opts) {
  Algorithm1Result res;
  res.phi = PseudoMomentSequence(spec.family.param_dim(), 0);

  const int d0 = spec.order;
  int dmax = std::max(opts.max_order, d0);
  // Each order needs data moments up to degree 2d.
  dmax = std::min(dmax, mu.maxdeg() / 2);
  if (dmax < d0) {
    res.message = "data moments do not cover the requested order";
    return res;
  }
  // Flatness compares against the step forced by the support constraints
  // alone; the regularizer grows with d and would push the gap to zero.
  int d_gap = 1;
  for (int hd : spec.set.half_degrees()) d_gap = std::max(d_gap, hd);

  const int p = spec.family.param_dim();

  for (int d = d0; d <= dmax; ++d) {
    RelaxationSpec spec_d = spec;
    spec_d.order = d;
    if (opts.track_order_regularizer && !spec.regularizer.poly.is_zero())
      spec_d.regularizer.poly = trace_regularizer(p, d);

    OrderTrace tr;
    tr.order = d;
    SdpProblem prob = spec_d.distance == Distance::w2 ? build_w2(mu, spec_d) : build_tv(mu, spec_d);
    ConicSolution sol = solve(prob, opts.solver);
    tr.solve_status = status_name(sol.status);
    if (sol.status != SolveStatus::optimal) {
      res.trace.push_back(tr);
      res.message = "solver returned " + tr.solve_status + " at order " + std::to_string(d);
      continue;
    }
    tr.objective = sol.primal_objective;
    tr.gap = duality_gap(prob, sol);

    PseudoMomentSequence phi = extract_moment_vector(sol, "phi");
    FlatnessDetail fd = flatness_detail(phi, d, std::min(d_gap, d), opts.tol, opts.rank_params);
    tr.rank_high = fd.rank_high;
    tr.rank_low = fd.rank_low;
    tr.flat = fd.flat;
    res.trace.push_back(tr);

    const bool last = (d == dmax);
    if (!fd.flat && !last) continue;

    res.khat = fd.rank_high;
    res.objective = tr.objective;
    res.gap = tr.gap;
    res.order_final = d;
    res.phi = phi;
    if (res.khat < 1) {
      res.message = "rank estimate is zero; nothing to extract";
      res.status = Algorithm1Result::Status::failed;
      return res;
    }
    try {
      GradedBasis basis(p, d);
      std::vector<Eigen::VectorXd> atoms =
          extract_atoms(moment_matrix(phi, d), basis, res.khat, opts.seed);
      std::vector<double> weights = recover_weights(atoms, phi, d);
      res.measure.atoms = std::move(atoms);
      res.measure.weights = std::move(weights);
      res.khat = static_cast<int>(res.measure.atoms.size());
      res.status = fd.flat ? Algorithm1Result::Status::flat : Algorithm1Result::Status::approximate;
      if (!fd.flat)
        res.message = "flatness not certified up to the maximum order; extraction is approximate";
      return res;
    } catch (const ExtractionError& e) {
      if (!last) continue;  // try a higher order
      res.message = e.what();
      res.status = Algorithm1Result::Status::failed;
      return res;
    }
  }
  if (res.message.empty()) res.message = "no order produced a usable solution";
  res.status = Algorithm1Result::Status::failed;
  return res;
}

}  // namespace momix
