#include "momix/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace momix {

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_limit: return "numerical_limit";
  }
  return "unknown";
}

namespace {

struct Triplet {
  int r, c;
  double v;
};

// One PSD block with its variable part regrouped per variable.
struct SBlock {
  int size = 0;
  Eigen::MatrixXd F0;
  std::vector<int> vars;                       // global variable ids
  std::vector<std::vector<Triplet>> triplets;  // per local variable, r <= c

  int svec_size() const { return size * (size + 1) / 2; }

  Eigen::MatrixXd eval(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd M = F0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const double xi = x[vars[i]];
      for (const auto& t : triplets[i]) {
        M(t.r, t.c) += t.v * xi;
        if (t.r != t.c) M(t.c, t.r) += t.v * xi;
      }
    }
    return M;
  }

  // out[vars[i]] += <F_i, Z>
  void adjoint_accum(const Eigen::MatrixXd& Z, Eigen::VectorXd& out) const {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      double acc = 0.0;
      for (const auto& t : triplets[i]) acc += t.v * (t.r == t.c ? Z(t.r, t.c) : 2.0 * Z(t.r, t.c));
      out[vars[i]] += acc;
    }
  }
};

void svec_into(const Eigen::MatrixXd& M, Eigen::Ref<Eigen::VectorXd> out) {
  static const double sqrt2 = std::sqrt(2.0);
  const int s = static_cast<int>(M.rows());
  int k = 0;
  for (int j = 0; j < s; ++j) {
    out[k++] = M(j, j);
    for (int i = j + 1; i < s; ++i) out[k++] = sqrt2 * M(i, j);
  }
}

// Saddle system  H dx - A' dy = g,  A dx = r  via Cholesky of H and of the
// Schur complement A H^{-1} A'.
class KktSolver {
 public:
  bool factor(const Eigen::MatrixXd& H, const Eigen::MatrixXd& A) {
    h_ = H;  // unridged, for refinement residuals
    Eigen::MatrixXd Hr = H;
    const int m = static_cast<int>(H.rows());
    const int k = static_cast<int>(A.rows());
    double ridge = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      hfact_.compute(Hr);
      if (hfact_.info() == Eigen::Success) break;
      ridge = ridge == 0.0 ? 1e-14 * (1.0 + Hr.trace() / m) : ridge * 100.0;
      Hr.diagonal().array() += ridge;
      if (attempt == 11) return false;
    }
    if (k > 0) {
      hinv_at_ = hfact_.solve(A.transpose());
      Eigen::MatrixXd schur = A * hinv_at_;
      ridge = 0.0;
      for (int attempt = 0; attempt < 12; ++attempt) {
        sfact_.compute(schur);
        if (sfact_.info() == Eigen::Success) break;
        ridge = ridge == 0.0 ? 1e-14 * (1.0 + schur.trace() / k) : ridge * 100.0;
        schur.diagonal().array() += ridge;
        if (attempt == 11) return false;
      }
    }
    a_ = &A;
    return true;
  }

  // H dx - A' dy = g, A dx = r, with refinement: the Schur complement loses
  // digits once the scaling degenerates near the boundary, and those errors
  // land directly in the dual residual
  void solve(const Eigen::VectorXd& g, const Eigen::VectorXd& r, Eigen::VectorXd& dx,
             Eigen::VectorXd& dy) const {
    solve_once(g, r, dx, dy);
    Eigen::VectorXd e1 = g - h_ * dx;
    Eigen::VectorXd e2;
    if (a_->rows() > 0) {
      e1.noalias() += a_->transpose() * dy;
      e2 = r - (*a_) * dx;
    } else {
      e2.resize(0);
    }
    Eigen::VectorXd cx, cy;
    solve_once(e1, e2, cx, cy);
    dx += cx;
    if (a_->rows() > 0) dy += cy;
  }

 private:
  void solve_once(const Eigen::VectorXd& g, const Eigen::VectorXd& r, Eigen::VectorXd& dx,
                  Eigen::VectorXd& dy) const {
    const Eigen::VectorXd hg = hfact_.solve(g);
    if (a_->rows() == 0) {
      dy.resize(0);
      dx = hg;
      return;
    }
    dy = sfact_.solve(r - (*a_) * hg);
    dx = hg + hinv_at_ * dy;
  }

  Eigen::LLT<Eigen::MatrixXd> hfact_;
  Eigen::LLT<Eigen::MatrixXd> sfact_;
  Eigen::MatrixXd h_;
  Eigen::MatrixXd hinv_at_;
  const Eigen::MatrixXd* a_ = nullptr;
};

// largest step with M + alpha dM staying PSD, via L^{-1} dM L^{-T}
double max_step(const Eigen::LLT<Eigen::MatrixXd>& fact, const Eigen::MatrixXd& dM) {
  const Eigen::MatrixXd L = fact.matrixL();
  const Eigen::MatrixXd W1 = L.triangularView<Eigen::Lower>().solve(dM);
  const Eigen::MatrixXd W1t = W1.transpose();
  const Eigen::MatrixXd W = L.triangularView<Eigen::Lower>().solve(W1t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct BlockWork {
  Eigen::MatrixXd S, Z;          // iterates
  Eigen::MatrixXd R, Rinv;       // Nesterov-Todd scaling factor
  Eigen::VectorXd lambda;        // scaled spectrum
  Eigen::LLT<Eigen::MatrixXd> cholS, cholZ;
  Eigen::MatrixXd M;             // svec'd scaled basis, svec_size x nloc
  Eigen::MatrixXd rc;            // F(x) - S
  Eigen::MatrixXd E;             // scaled residual + complementarity target
  Eigen::MatrixXd dS, dZ;
  Eigen::MatrixXd dSaff, dZaff;
  Eigen::MatrixXd tmp1, tmp2;
};

}  // namespace

ConicSolution solve(const SdpProblem& problem, const SolverOptions& opts) {
  const int m = problem.num_vars;
  if (m <= 0) throw std::invalid_argument("solve: problem has no variables");
  if (problem.blocks.empty()) throw std::invalid_argument("solve: problem has no PSD blocks");
  if (problem.objective.size() != m) throw std::invalid_argument("solve: objective size mismatch");

  // regroup block entries per variable
  std::vector<SBlock> blocks;
  blocks.reserve(problem.blocks.size());
  for (const auto& pb : problem.blocks) {
    SBlock sb;
    sb.size = pb.size;
    sb.F0 = pb.offset;
    std::vector<int> local_of(m, -1);
    for (const auto& e : pb.entries) {
      if (local_of[e.var] < 0) {
        local_of[e.var] = static_cast<int>(sb.vars.size());
        sb.vars.push_back(e.var);
        sb.triplets.emplace_back();
      }
      sb.triplets[local_of[e.var]].push_back({e.row, e.col, e.coef});
    }
    blocks.push_back(std::move(sb));
  }

  const int k = static_cast<int>(problem.equalities.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  for (int r = 0; r < k; ++r) {
    for (const auto& t : problem.equalities[r].terms) A(r, t.var) += t.coef;
    b[r] = problem.equalities[r].rhs;
  }
  const Eigen::VectorXd& c = problem.objective;

  double rho = 0.0;
  for (const auto& sb : blocks) rho += sb.size;

  const int nb = static_cast<int>(blocks.size());
  std::vector<BlockWork> work(nb);
  for (int bidx = 0; bidx < nb; ++bidx) {
    const int s = blocks[bidx].size;
    work[bidx].M.resize(blocks[bidx].svec_size(), static_cast<int>(blocks[bidx].vars.size()));
    work[bidx].S.resize(s, s);
    work[bidx].Z.resize(s, s);
  }

  // scaled basis and Gram matrix at the current scaling point; with
  // scale = I this doubles as the least-squares initialization system
  Eigen::MatrixXd H(m, m);
  auto assemble = [&](bool identity_scale) {
    H.setZero();
    for (int bidx = 0; bidx < nb; ++bidx) {
      const SBlock& sb = blocks[bidx];
      BlockWork& w = work[bidx];
      const int nloc = static_cast<int>(sb.vars.size());
      const int s = sb.size;
      Eigen::MatrixXd T(s, s);
      for (int i = 0; i < nloc; ++i) {
        if (identity_scale) {
          T.setZero();
          for (const auto& t : sb.triplets[i]) {
            T(t.r, t.c) += t.v;
            if (t.r != t.c) T(t.c, t.r) += t.v;
          }
        } else {
          // T = Rinv F_i Rinv'
          T.setZero();
          for (const auto& t : sb.triplets[i]) {
            T.noalias() += t.v * (w.Rinv.col(t.r) * w.Rinv.col(t.c).transpose());
            if (t.r != t.c) T.noalias() += t.v * (w.Rinv.col(t.c) * w.Rinv.col(t.r).transpose());
          }
        }
        svec_into(T, w.M.col(i));
      }
      Eigen::MatrixXd Hloc = w.M.transpose() * w.M;
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j < nloc; ++j) H(sb.vars[i], sb.vars[j]) += Hloc(i, j);
    }
  };

  KktSolver kkt;
  ConicSolution sol;
  sol.groups = problem.groups;
  // best iterate seen so far; late iterations can spoil the dual residual when
  // the primal slab collapses, so failures hand back the best, not the last
  ConicSolution best;
  double best_merit = std::numeric_limits<double>::infinity();
  int best_iter = -1;
  auto fail = [&](SolveStatus status) {
    if (status != SolveStatus::optimal && best_iter >= 0) sol = best;
    sol.status = status;
    return sol;
  };

  // initialization: scaled least squares, then shift into the cone
  assemble(true);
  // Gram of the constraint matrices, kept for projecting rounding drift out of
  // Z: the dual residual lives in span{F_i}, so G xi = rd recovers exactly the
  // correction that cancels it
  Eigen::LLT<Eigen::MatrixXd> gram0(H);
  const bool can_refit = gram0.info() == Eigen::Success;
  if (!kkt.factor(H, A)) return fail(SolveStatus::numerical_limit);
  Eigen::VectorXd x(m), y(k), dx(m), dy(k);
  {
    Eigen::VectorXd g0 = Eigen::VectorXd::Zero(m);
    for (const auto& sb : blocks) sb.adjoint_accum(sb.F0, g0);
    kkt.solve(-g0, b, x, y);
    for (int bidx = 0; bidx < nb; ++bidx) {
      work[bidx].S = blocks[bidx].eval(x);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(work[bidx].S, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues().minCoeff();
      if (lmin <= 1e-12)
        work[bidx].S += (1.0 - lmin) * Eigen::MatrixXd::Identity(blocks[bidx].size, blocks[bidx].size);
    }
    Eigen::VectorXd u(m), w0(k);
    kkt.solve(c, Eigen::VectorXd::Zero(k), u, w0);
    y = w0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      const SBlock& sb = blocks[bidx];
      Eigen::MatrixXd Zc = Eigen::MatrixXd::Zero(sb.size, sb.size);
      for (std::size_t i = 0; i < sb.vars.size(); ++i) {
        const double ui = u[sb.vars[i]];
        for (const auto& t : sb.triplets[i]) {
          Zc(t.r, t.c) += t.v * ui;
          if (t.r != t.c) Zc(t.c, t.r) += t.v * ui;
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Zc, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues().minCoeff();
      if (lmin <= 1e-12) Zc += (1.0 - lmin) * Eigen::MatrixXd::Identity(sb.size, sb.size);
      work[bidx].Z = Zc;
    }
  }

  const double bnorm = 1.0 + b.norm();
  const double cnorm = 1.0 + c.norm();
  double f0norm = 1.0;
  for (const auto& sb : blocks) f0norm += sb.F0.squaredNorm();
  f0norm = std::sqrt(f0norm);

  Eigen::VectorXd rd(m), g(m);
  int stall = 0;
  double tau = 0.9;  // fraction to the cone boundary, adapted to recent step quality

  for (int iter = 0; iter <= opts.max_iters; ++iter) {
    // residuals
    double rc_norm = 0.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      work[bidx].rc = blocks[bidx].eval(x) - work[bidx].S;
      rc_norm += work[bidx].rc.squaredNorm();
    }
    rc_norm = std::sqrt(rc_norm);
    rd = c;
    if (k > 0) rd.noalias() -= A.transpose() * y;
    for (int bidx = 0; bidx < nb; ++bidx) {
      Eigen::VectorXd adj = Eigen::VectorXd::Zero(m);
      blocks[bidx].adjoint_accum(work[bidx].Z, adj);
      rd -= adj;
    }
    Eigen::VectorXd rp = A * x - b;

    double gap = 0.0, f0z = 0.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      gap += work[bidx].S.cwiseProduct(work[bidx].Z).sum();
      f0z += blocks[bidx].F0.cwiseProduct(work[bidx].Z).sum();
    }
    const double pobj = c.dot(x) + problem.objective_const;
    const double dobj = (k > 0 ? b.dot(y) : 0.0) - f0z + problem.objective_const;

    const double pres = std::max(rp.norm() / bnorm, rc_norm / f0norm);
    double dres = rd.norm() / cnorm;
    double rep_gap = gap, rep_dobj = dobj;
    double relgap = gap / std::max(1.0, std::abs(pobj));
    double objgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    // dual-side merit, the quantity the repair below must not regress
    auto dmerit = [&](double dr, double rg, double og) {
      return std::max(dr / opts.feas_tol, std::min(rg, og) / opts.gap_tol);
    };
    double merit_d = dmerit(dres, relgap, objgap);

    sol.dual_blocks.clear();
    for (int bidx = 0; bidx < nb; ++bidx) sol.dual_blocks.push_back(work[bidx].Z);

    // reporting-only repair of the dual block: drift in Z lives in span{F_i},
    // so alternating between the affine dual-feasibility manifold (Gram solve)
    // and the cone (eigenvalue clip) walks it out. The path iterate itself is
    // left untouched, and the repair is kept only when it improves residual
    // and gap together: the clip can trade a better residual for a worse gap.
    if (can_refit && dres > 0.01 * opts.feas_tol && dres < 1e2) {
      std::vector<Eigen::MatrixXd> fixed(nb);
      for (int bidx = 0; bidx < nb; ++bidx) fixed[bidx] = work[bidx].Z;
      Eigen::VectorXd rdk = rd;
      for (int round = 0; round < 6; ++round) {
        const Eigen::VectorXd xi = gram0.solve(rdk);
        for (int bidx = 0; bidx < nb; ++bidx) {
          const SBlock& sb = blocks[bidx];
          for (std::size_t i = 0; i < sb.vars.size(); ++i) {
            const double v = xi[sb.vars[i]];
            for (const auto& t : sb.triplets[i]) {
              fixed[bidx](t.r, t.c) += t.v * v;
              if (t.r != t.c) fixed[bidx](t.c, t.r) += t.v * v;
            }
          }
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fixed[bidx]);
          if (es.eigenvalues().minCoeff() < 0.0)
            fixed[bidx] = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                          es.eigenvectors().transpose();
        }
        rdk = c;
        if (k > 0) rdk.noalias() -= A.transpose() * y;
        double gap2 = 0.0, f0z2 = 0.0;
        for (int bidx = 0; bidx < nb; ++bidx) {
          Eigen::VectorXd adj = Eigen::VectorXd::Zero(m);
          blocks[bidx].adjoint_accum(fixed[bidx], adj);
          rdk -= adj;
          gap2 += work[bidx].S.cwiseProduct(fixed[bidx]).sum();
          f0z2 += blocks[bidx].F0.cwiseProduct(fixed[bidx]).sum();
        }
        const double dres2 = rdk.norm() / cnorm;
        const double dobj2 = (k > 0 ? b.dot(y) : 0.0) - f0z2 + problem.objective_const;
        const double relgap2 = gap2 / std::max(1.0, std::abs(pobj));
        const double objgap2 = std::abs(pobj - dobj2) / (1.0 + std::abs(pobj));
        const double md2 = dmerit(dres2, relgap2, objgap2);
        if (md2 < merit_d) {
          dres = dres2;
          rep_gap = gap2;
          rep_dobj = dobj2;
          relgap = relgap2;
          objgap = objgap2;
          merit_d = md2;
          for (int bidx = 0; bidx < nb; ++bidx) sol.dual_blocks[bidx] = fixed[bidx];
        } else if (round > 0) {
          break;  // projections stopped paying
        }
        if (dres2 <= 0.01 * opts.feas_tol) break;
      }
    }

    if (opts.verbose)
      std::cerr << "ipm " << iter << " pobj " << pobj << " dobj " << rep_dobj << " pres " << pres
                << " dres " << dres << " relgap " << relgap << "\n";

    sol.primal = x;
    sol.dual_equalities = y;
    sol.primal_objective = pobj;
    sol.dual_objective = rep_dobj;
    sol.primal_residual = pres;
    sol.dual_residual = dres;
    sol.gap = rep_gap;
    sol.iterations = iter;

    const double merit = std::max(pres / opts.feas_tol, merit_d);
    if (merit < best_merit) {
      best_merit = merit;
      best = sol;
      best_iter = iter;
    }

    if (pres <= opts.feas_tol && dres <= opts.feas_tol &&
        (relgap <= opts.gap_tol || objgap <= opts.gap_tol))
      return fail(SolveStatus::optimal);
    if (iter - best_iter >= 12) return fail(SolveStatus::numerical_limit);

    // certificate of primal infeasibility: dual ray with positive value
    {
      double dual_norm = (k > 0 ? y.norm() : 0.0);
      for (int bidx = 0; bidx < nb; ++bidx) dual_norm = std::max(dual_norm, work[bidx].Z.norm());
      if (dual_norm > 1e6) {
        Eigen::VectorXd ray = Eigen::VectorXd::Zero(m);
        if (k > 0) ray.noalias() += A.transpose() * y;
        for (int bidx = 0; bidx < nb; ++bidx) blocks[bidx].adjoint_accum(work[bidx].Z, ray);
        const double value = (k > 0 ? b.dot(y) : 0.0) - f0z;
        if (ray.norm() / dual_norm <= 1e-9 && value / dual_norm >= 1e-9)
          return fail(SolveStatus::infeasible);
      }
      if (pobj < -1e12 && pres <= opts.feas_tol) return fail(SolveStatus::unbounded);
    }
    if (iter == opts.max_iters) return fail(SolveStatus::numerical_limit);

    // Nesterov-Todd scaling per block
    bool scale_ok = true;
    for (int bidx = 0; bidx < nb && scale_ok; ++bidx) {
      BlockWork& w = work[bidx];
      const int s = blocks[bidx].size;
      w.cholS.compute(w.S);
      w.cholZ.compute(w.Z);
      if (w.cholS.info() != Eigen::Success || w.cholZ.info() != Eigen::Success) {
        scale_ok = false;
        break;
      }
      const Eigen::MatrixXd Ls = w.cholS.matrixL();
      const Eigen::MatrixXd Lz = w.cholZ.matrixL();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Lz.transpose() * Ls,
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
      w.lambda = svd.singularValues();
      const Eigen::VectorXd isqrt = w.lambda.array().sqrt().inverse().matrix();
      w.R.noalias() = Ls * svd.matrixV() * isqrt.asDiagonal();
      // Rinv = diag(sqrt(lambda)) V' Ls^{-1}
      Eigen::MatrixXd Lsinv = Eigen::MatrixXd::Identity(s, s);
      Ls.triangularView<Eigen::Lower>().solveInPlace(Lsinv);
      w.Rinv.noalias() = w.lambda.array().sqrt().matrix().asDiagonal() * svd.matrixV().transpose() * Lsinv;
    }
    if (!scale_ok) return fail(SolveStatus::numerical_limit);

    assemble(false);
    if (!kkt.factor(H, A)) return fail(SolveStatus::numerical_limit);

    const double mu = gap / rho;

    auto newton = [&](bool corrector, double sigma_mu) {
      g.setZero();
      for (int bidx = 0; bidx < nb; ++bidx) {
        BlockWork& w = work[bidx];
        const int s = blocks[bidx].size;
        // E = -Rinv rc Rinv' + V with V the inverse scaled complementarity target
        w.tmp1.noalias() = w.Rinv * w.rc;
        w.E.noalias() = -(w.tmp1 * w.Rinv.transpose());
        if (!corrector) {
          for (int i = 0; i < s; ++i) w.E(i, i) -= w.lambda[i];
        } else {
          w.tmp1.noalias() = w.Rinv * w.dSaff;
          Eigen::MatrixXd dSt = w.tmp1 * w.Rinv.transpose();
          w.tmp1.noalias() = w.R.transpose() * w.dZaff;
          Eigen::MatrixXd dZt = w.tmp1 * w.R;
          w.tmp2.noalias() = dSt * dZt;
          for (int jcol = 0; jcol < s; ++jcol) {
            for (int irow = 0; irow < s; ++irow) {
              const double corr = 0.5 * (w.tmp2(irow, jcol) + w.tmp2(jcol, irow));
              double D = -corr;
              if (irow == jcol) D += sigma_mu - w.lambda[irow] * w.lambda[irow];
              w.E(irow, jcol) += 2.0 * D / (w.lambda[irow] + w.lambda[jcol]);
            }
          }
        }
        Eigen::VectorXd evec(blocks[bidx].svec_size());
        svec_into(w.E, evec);
        const Eigen::VectorXd gloc = w.M.transpose() * evec;
        for (std::size_t i = 0; i < blocks[bidx].vars.size(); ++i) g[blocks[bidx].vars[i]] += gloc[i];
      }
      kkt.solve(g - rd, -rp, dx, dy);
      for (int bidx = 0; bidx < nb; ++bidx) {
        BlockWork& w = work[bidx];
        const SBlock& sb = blocks[bidx];
        Eigen::MatrixXd Fdx = Eigen::MatrixXd::Zero(sb.size, sb.size);
        for (std::size_t i = 0; i < sb.vars.size(); ++i) {
          const double v = dx[sb.vars[i]];
          for (const auto& t : sb.triplets[i]) {
            Fdx(t.r, t.c) += t.v * v;
            if (t.r != t.c) Fdx(t.c, t.r) += t.v * v;
          }
        }
        w.dS = Fdx + w.rc;
        // dZ = Rinv' (E - Rinv Fdx Rinv') Rinv
        w.tmp1.noalias() = w.Rinv * Fdx;
        w.tmp2.noalias() = w.tmp1 * w.Rinv.transpose();
        w.tmp2 = w.E - w.tmp2;
        w.tmp1.noalias() = w.Rinv.transpose() * w.tmp2;
        w.dZ.noalias() = w.tmp1 * w.Rinv;
      }
    };

    // predictor
    newton(false, 0.0);
    // primal and dual step lengths are decoupled; the residual identities
    // scale rp, rc by (1 - alpha_p) and rd by (1 - alpha_d) independently
    double ap_max = std::numeric_limits<double>::infinity();
    double ad_max = std::numeric_limits<double>::infinity();
    for (int bidx = 0; bidx < nb; ++bidx) {
      ap_max = std::min(ap_max, max_step(work[bidx].cholS, work[bidx].dS));
      ad_max = std::min(ad_max, max_step(work[bidx].cholZ, work[bidx].dZ));
    }
    const double ap_aff = std::min(1.0, ap_max);
    const double ad_aff = std::min(1.0, ad_max);
    double gap_aff = 0.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      gap_aff += (work[bidx].S + ap_aff * work[bidx].dS)
                     .cwiseProduct(work[bidx].Z + ad_aff * work[bidx].dZ)
                     .sum();
    }
    const double mu_aff = std::max(gap_aff, 0.0) / rho;
    double sigma = mu > 0.0 ? std::pow(mu_aff / mu, 3.0) : 0.0;
    sigma = std::min(std::max(sigma, 1e-8), 1.0 - 1e-8);

    for (int bidx = 0; bidx < nb; ++bidx) {
      work[bidx].dSaff = work[bidx].dS;
      work[bidx].dZaff = work[bidx].dZ;
    }

    // corrector
    newton(true, sigma * mu);
    ap_max = std::numeric_limits<double>::infinity();
    ad_max = std::numeric_limits<double>::infinity();
    for (int bidx = 0; bidx < nb; ++bidx) {
      ap_max = std::min(ap_max, max_step(work[bidx].cholS, work[bidx].dS));
      ad_max = std::min(ad_max, max_step(work[bidx].cholZ, work[bidx].dZ));
    }
    const double alpha_p = std::min(1.0, tau * ap_max);
    const double alpha_d = std::min(1.0, tau * ad_max);
    // push closer to the boundary as the path nears complementarity; a fixed
    // aggressive fraction loses too much centrality early, a step-quality
    // rule spirals into ever smaller steps once the endgame turns cramped
    tau = std::min(0.99, std::max(0.9, 1.0 - mu));
    if (opts.verbose)
      std::cerr << "   aff " << ap_aff << "/" << ad_aff << " sigma " << sigma << " alpha "
                << alpha_p << "/" << alpha_d << " mu " << mu << "\n";
    if (std::max(alpha_p, alpha_d) < 1e-10) {
      if (++stall >= 3) return fail(SolveStatus::numerical_limit);
    } else {
      stall = 0;
    }

    x += alpha_p * dx;
    if (k > 0) y += alpha_d * dy;
    for (int bidx = 0; bidx < nb; ++bidx) {
      work[bidx].S += alpha_p * work[bidx].dS;
      work[bidx].Z += alpha_d * work[bidx].dZ;
    }
  }
  return fail(SolveStatus::numerical_limit);
}

PseudoMomentSequence extract_moment_vector(const ConicSolution& solution, const std::string& tag) {
  const VariableGroup* group = nullptr;
  for (const auto& g : solution.groups)
    if (g.tag == tag) group = &g;
  if (!group) throw std::out_of_range("extract_moment_vector: no variable group " + tag);
  Eigen::VectorXd values(group->basis.size());
  for (int i = 0; i < group->basis.size(); ++i)
    values[i] = group->var_of[i] >= 0 ? solution.primal[group->var_of[i]] : group->fixed_value[i];
  return PseudoMomentSequence(group->basis, std::move(values));
}

}  // namespace momix
