#include "momix/cluster.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace momix {

namespace {

constexpr double kVarFloor = 1e-6;

void assign_nearest(const Eigen::MatrixXd& X, const Eigen::MatrixXd& centers,
                    std::vector<int>& out) {
  const int N = static_cast<int>(X.rows());
  const int K = static_cast<int>(centers.rows());
  out.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    int best = 0;
    double bd = (X.row(i) - centers.row(0)).squaredNorm();
    for (int c = 1; c < K; ++c) {
      const double d = (X.row(i) - centers.row(c)).squaredNorm();
      if (d < bd) {
        bd = d;
        best = c;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
}

double inertia(const Eigen::MatrixXd& X, const Eigen::MatrixXd& centers,
               const std::vector<int>& assignment) {
  double s = 0.0;
  for (int i = 0; i < X.rows(); ++i)
    s += (X.row(i) - centers.row(assignment[static_cast<std::size_t>(i)])).squaredNorm();
  return s;
}

// log density of a diagonal Gaussian, by row of means/vars
double log_gauss(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& mean,
                 const Eigen::RowVectorXd& var) {
  double s = 0.0;
  for (int j = 0; j < x.size(); ++j) {
    const double d = x[j] - mean[j];
    s += -0.5 * (std::log(2.0 * M_PI * var[j]) + d * d / var[j]);
  }
  return s;
}

// mean log-likelihood and responsibilities for the current model
double e_step(const Eigen::MatrixXd& X, const GmmModel& g, Eigen::MatrixXd& resp) {
  const int N = static_cast<int>(X.rows());
  const int K = static_cast<int>(g.means.rows());
  resp.resize(N, K);
  double total = 0.0;
  for (int i = 0; i < N; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < K; ++c) {
      const double lw = g.weights[c] > 0.0 ? std::log(g.weights[c])
                                           : -std::numeric_limits<double>::infinity();
      resp(i, c) = lw + log_gauss(X.row(i), g.means.row(c), g.variances.row(c));
      mx = std::max(mx, resp(i, c));
    }
    double z = 0.0;
    for (int c = 0; c < K; ++c) z += std::exp(resp(i, c) - mx);
    const double lse = mx + std::log(z);
    for (int c = 0; c < K; ++c) resp(i, c) = std::exp(resp(i, c) - lse);
    total += lse;
  }
  return total / N;
}

void m_step(const Eigen::MatrixXd& X, const Eigen::MatrixXd& resp, GmmModel& g) {
  const int N = static_cast<int>(X.rows());
  const int K = static_cast<int>(resp.cols());
  const int n = static_cast<int>(X.cols());
  for (int c = 0; c < K; ++c) {
    const double nc = std::max(resp.col(c).sum(), 1e-12);
    g.weights[c] = nc / N;
    Eigen::RowVectorXd m = (resp.col(c).transpose() * X) / nc;
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(n);
    for (int i = 0; i < N; ++i) {
      const Eigen::RowVectorXd d = X.row(i) - m;
      v += resp(i, c) * d.cwiseProduct(d);
    }
    v /= nc;
    g.means.row(c) = m;
    g.variances.row(c) = v.cwiseMax(kVarFloor);
  }
}

// Exact min-cost assignment (O(K^3) potentials method) on a K x K cost
// matrix; returns the column matched to each row.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int K = static_cast<int>(cost.rows());
  std::vector<double> u(static_cast<std::size_t>(K) + 1, 0.0), v(static_cast<std::size_t>(K) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(K) + 1, 0), way(static_cast<std::size_t>(K) + 1, 0);
  for (int i = 1; i <= K; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(K) + 1,
                             std::numeric_limits<double>::infinity());
    std::vector<bool> used(static_cast<std::size_t>(K) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = std::numeric_limits<double>::infinity();
      int j1 = 0;
      for (int j = 1; j <= K; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= K; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(static_cast<std::size_t>(K), -1);
  for (int j = 1; j <= K; ++j)
    if (p[static_cast<std::size_t>(j)] > 0) match[static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) - 1] = j - 1;
  return match;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

KmeansRun kmeans(const Eigen::MatrixXd& X, const Eigen::MatrixXd& init_centers, int max_iter) {
  const int N = static_cast<int>(X.rows());
  const int K = static_cast<int>(init_centers.rows());
  if (K < 1 || K > N) throw InputError("kmeans: K must be in [1, N]");
  if (init_centers.cols() != X.cols()) throw InputError("kmeans: center dimension mismatch");

  KmeansRun run;
  run.centers = init_centers;
  std::vector<int> prev;
  for (int t = 1; t <= max_iter; ++t) {
    assign_nearest(X, run.centers, run.assignment);
    if (t > 1 && run.assignment == prev) {
      run.iterations = t - 1;
      run.converged = true;
      break;
    }
    prev = run.assignment;
    run.iterations = t;

    // means update; emptied clusters jump to the worst-served point
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(K, X.cols());
    std::vector<int> counts(static_cast<std::size_t>(K), 0);
    for (int i = 0; i < N; ++i) {
      sums.row(run.assignment[static_cast<std::size_t>(i)]) += X.row(i);
      ++counts[static_cast<std::size_t>(run.assignment[static_cast<std::size_t>(i)])];
    }
    std::vector<bool> taken(static_cast<std::size_t>(N), false);
    for (int c = 0; c < K; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        run.centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
      } else {
        int far = -1;
        double fd = -1.0;
        for (int i = 0; i < N; ++i) {
          if (taken[static_cast<std::size_t>(i)]) continue;
          const double d =
              (X.row(i) - run.centers.row(run.assignment[static_cast<std::size_t>(i)])).squaredNorm();
          if (d > fd) {
            fd = d;
            far = i;
          }
        }
        run.centers.row(c) = X.row(far);
        taken[static_cast<std::size_t>(far)] = true;
      }
    }
  }
  run.objective = inertia(X, run.centers, run.assignment);
  return run;
}

Eigen::MatrixXd kmeans_random_init(const Eigen::MatrixXd& X, int K, Rng& rng) {
  const int N = static_cast<int>(X.rows());
  if (K < 1 || K > N) throw InputError("kmeans_random_init: K must be in [1, N]");
  std::vector<int> idx(static_cast<std::size_t>(N));
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j < K; ++j) {
    const int pick = j + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(N - j)));
    std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(pick)]);
  }
  Eigen::MatrixXd centers(K, X.cols());
  for (int j = 0; j < K; ++j) centers.row(j) = X.row(idx[static_cast<std::size_t>(j)]);
  return centers;
}

EmRun em_gmm(const Eigen::MatrixXd& X, const GmmModel& init, int max_iter, double tol) {
  const int N = static_cast<int>(X.rows());
  const int K = static_cast<int>(init.means.rows());
  if (K < 1 || K > N) throw InputError("em_gmm: K must be in [1, N]");
  if (init.means.cols() != X.cols() || init.variances.rows() != K ||
      init.variances.cols() != X.cols() || init.weights.size() != K)
    throw InputError("em_gmm: init shape mismatch");

  EmRun run;
  run.model = init;
  run.model.variances = run.model.variances.cwiseMax(kVarFloor);

  if (K == 1) {  // closed form
    run.model.weights.setOnes();
    run.model.means.row(0) = X.colwise().mean();
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(X.cols());
    for (int i = 0; i < N; ++i) {
      const Eigen::RowVectorXd d = X.row(i) - run.model.means.row(0);
      v += d.cwiseProduct(d);
    }
    run.model.variances.row(0) = (v / N).cwiseMax(kVarFloor);
    Eigen::MatrixXd resp;
    run.loglik = e_step(X, run.model, resp);
    run.assignment.assign(static_cast<std::size_t>(N), 0);
    run.iterations = 1;
    run.converged = true;
    return run;
  }

  Eigen::MatrixXd resp;
  double prev = -std::numeric_limits<double>::infinity();
  for (int t = 1; t <= max_iter; ++t) {
    const double ll = e_step(X, run.model, resp);
    if (t > 1 && std::abs(ll - prev) <= tol * (1.0 + std::abs(prev))) {
      run.loglik = ll;
      run.iterations = t - 1;
      run.converged = true;
      break;
    }
    prev = ll;
    run.loglik = ll;
    run.iterations = t;
    m_step(X, resp, run.model);
  }
  run.assignment.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    int best = 0;
    for (int c = 1; c < K; ++c)
      if (resp(i, c) > resp(i, best)) best = c;
    run.assignment[static_cast<std::size_t>(i)] = best;
  }
  return run;
}

GmmModel em_random_init(const Eigen::MatrixXd& X, int K, Rng& rng) {
  const int N = static_cast<int>(X.rows());
  const int n = static_cast<int>(X.cols());
  if (K < 1 || K > N) throw InputError("em_random_init: K must be in [1, N]");
  Eigen::MatrixXd resp(N, K);
  for (int i = 0; i < N; ++i) {
    double s = 0.0;
    for (int c = 0; c < K; ++c) {
      resp(i, c) = rng.uniform() + 1e-12;
      s += resp(i, c);
    }
    resp.row(i) /= s;
  }
  GmmModel g;
  g.means.resize(K, n);
  g.variances.resize(K, n);
  g.weights.resize(K);
  m_step(X, resp, g);
  return g;
}

double misclassification(const std::vector<int>& truth, const std::vector<int>& predicted,
                         int K) {
  if (truth.empty() || truth.size() != predicted.size())
    throw InputError("misclassification: label vectors empty or mismatched");
  if (K < 1) throw InputError("misclassification: K must be positive");
  const int N = static_cast<int>(truth.size());
  Eigen::MatrixXd agree = Eigen::MatrixXd::Zero(K, K);
  for (int i = 0; i < N; ++i) {
    const int t = truth[static_cast<std::size_t>(i)];
    const int p = predicted[static_cast<std::size_t>(i)];
    if (t < 0 || t >= K || p < 0 || p >= K)
      throw InputError("misclassification: label outside [0, K)");
    agree(t, p) += 1.0;
  }
  const std::vector<int> match = min_cost_assignment(-agree);
  double correct = 0.0;
  for (int t = 0; t < K; ++t) correct += agree(t, match[static_cast<std::size_t>(t)]);
  return 1.0 - correct / N;
}

int bic_select(const Eigen::MatrixXd& X, int Kmax, std::uint64_t seed,
               std::vector<double>* bic_values) {
  const int N = static_cast<int>(X.rows());
  const int n = static_cast<int>(X.cols());
  if (Kmax < 1 || Kmax > N) throw InputError("bic_select: Kmax out of range");
  int best_k = 1;
  double best_bic = std::numeric_limits<double>::infinity();
  if (bic_values) bic_values->clear();
  for (int K = 1; K <= Kmax; ++K) {
    double ll = -std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < 3; ++restart) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(K * 16 + restart)), 0xb1);
      EmRun run = em_gmm(X, em_random_init(X, K, rng));
      ll = std::max(ll, run.loglik);
    }
    const double params = K * (2.0 * n) + (K - 1.0);
    const double bic = -2.0 * N * ll + params * std::log(static_cast<double>(N));
    if (bic_values) bic_values->push_back(bic);
    if (bic < best_bic) {
      best_bic = bic;
      best_k = K;
    }
  }
  return best_k;
}

namespace {

struct ExtractedInit {
  bool ok = false;
  Eigen::MatrixXd centers;    // K x n, original data scale
  Eigen::MatrixXd variances;  // K x n
  Eigen::VectorXd weights;
};

// Mixture parameters from the fitted measure, denormalized, padded or
// trimmed by weight to exactly K components.
ExtractedInit build_init(const Algorithm1Result& fit, const Normalization& norm, int K, int n,
                         const Eigen::MatrixXd& X, std::uint64_t seed) {
  ExtractedInit out;
  if (fit.status == Algorithm1Result::Status::failed || fit.measure.atoms.empty()) return out;

  std::vector<int> order(fit.measure.atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return fit.measure.weights[static_cast<std::size_t>(a)] >
           fit.measure.weights[static_cast<std::size_t>(b)];
  });

  out.centers.resize(K, n);
  out.variances.resize(K, n);
  out.weights.resize(K);
  Rng rng(mix_seed(seed, 0x9ad), 0x33);
  const Eigen::RowVectorXd global_var =
      (X.rowwise() - X.colwise().mean()).array().square().colwise().mean();
  const int have = static_cast<int>(order.size());
  for (int c = 0; c < K; ++c) {
    if (c < have) {
      const Eigen::VectorXd& theta = fit.measure.atoms[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])];
      // parameter layout: n means then n sigmas, in normalized coordinates
      for (int j = 0; j < n; ++j) {
        const double scale = norm.degenerate[static_cast<std::size_t>(j)] ? 1.0 : norm.scale[j];
        out.centers(c, j) = norm.degenerate[static_cast<std::size_t>(j)]
                                ? norm.offset[j]
                                : norm.offset[j] + scale * theta[j];
        const double sig = theta[n + j] * scale;
        out.variances(c, j) = std::max(sig * sig, kVarFloor);
      }
      out.weights[c] = std::max(fit.measure.weights[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])], 1e-6);
    } else {  // pad with a random data point and the global spread
      const int i = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(X.rows())));
      out.centers.row(c) = X.row(i);
      out.variances.row(c) = global_var.cwiseMax(kVarFloor);
      out.weights[c] = 1.0 / K;
    }
  }
  out.weights /= out.weights.sum();
  out.ok = true;
  return out;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
  if (config.num_mixtures < 1 || config.repeats < 1)
    throw InputError("run_benchmark: need at least one mixture and one repeat");
  BenchmarkReport rep;
  rep.config = config;

  const int n = config.mixture.dim;
  const int K = config.mixture.K;
  ParametricFamily family = ParametricFamily::gaussian_diagonal(n);
  std::vector<double> lo(static_cast<std::size_t>(2 * n)), hi(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    lo[static_cast<std::size_t>(j)] = config.mean_lo;
    hi[static_cast<std::size_t>(j)] = config.mean_hi;
    lo[static_cast<std::size_t>(n + j)] = config.sigma_lo;
    hi[static_cast<std::size_t>(n + j)] = config.sigma_hi;
  }
  const SemiAlgebraicSet box = box_set(lo, hi);

  int km_w2_w = 0, km_tv_w = 0, em_w2_w = 0, em_tv_w = 0;
  std::vector<double> km_w2_s, km_tv_s, em_w2_s, em_tv_s;

  for (int mi = 0; mi < config.num_mixtures; ++mi) {
    MixtureResult mr;
    mr.index = mi;
    MixtureSpec spec = config.mixture;
    spec.means.clear();
    spec.variances.clear();
    spec.weights.clear();
    Dataset data = sample_gmm(spec, config.samples, mix_seed(config.seed, static_cast<std::uint64_t>(mi)));
    mr.truth = spec;

    auto [norm_data, norm_map] = normalize(data, NormalizeMode::minmax);
    PseudoMomentSequence mu = empirical_moments(norm_data, 2 * config.max_order);

    Algorithm1Options a1;
    a1.tol = config.tol;
    a1.max_order = config.max_order;
    a1.seed = mix_seed(config.seed, 0xabcd0000ULL + static_cast<std::uint64_t>(mi));
    a1.solver = config.solver;

    Algorithm1Result fit_w2 = [&] {
      Regularizer reg = config.epsilon > 0.0
                            ? Regularizer{trace_regularizer(2 * n, config.order), config.epsilon}
                            : Regularizer::none(2 * n);
      RelaxationSpec rs(Distance::w2, config.order, config.epsilon, family, box, reg);
      auto t0 = std::chrono::steady_clock::now();
      Algorithm1Result r = run_algorithm1(mu, rs, a1);
      mr.fit_seconds_w2 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return r;
    }();
    Algorithm1Result fit_tv = [&] {
      Regularizer reg = config.epsilon > 0.0
                            ? Regularizer{trace_regularizer(2 * n, config.order), config.epsilon}
                            : Regularizer::none(2 * n);
      RelaxationSpec rs(Distance::tv, config.order, config.epsilon, family, box, reg);
      auto t0 = std::chrono::steady_clock::now();
      Algorithm1Result r = run_algorithm1(mu, rs, a1);
      mr.fit_seconds_tv = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return r;
    }();

    mr.khat_w2 = fit_w2.khat;
    mr.khat_tv = fit_tv.khat;
    mr.fit_status_w2 = algorithm1_status_name(fit_w2.status);
    mr.fit_status_tv = algorithm1_status_name(fit_tv.status);
    mr.objective_w2 = fit_w2.objective;
    mr.objective_tv = fit_tv.objective;
    mr.gap_w2 = fit_w2.gap;
    mr.gap_tv = fit_tv.gap;

    const ExtractedInit init_w2 =
        build_init(fit_w2, norm_map, K, n, data.points, mix_seed(config.seed, 7000 + static_cast<std::uint64_t>(mi)));
    const ExtractedInit init_tv =
        build_init(fit_tv, norm_map, K, n, data.points, mix_seed(config.seed, 8000 + static_cast<std::uint64_t>(mi)));

    auto run_extracted = [&](const ExtractedInit& init, const std::string& tag, double& km_it,
                             double& km_mis, double& em_it, double& em_mis) {
      if (!init.ok) {
        km_it = em_it = -1.0;  // marks a failed fit
        return;
      }
      KmeansRun km = kmeans(data.points, init.centers, config.kmeans_max_iter);
      km_it = km.iterations;
      km_mis = misclassification(data.labels, km.assignment, K);
      rep.runs.push_back({mi, "kmeans", tag, -1, km.iterations, km.objective, km_mis});
      GmmModel gm{init.centers, init.variances, init.weights};
      EmRun em = em_gmm(data.points, gm, config.em_max_iter, config.em_tol);
      em_it = em.iterations;
      em_mis = misclassification(data.labels, em.assignment, K);
      rep.runs.push_back({mi, "em", tag, -1, em.iterations, em.loglik, em_mis});
    };
    run_extracted(init_w2, "w2", mr.km_iters_w2, mr.km_mis_w2, mr.em_iters_w2, mr.em_mis_w2);
    run_extracted(init_tv, "tv", mr.km_iters_tv, mr.km_mis_tv, mr.em_iters_tv, mr.em_mis_tv);

    std::vector<double> km_iters, em_iters, km_mis, em_mis;
    for (int r = 0; r < config.repeats; ++r) {
      Rng rng(mix_seed(config.seed, 0x52000000ULL + static_cast<std::uint64_t>(mi) * 100000ULL + static_cast<std::uint64_t>(r)), 0x21);
      KmeansRun km = kmeans(data.points, kmeans_random_init(data.points, K, rng),
                            config.kmeans_max_iter);
      const double kmm = misclassification(data.labels, km.assignment, K);
      km_iters.push_back(km.iterations);
      km_mis.push_back(kmm);
      rep.runs.push_back({mi, "kmeans", "random", r, km.iterations, km.objective, kmm});

      EmRun em = em_gmm(data.points, em_random_init(data.points, K, rng), config.em_max_iter,
                        config.em_tol);
      const double emm = misclassification(data.labels, em.assignment, K);
      em_iters.push_back(em.iterations);
      em_mis.push_back(emm);
      rep.runs.push_back({mi, "em", "random", r, em.iterations, em.loglik, emm});
    }
    mr.km_iters_rand_mean = mean_of(km_iters);
    mr.km_iters_rand_std = std_of(km_iters);
    mr.em_iters_rand_mean = mean_of(em_iters);
    mr.em_iters_rand_std = std_of(em_iters);
    mr.km_mis_rand_mean = mean_of(km_mis);
    mr.em_mis_rand_mean = mean_of(em_mis);

    if (config.with_bic)
      mr.bic_k = bic_select(data.points, std::max(K + 3, 8),
                            mix_seed(config.seed, 0xb1c00000ULL + static_cast<std::uint64_t>(mi)));

    auto tally = [](double got, double rand_mean, int& wins, std::vector<double>& savings) {
      if (got < 0.0) return;  // failed fit counts as a loss
      if (got < rand_mean) ++wins;
      if (rand_mean > 0.0) savings.push_back((rand_mean - got) / rand_mean);
    };
    tally(mr.km_iters_w2, mr.km_iters_rand_mean, km_w2_w, km_w2_s);
    tally(mr.km_iters_tv, mr.km_iters_rand_mean, km_tv_w, km_tv_s);
    tally(mr.em_iters_w2, mr.em_iters_rand_mean, em_w2_w, em_w2_s);
    tally(mr.em_iters_tv, mr.em_iters_rand_mean, em_tv_w, em_tv_s);

    rep.mixtures.push_back(std::move(mr));
  }

  const double nm = config.num_mixtures;
  rep.km_w2_wins = km_w2_w / nm;
  rep.km_tv_wins = km_tv_w / nm;
  rep.em_w2_wins = em_w2_w / nm;
  rep.em_tv_wins = em_tv_w / nm;
  rep.km_w2_saving = mean_of(km_w2_s);
  rep.km_tv_saving = mean_of(km_tv_s);
  rep.em_w2_saving = mean_of(em_w2_s);
  rep.em_tv_saving = mean_of(em_tv_s);

  std::sort(rep.mixtures.begin(), rep.mixtures.end(),
            [](const MixtureResult& a, const MixtureResult& b) {
              if (a.km_iters_w2 != b.km_iters_w2) return a.km_iters_w2 < b.km_iters_w2;
              return a.index < b.index;
            });
  return rep;
}

}  // namespace momix
