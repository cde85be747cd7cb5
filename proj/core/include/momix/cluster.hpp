#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "momix/data.hpp"
#include "momix/extract.hpp"
#include "momix/rng.hpp"

namespace momix {

struct KmeansRun {
  Eigen::MatrixXd centers;  // K x n
  std::vector<int> assignment;
  int iterations = 0;  // assignment updates before the fixed point
  double objective = 0.0;  // within-cluster sum of squares
  bool converged = false;
};

// Lloyd iterations from the given centers.  An emptied cluster is reseeded
// at the point farthest from its center.  iterations counts how many
// assignment rounds changed something, so a perfect initialization costs 1.
KmeansRun kmeans(const Eigen::MatrixXd& X, const Eigen::MatrixXd& init_centers,
                 int max_iter = 300);

// K distinct rows of X, chosen uniformly.
Eigen::MatrixXd kmeans_random_init(const Eigen::MatrixXd& X, int K, Rng& rng);

struct GmmModel {
  Eigen::MatrixXd means;      // K x n
  Eigen::MatrixXd variances;  // K x n, diagonal covariances
  Eigen::VectorXd weights;    // K
};

struct EmRun {
  GmmModel model;
  std::vector<int> assignment;  // argmax responsibility
  int iterations = 0;
  double loglik = 0.0;
  bool converged = false;
};

// Diagonal-covariance EM.  Stops when the mean log-likelihood moves less
// than tol between rounds; variances are floored at 1e-6.
EmRun em_gmm(const Eigen::MatrixXd& X, const GmmModel& init, int max_iter = 100,
             double tol = 1e-5);

// Uniform random responsibilities normalized per point, followed by one
// M-step.
GmmModel em_random_init(const Eigen::MatrixXd& X, int K, Rng& rng);

// Fraction of points whose predicted cluster disagrees with the true label
// under the best relabeling (the exact assignment-problem optimum, equal to
// the minimum over label permutations).
double misclassification(const std::vector<int>& truth, const std::vector<int>& predicted, int K);

// Smallest-BIC component count among K = 1..Kmax diagonal GMM fits.
int bic_select(const Eigen::MatrixXd& X, int Kmax, std::uint64_t seed,
               std::vector<double>* bic_values = nullptr);

struct BenchmarkConfig {
  MixtureSpec mixture;  // template; means regenerated per instance
  int num_mixtures = 10;
  int samples = 1000;
  int order = 4;
  int max_order = 4;
  double epsilon = 1e-3;
  double tol = 1e-2;
  double mean_lo = 0.0, mean_hi = 1.0;    // parameter box for fitted means
  double sigma_lo = 0.02, sigma_hi = 1.0; // parameter box for fitted sigmas
  int repeats = 100;  // random initializations per mixture and algorithm
  int kmeans_max_iter = 300;
  int em_max_iter = 100;
  double em_tol = 1e-5;
  bool with_bic = false;
  std::uint64_t seed = 0;
  SolverOptions solver;
};

// One clustering run; rep is -1 for the moment-based initializations.
struct RunRecord {
  int mixture = 0;
  std::string algorithm;  // "kmeans" | "em"
  std::string init;       // "w2" | "tv" | "random"
  int rep = -1;
  int iterations = 0;
  double objective = 0.0;
  double misclass = 0.0;
};

struct MixtureResult {
  int index = 0;
  MixtureSpec truth;
  int khat_w2 = 0, khat_tv = 0;
  std::string fit_status_w2, fit_status_tv;
  double objective_w2 = 0.0, objective_tv = 0.0;
  double gap_w2 = 0.0, gap_tv = 0.0;
  double fit_seconds_w2 = 0.0, fit_seconds_tv = 0.0;
  int bic_k = 0;

  double km_iters_w2 = 0.0, km_iters_tv = 0.0;
  double km_iters_rand_mean = 0.0, km_iters_rand_std = 0.0;
  double em_iters_w2 = 0.0, em_iters_tv = 0.0;
  double em_iters_rand_mean = 0.0, em_iters_rand_std = 0.0;
  double km_mis_w2 = 0.0, km_mis_tv = 0.0, km_mis_rand_mean = 0.0;
  double em_mis_w2 = 0.0, em_mis_tv = 0.0, em_mis_rand_mean = 0.0;
};

struct BenchmarkReport {
  BenchmarkConfig config;
  std::vector<MixtureResult> mixtures;  // sorted by km_iters_w2
  std::vector<RunRecord> runs;
  // fraction of mixtures where the moment initialization needed fewer
  // iterations than the average random one
  double km_w2_wins = 0.0, km_tv_wins = 0.0;
  double em_w2_wins = 0.0, em_tv_wins = 0.0;
  // mean relative iteration reduction against the random average
  double km_w2_saving = 0.0, km_tv_saving = 0.0;
  double em_w2_saving = 0.0, em_tv_saving = 0.0;
};

// End to end: draw mixtures, fit both distances from the sample moments,
// use the extracted parameters to initialize k-means and EM, and compare
// against repeated random initializations on the same data.
BenchmarkReport run_benchmark(const BenchmarkConfig& config);

}  // namespace momix
