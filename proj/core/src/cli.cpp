#include "momix/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>

#include "momix/cluster.hpp"
#include "momix/data.hpp"
#include "momix/extract.hpp"

namespace momix {

namespace {

using nlohmann::json;

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

// best-effort machine-readable error record next to the exit code
void write_error(const std::string& path, const std::string& what, int code) {
  if (path.empty()) return;
  json j{{"version", kVersion}, {"error", what}, {"exit_code", code}};
  std::ofstream out(path);
  if (out) out << j.dump(2) << '\n';
}

template <typename F>
int guarded(const std::string& out_path, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    write_error(out_path, e.what(), 2);
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const SolveFailure& e) {
    write_error(out_path, e.what(), 1);
    std::fprintf(stderr, "solve failure: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    write_error(out_path, e.what(), 2);
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    write_error(out_path, e.what(), 1);
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

NormalizeMode resolve_mode(FamilyKind kind, const std::string& requested) {
  if (requested == "auto") {
    switch (kind) {
      case FamilyKind::gaussian_diagonal: return NormalizeMode::minmax;
      case FamilyKind::poisson: return NormalizeMode::none;
      case FamilyKind::exponential: return NormalizeMode::scale_only;
    }
  }
  return normalize_mode_from_name(requested);
}

struct BoxOptions {
  double mean_lo = 0.0, mean_hi = 1.0;
  double sigma_lo = 0.05, sigma_hi = 1.0;
  // rate-style families; negative means derive from the normalized data
  double param_lo = -1.0, param_hi = -1.0;
};

SemiAlgebraicSet family_box(FamilyKind kind, int data_dim, const BoxOptions& b,
                            const Eigen::MatrixXd& normalized_points) {
  std::vector<double> lo, hi;
  if (kind == FamilyKind::gaussian_diagonal) {
    for (int j = 0; j < data_dim; ++j) {
      lo.push_back(b.mean_lo);
      hi.push_back(b.mean_hi);
    }
    for (int j = 0; j < data_dim; ++j) {
      lo.push_back(b.sigma_lo);
      hi.push_back(b.sigma_hi);
    }
  } else {
    double plo = b.param_lo, phi_ = b.param_hi;
    if (plo < 0.0) plo = 0.0;
    if (phi_ <= 0.0) {
      phi_ = 1.2 * std::max(1e-3, normalized_points.maxCoeff());
    }
    for (int j = 0; j < data_dim; ++j) {
      lo.push_back(plo);
      hi.push_back(phi_);
    }
  }
  return box_set(lo, hi);
}

// fitted parameters mapped back to the data scale; means move affinely,
// spread parameters pick up the scale factor
Eigen::VectorXd denormalize_atom(FamilyKind kind, const Normalization& norm,
                                 const Eigen::VectorXd& theta, int data_dim) {
  Eigen::VectorXd out(theta.size());
  auto scale_of = [&](int j) {
    return norm.degenerate[static_cast<std::size_t>(j)] ? 1.0 : norm.scale[j];
  };
  if (kind == FamilyKind::gaussian_diagonal) {
    for (int j = 0; j < data_dim; ++j) {
      out[j] = norm.degenerate[static_cast<std::size_t>(j)]
                   ? norm.offset[j]
                   : norm.offset[j] + scale_of(j) * theta[j];
      out[data_dim + j] = scale_of(j) * theta[data_dim + j];
    }
  } else {  // mean parametrizations: map the component mean back
    for (int j = 0; j < data_dim; ++j)
      out[j] = norm.offset[j] + scale_of(j) * theta[j];
  }
  return out;
}

json atoms_to_json(const std::vector<Eigen::VectorXd>& atoms) {
  json arr = json::array();
  for (const auto& a : atoms) {
    json row = json::array();
    for (int i = 0; i < a.size(); ++i) row.push_back(a[i]);
    arr.push_back(std::move(row));
  }
  return arr;
}

json trace_to_json(const std::vector<OrderTrace>& trace) {
  json arr = json::array();
  for (const auto& t : trace)
    arr.push_back(json{{"order", t.order},
                       {"solve_status", t.solve_status},
                       {"objective", t.objective},
                       {"duality_gap", t.gap},
                       {"rank_high", t.rank_high},
                       {"rank_low", t.rank_low},
                       {"flat", t.flat}});
  return arr;
}

// largest deviation between the fitted mixture moments and the data moments
// through degree 2 * order
double moment_match_error(const PseudoMomentSequence& phi, const PseudoMomentSequence& mu,
                          const ParametricFamily& family, int order) {
  GradedBasis basis(mu.nvars(), std::min(2 * order, mu.maxdeg()));
  double worst = 0.0;
  for (int i = 0; i < basis.size(); ++i) {
    const MultiIndex& alpha = basis.at(i);
    const double model = riesz(phi, family.moment_poly(alpha));
    worst = std::max(worst, std::abs(model - mu.value(alpha)));
  }
  return worst;
}

// ---------------------------------------------------------------- fit ----

struct FitOptions {
  std::string data_path;
  std::string out_path = "fit_report.json";
  std::string density_out;
  std::string family = "gaussian";
  std::string distance = "w2";
  std::string normalize_mode = "auto";
  int order = 4;
  int max_order = 0;  // 0: same as order
  double epsilon = 1e-3;
  double tol = 1e-2;
  BoxOptions box;
  std::uint64_t seed = 0;
  bool header = false;
  bool labels = false;
  bool rank_means = false;
  int density_points = 201;
  SolverOptions solver;
};

void write_density_csv(const std::string& path, FamilyKind kind,
                       const std::vector<Eigen::VectorXd>& atoms,
                       const std::vector<double>& weights, const Eigen::MatrixXd& points,
                       int npoints) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out.precision(12);
  const double lo = points.minCoeff();
  const double hi = points.maxCoeff();
  auto mixture_at = [&](double x) {
    double f = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const auto& th = atoms[k];
      double comp = 0.0;
      if (kind == FamilyKind::gaussian_diagonal) {
        const double m = th[0], s = std::max(th[1], 1e-9);
        comp = std::exp(-0.5 * (x - m) * (x - m) / (s * s)) / (s * std::sqrt(2.0 * M_PI));
      } else if (kind == FamilyKind::poisson) {
        const double lam = std::max(th[0], 1e-12);
        comp = std::exp(x * std::log(lam) - lam - std::lgamma(x + 1.0));
      } else {
        const double eta = std::max(th[0], 1e-12);
        comp = x >= 0.0 ? std::exp(-x / eta) / eta : 0.0;
      }
      f += weights[k] * comp;
    }
    return f;
  };
  out << "x,density\n";
  if (kind == FamilyKind::poisson) {
    const int xmax = static_cast<int>(std::ceil(hi)) + 2;
    for (int x = 0; x <= xmax; ++x) out << x << ',' << mixture_at(x) << '\n';
  } else {
    const double pad = 0.05 * (hi - lo);
    for (int i = 0; i < npoints; ++i) {
      const double x = lo - pad + (hi - lo + 2 * pad) * i / (npoints - 1.0);
      out << x << ',' << mixture_at(x) << '\n';
    }
  }
}

json fit_config_json(const FitOptions& o, NormalizeMode mode, int data_dim, int max_order) {
  return json{{"data", o.data_path},
              {"out", o.out_path},
              {"family", o.family},
              {"distance", o.distance},
              {"normalize", normalize_mode_name(mode)},
              {"order", o.order},
              {"max_order", max_order},
              {"epsilon", o.epsilon},
              {"tol", o.tol},
              {"mean_lo", o.box.mean_lo},
              {"mean_hi", o.box.mean_hi},
              {"sigma_lo", o.box.sigma_lo},
              {"sigma_hi", o.box.sigma_hi},
              {"param_lo", o.box.param_lo},
              {"param_hi", o.box.param_hi},
              {"seed", o.seed},
              {"header", o.header},
              {"labels", o.labels},
              {"rank_means", o.rank_means},
              {"data_dim", data_dim},
              {"feas_tol", o.solver.feas_tol},
              {"gap_tol", o.solver.gap_tol},
              {"max_iters", o.solver.max_iters}};
}

int cmd_fit(const FitOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const FamilyKind kind = family_from_name(opts.family);
  const Distance dist = distance_from_name(opts.distance);
  Dataset data = read_csv(opts.data_path, opts.header, opts.labels);
  const int n = data.dim();

  const NormalizeMode mode = resolve_mode(kind, opts.normalize_mode);
  auto [ndata, nmap] = normalize(data, mode);

  const int max_order = std::max(opts.max_order, opts.order);
  PseudoMomentSequence mu = empirical_moments(ndata, 2 * max_order);

  ParametricFamily family = ParametricFamily::make(kind, n);
  const int p = family.param_dim();
  SemiAlgebraicSet box = family_box(kind, n, opts.box, ndata.points);
  Regularizer reg = opts.epsilon > 0.0
                        ? Regularizer{trace_regularizer(p, opts.order), opts.epsilon}
                        : Regularizer::none(p);
  RelaxationSpec spec(dist, opts.order, opts.epsilon, family, box, reg);

  Algorithm1Options a1;
  a1.tol = opts.tol;
  a1.max_order = max_order;
  a1.seed = opts.seed;
  a1.solver = opts.solver;
  // mean parameters come first in every family's layout
  if (opts.rank_means)
    for (int v = 0; v < n; ++v) a1.rank_params.push_back(v);
  Algorithm1Result res = run_algorithm1(mu, spec, a1);

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json rep;
  rep["version"] = kVersion;
  rep["command"] = "fit";
  rep["config"] = fit_config_json(opts, mode, n, max_order);
  rep["status"] = algorithm1_status_name(res.status);
  rep["message"] = res.message;
  rep["khat"] = res.khat;
  rep["order_final"] = res.order_final;
  rep["objective"] = res.objective;
  rep["duality_gap"] = res.gap;
  rep["trace"] = trace_to_json(res.trace);
  rep["seconds"] = seconds;

  std::vector<Eigen::VectorXd> atoms_orig;
  if (res.status != Algorithm1Result::Status::failed) {
    for (const auto& a : res.measure.atoms)
      atoms_orig.push_back(denormalize_atom(kind, nmap, a, n));
    rep["atoms_normalized"] = atoms_to_json(res.measure.atoms);
    rep["atoms"] = atoms_to_json(atoms_orig);
    rep["weights"] = res.measure.weights;
    rep["moment_match_max_err"] =
        moment_match_error(res.phi, mu, family, res.order_final);
  }
  write_json(opts.out_path, rep);

  if (!opts.density_out.empty() && res.status != Algorithm1Result::Status::failed) {
    if (n != 1) throw InputError("--density-out requires one-dimensional data");
    write_density_csv(opts.density_out, kind, atoms_orig, res.measure.weights, data.points,
                      opts.density_points);
  }
  return res.status == Algorithm1Result::Status::failed ? 1 : 0;
}

// ------------------------------------------------------------- project ----

struct ProjectOptions {
  std::string data_path;
  std::string out_path = "project_report.json";
  std::string family = "gaussian";
  std::string distance = "w2";
  std::string normalize_mode = "auto";
  int order = 4;
  double epsilon = 1e-3;
  double tol = 1e-6;  // rank tolerance for the per-coordinate estimates
  BoxOptions box;
  std::uint64_t seed = 0;
  bool header = false;
  bool labels = false;
  bool rank_means = false;
  SolverOptions solver;
};

int cmd_project_univariate(const ProjectOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const FamilyKind kind = family_from_name(opts.family);
  const Distance dist = distance_from_name(opts.distance);
  Dataset data = read_csv(opts.data_path, opts.header, opts.labels);
  const int n = data.dim();
  if (n < 2) throw InputError("project expects multivariate data; use fit for 1D");

  const NormalizeMode mode = resolve_mode(kind, opts.normalize_mode);
  auto [ndata, nmap] = normalize(data, mode);

  ParametricFamily family1 = ParametricFamily::make(kind, 1);
  const int p1 = family1.param_dim();

  json per_coord = json::array();
  std::map<int, int> histogram;
  int succeeded = 0;
  for (int j = 0; j < n; ++j) {
    PseudoMomentSequence mu1 = empirical_moments(ndata.points.col(j), 2 * opts.order);
    SemiAlgebraicSet box1 = family_box(kind, 1, opts.box, ndata.points.col(j));
    Regularizer reg = opts.epsilon > 0.0
                          ? Regularizer{trace_regularizer(p1, opts.order), opts.epsilon}
                          : Regularizer::none(p1);
    RelaxationSpec spec(dist, opts.order, opts.epsilon, family1, box1, reg);
    SdpProblem prob = build_univariate_projection(mu1, j, spec);
    ConicSolution sol = solve(prob, opts.solver);

    json row{{"coordinate", j}, {"solve_status", status_name(sol.status)}};
    if (sol.status == SolveStatus::optimal) {
      PseudoMomentSequence phi = extract_moment_vector(sol, "phi");
      const std::vector<int> subset = opts.rank_means ? std::vector<int>{0} : std::vector<int>{};
      const int khat =
          estimate_rank(principal_moment_matrix(phi, opts.order, subset), opts.tol).khat;
      row["khat"] = khat;
      row["objective"] = sol.primal_objective;
      row["duality_gap"] = duality_gap(prob, sol);
      ++histogram[khat];
      ++succeeded;
    }
    per_coord.push_back(std::move(row));
  }

  // mode of the per-coordinate estimates; ties are reported, never resolved
  int best_count = 0;
  for (const auto& [k, c] : histogram) best_count = std::max(best_count, c);
  std::vector<int> candidates;
  for (const auto& [k, c] : histogram)
    if (c == best_count && best_count > 0) candidates.push_back(k);

  json rep;
  rep["version"] = kVersion;
  rep["command"] = "project";
  rep["config"] = json{{"data", opts.data_path},
                       {"out", opts.out_path},
                       {"family", opts.family},
                       {"distance", opts.distance},
                       {"normalize", normalize_mode_name(mode)},
                       {"order", opts.order},
                       {"epsilon", opts.epsilon},
                       {"tol", opts.tol},
                       {"mean_lo", opts.box.mean_lo},
                       {"mean_hi", opts.box.mean_hi},
                       {"sigma_lo", opts.box.sigma_lo},
                       {"sigma_hi", opts.box.sigma_hi},
                       {"param_lo", opts.box.param_lo},
                       {"param_hi", opts.box.param_hi},
                       {"seed", opts.seed},
                       {"header", opts.header},
                       {"labels", opts.labels},
                       {"rank_means", opts.rank_means},
                       {"data_dim", n},
                       {"feas_tol", opts.solver.feas_tol},
                       {"gap_tol", opts.solver.gap_tol},
                       {"max_iters", opts.solver.max_iters}};
  rep["coordinates"] = per_coord;
  json hist = json::object();
  for (const auto& [k, c] : histogram) hist[std::to_string(k)] = c;
  rep["histogram"] = hist;
  if (candidates.size() == 1) {
    rep["mode"] = candidates[0];
  } else {
    rep["mode"] = nullptr;
  }
  rep["candidates"] = candidates;
  rep["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_json(opts.out_path, rep);
  return succeeded > 0 ? 0 : 1;
}

// --------------------------------------------------------------- bench ----

struct BenchOptions {
  std::string out_path = "bench_summary.json";
  std::string csv_path = "bench_runs.csv";
  int K = 2;
  int dim = 2;
  int num_mixtures = 10;
  int samples = 1000;
  int repeats = 100;
  double separability = 5.0;
  double eccentricity = 0.25;
  double gen_sigma_lo = 0.035, gen_sigma_hi = 0.065;
  int order = 4;
  int max_order = 0;
  double epsilon = 1e-3;
  double tol = 1e-2;
  BoxOptions box{0.0, 1.0, 0.02, 1.0, -1.0, -1.0};
  bool with_bic = false;
  std::uint64_t seed = 0;
  SolverOptions solver;
};

json mixture_truth_json(const MixtureSpec& spec) {
  json means = json::array(), vars = json::array();
  for (const auto& m : spec.means) {
    json r = json::array();
    for (int i = 0; i < m.size(); ++i) r.push_back(m[i]);
    means.push_back(std::move(r));
  }
  for (const auto& v : spec.variances) {
    json r = json::array();
    for (int i = 0; i < v.size(); ++i) r.push_back(v[i]);
    vars.push_back(std::move(r));
  }
  return json{{"dim", spec.dim},
              {"K", spec.K},
              {"separability", spec.separability},
              {"separability_convention",
               "pairwise center distance >= separability * largest component sigma_max"},
              {"eccentricity", spec.eccentricity},
              {"sigma_lo", spec.sigma_lo},
              {"sigma_hi", spec.sigma_hi},
              {"means", means},
              {"variances", vars},
              {"weights", spec.weights}};
}

int cmd_bench(const BenchOptions& opts) {
  BenchmarkConfig cfg;
  cfg.mixture.dim = opts.dim;
  cfg.mixture.K = opts.K;
  cfg.mixture.separability = opts.separability;
  cfg.mixture.eccentricity = opts.eccentricity;
  cfg.mixture.sigma_lo = opts.gen_sigma_lo;
  cfg.mixture.sigma_hi = opts.gen_sigma_hi;
  cfg.num_mixtures = opts.num_mixtures;
  cfg.samples = opts.samples;
  cfg.order = opts.order;
  cfg.max_order = std::max(opts.max_order, opts.order);
  cfg.epsilon = opts.epsilon;
  cfg.tol = opts.tol;
  cfg.mean_lo = opts.box.mean_lo;
  cfg.mean_hi = opts.box.mean_hi;
  cfg.sigma_lo = opts.box.sigma_lo;
  cfg.sigma_hi = opts.box.sigma_hi;
  cfg.repeats = opts.repeats;
  cfg.with_bic = opts.with_bic;
  cfg.seed = opts.seed;
  cfg.solver = opts.solver;

  BenchmarkReport rep = run_benchmark(cfg);

  {
    std::ofstream csv(opts.csv_path);
    if (!csv) throw InputError("cannot write " + opts.csv_path);
    csv << "mixture,algorithm,init,rep,iterations,objective,misclassification\n";
    csv.precision(12);
    for (const auto& r : rep.runs)
      csv << r.mixture << ',' << r.algorithm << ',' << r.init << ',' << r.rep << ','
          << r.iterations << ',' << r.objective << ',' << r.misclass << '\n';
  }

  json rows = json::array();
  for (const auto& m : rep.mixtures) {
    rows.push_back(json{{"index", m.index},
                        {"truth", mixture_truth_json(m.truth)},
                        {"khat_w2", m.khat_w2},
                        {"khat_tv", m.khat_tv},
                        {"fit_status_w2", m.fit_status_w2},
                        {"fit_status_tv", m.fit_status_tv},
                        {"objective_w2", m.objective_w2},
                        {"objective_tv", m.objective_tv},
                        {"duality_gap_w2", m.gap_w2},
                        {"duality_gap_tv", m.gap_tv},
                        {"fit_seconds_w2", m.fit_seconds_w2},
                        {"fit_seconds_tv", m.fit_seconds_tv},
                        {"bic_k", m.bic_k},
                        {"km_iters_w2", m.km_iters_w2},
                        {"km_iters_tv", m.km_iters_tv},
                        {"km_iters_rand_mean", m.km_iters_rand_mean},
                        {"km_iters_rand_std", m.km_iters_rand_std},
                        {"em_iters_w2", m.em_iters_w2},
                        {"em_iters_tv", m.em_iters_tv},
                        {"em_iters_rand_mean", m.em_iters_rand_mean},
                        {"em_iters_rand_std", m.em_iters_rand_std},
                        {"km_mis_w2", m.km_mis_w2},
                        {"km_mis_tv", m.km_mis_tv},
                        {"km_mis_rand_mean", m.km_mis_rand_mean},
                        {"em_mis_w2", m.em_mis_w2},
                        {"em_mis_tv", m.em_mis_tv},
                        {"em_mis_rand_mean", m.em_mis_rand_mean}});
  }

  json summary;
  summary["version"] = kVersion;
  summary["command"] = "bench";
  summary["config"] = json{{"out", opts.out_path},
                           {"csv", opts.csv_path},
                           {"K", opts.K},
                           {"dim", opts.dim},
                           {"mixtures", opts.num_mixtures},
                           {"samples", opts.samples},
                           {"repeats", opts.repeats},
                           {"separability", opts.separability},
                           {"eccentricity", opts.eccentricity},
                           {"gen_sigma_lo", opts.gen_sigma_lo},
                           {"gen_sigma_hi", opts.gen_sigma_hi},
                           {"order", cfg.order},
                           {"max_order", cfg.max_order},
                           {"epsilon", opts.epsilon},
                           {"tol", opts.tol},
                           {"mean_lo", cfg.mean_lo},
                           {"mean_hi", cfg.mean_hi},
                           {"sigma_lo", cfg.sigma_lo},
                           {"sigma_hi", cfg.sigma_hi},
                           {"with_bic", opts.with_bic},
                           {"seed", opts.seed},
                           {"feas_tol", opts.solver.feas_tol},
                           {"gap_tol", opts.solver.gap_tol},
                           {"max_iters", opts.solver.max_iters}};
  summary["mixtures"] = rows;
  summary["kmeans_w2_win_fraction"] = rep.km_w2_wins;
  summary["kmeans_tv_win_fraction"] = rep.km_tv_wins;
  summary["em_w2_win_fraction"] = rep.em_w2_wins;
  summary["em_tv_win_fraction"] = rep.em_tv_wins;
  summary["kmeans_w2_iter_saving"] = rep.km_w2_saving;
  summary["kmeans_tv_iter_saving"] = rep.km_tv_saving;
  summary["em_w2_iter_saving"] = rep.em_w2_saving;
  summary["em_tv_iter_saving"] = rep.em_tv_saving;
  write_json(opts.out_path, summary);
  return 0;
}

// ----------------------------------------------------------------- gen ----

struct GenOptions {
  std::string out_path = "mixture.csv";
  std::string truth_path;  // default: out_path + ".truth.json"
  int K = 2;
  int dim = 2;
  int samples = 1000;
  double separability = 5.0;
  double eccentricity = 0.25;
  double sigma_lo = 0.035, sigma_hi = 0.065;
  std::uint64_t seed = 0;
};

int cmd_gen(const GenOptions& opts) {
  MixtureSpec spec;
  spec.dim = opts.dim;
  spec.K = opts.K;
  spec.separability = opts.separability;
  spec.eccentricity = opts.eccentricity;
  spec.sigma_lo = opts.sigma_lo;
  spec.sigma_hi = opts.sigma_hi;
  Dataset data = sample_gmm(spec, opts.samples, opts.seed);
  write_csv(opts.out_path, data, true);

  json truth;
  truth["version"] = kVersion;
  truth["command"] = "gen";
  truth["config"] = json{{"out", opts.out_path},
                         {"K", opts.K},
                         {"dim", opts.dim},
                         {"samples", opts.samples},
                         {"separability", opts.separability},
                         {"eccentricity", opts.eccentricity},
                         {"sigma_lo", opts.sigma_lo},
                         {"sigma_hi", opts.sigma_hi},
                         {"seed", opts.seed}};
  truth["truth"] = mixture_truth_json(spec);
  const std::string tpath = opts.truth_path.empty() ? opts.out_path + ".truth.json" : opts.truth_path;
  write_json(tpath, truth);
  return 0;
}

void add_solver_flags(CLI::App* cmd, SolverOptions& s) {
  cmd->add_option("--feas-tol", s.feas_tol, "solver feasibility tolerance");
  cmd->add_option("--gap-tol", s.gap_tol, "solver relative gap tolerance");
  cmd->add_option("--solver-iters", s.max_iters, "solver iteration cap");
  cmd->add_flag("--solver-verbose", s.verbose, "print solver iteration log");
}

void add_box_flags(CLI::App* cmd, BoxOptions& b) {
  cmd->add_option("--mean-lo", b.mean_lo, "lower bound for component means (normalized)");
  cmd->add_option("--mean-hi", b.mean_hi, "upper bound for component means (normalized)");
  cmd->add_option("--sigma-lo", b.sigma_lo, "lower bound for component sigmas (normalized)");
  cmd->add_option("--sigma-hi", b.sigma_hi, "upper bound for component sigmas (normalized)");
  cmd->add_option("--param-lo", b.param_lo, "lower bound for rate parameters");
  cmd->add_option("--param-hi", b.param_hi, "upper bound for rate parameters");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"finite mixture approximation from moments via semidefinite relaxations"};
  app.require_subcommand(1);

  FitOptions fit;
  CLI::App* cfit = app.add_subcommand("fit", "fit a mixture to a dataset and extract atoms");
  cfit->add_option("--data", fit.data_path, "input CSV")->required();
  cfit->add_option("--out", fit.out_path, "JSON report path");
  cfit->add_option("--density-out", fit.density_out, "CSV of the fitted 1D density");
  cfit->add_option("--density-points", fit.density_points, "grid size for --density-out");
  cfit->add_option("--family", fit.family, "gaussian|poisson|exponential");
  cfit->add_option("--distance", fit.distance, "w2|tv");
  cfit->add_option("--normalize", fit.normalize_mode, "auto|minmax|scale|none");
  cfit->add_option("--order,-d", fit.order, "relaxation order d");
  cfit->add_option("--max-order", fit.max_order, "largest order tried for flatness");
  cfit->add_option("--epsilon", fit.epsilon, "regularization strength");
  cfit->add_option("--tol", fit.tol, "rank tolerance");
  cfit->add_option("--seed", fit.seed, "extraction seed");
  cfit->add_flag("--header", fit.header, "skip the first CSV row");
  cfit->add_flag("--labels", fit.labels, "last CSV column holds labels");
  cfit->add_flag("--rank-means", fit.rank_means,
                 "estimate rank and flatness on the mean-parameters principal submatrix");
  add_box_flags(cfit, fit.box);
  add_solver_flags(cfit, fit.solver);

  ProjectOptions proj;
  CLI::App* cproj =
      app.add_subcommand("project", "fit each coordinate separately and report the mode");
  cproj->add_option("--data", proj.data_path, "input CSV")->required();
  cproj->add_option("--out", proj.out_path, "JSON report path");
  cproj->add_option("--family", proj.family, "gaussian|poisson|exponential");
  cproj->add_option("--distance", proj.distance, "w2|tv");
  cproj->add_option("--normalize", proj.normalize_mode, "auto|minmax|scale|none");
  cproj->add_option("--order,-d", proj.order, "relaxation order d");
  cproj->add_option("--epsilon", proj.epsilon, "regularization strength");
  cproj->add_option("--tol", proj.tol, "rank tolerance for the per-coordinate estimates");
  cproj->add_option("--seed", proj.seed, "seed echoed into the report");
  cproj->add_flag("--header", proj.header, "skip the first CSV row");
  cproj->add_flag("--labels", proj.labels, "last CSV column holds labels");
  cproj->add_flag("--rank-means", proj.rank_means,
                  "estimate per-coordinate ranks on the mean-parameter principal submatrix");
  add_box_flags(cproj, proj.box);
  add_solver_flags(cproj, proj.solver);

  BenchOptions bench;
  CLI::App* cbench =
      app.add_subcommand("bench", "planted-mixture initialization benchmark");
  cbench->add_option("--out", bench.out_path, "JSON summary path");
  cbench->add_option("--csv", bench.csv_path, "per-run CSV path");
  cbench->add_option("--k", bench.K, "components per mixture");
  cbench->add_option("--dim", bench.dim, "data dimension");
  cbench->add_option("--mixtures", bench.num_mixtures, "number of planted mixtures");
  cbench->add_option("--samples", bench.samples, "samples per mixture");
  cbench->add_option("--repeats", bench.repeats, "random initializations per mixture");
  cbench->add_option("--separability", bench.separability, "center separation factor");
  cbench->add_option("--eccentricity", bench.eccentricity, "covariance eccentricity");
  cbench->add_option("--gen-sigma-lo", bench.gen_sigma_lo, "generator sigma_max lower bound");
  cbench->add_option("--gen-sigma-hi", bench.gen_sigma_hi, "generator sigma_max upper bound");
  cbench->add_option("--order,-d", bench.order, "relaxation order d");
  cbench->add_option("--max-order", bench.max_order, "largest order tried for flatness");
  cbench->add_option("--epsilon", bench.epsilon, "regularization strength");
  cbench->add_option("--tol", bench.tol, "rank tolerance");
  cbench->add_option("--seed", bench.seed, "master seed");
  cbench->add_flag("--with-bic", bench.with_bic, "also record a BIC component sweep");
  add_box_flags(cbench, bench.box);
  add_solver_flags(cbench, bench.solver);

  GenOptions gen;
  CLI::App* cgen = app.add_subcommand("gen", "sample a planted mixture to CSV");
  cgen->add_option("--out", gen.out_path, "output CSV path");
  cgen->add_option("--truth-out", gen.truth_path, "ground-truth JSON path");
  cgen->add_option("--k", gen.K, "components");
  cgen->add_option("--dim", gen.dim, "dimension");
  cgen->add_option("--samples", gen.samples, "sample count");
  cgen->add_option("--separability", gen.separability, "center separation factor");
  cgen->add_option("--eccentricity", gen.eccentricity, "covariance eccentricity");
  cgen->add_option("--sigma-lo", gen.sigma_lo, "generator sigma_max lower bound");
  cgen->add_option("--sigma-hi", gen.sigma_hi, "generator sigma_max upper bound");
  cgen->add_option("--seed", gen.seed, "seed");

  std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 parses reversed
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cfit->parsed()) return guarded(fit.out_path, [&] { return cmd_fit(fit); });
  if (cproj->parsed()) return guarded(proj.out_path, [&] { return cmd_project_univariate(proj); });
  if (cbench->parsed()) return guarded(bench.out_path, [&] { return cmd_bench(bench); });
  if (cgen->parsed()) return guarded(gen.out_path, [&] { return cmd_gen(gen); });
  return 2;
}

}  // namespace momix
