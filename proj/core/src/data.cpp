#include "momix/data.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "momix/rng.hpp"

namespace momix {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s, const std::string& path, int lineno) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InputError(path + ":" + std::to_string(lineno) + ": not a number: '" + s + "'");
  }
}

}  // namespace

Dataset read_csv(const std::string& path, bool has_header, bool has_labels) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (has_header && lineno == 1) continue;
    std::vector<std::string> fields = split_line(line);
    if (width == 0) {
      width = fields.size();
      if (has_labels && width < 2)
        throw InputError(path + ": need at least one feature column before the label");
      if (width == 0) throw InputError(path + ": empty row");
    } else if (fields.size() != width) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    }
    const std::size_t nfeat = has_labels ? width - 1 : width;
    std::vector<double> row(nfeat);
    for (std::size_t j = 0; j < nfeat; ++j) row[j] = parse_double(fields[j], path, lineno);
    if (has_labels) {
      const double lv = parse_double(fields[width - 1], path, lineno);
      const int li = static_cast<int>(std::lround(lv));
      if (std::abs(lv - li) > 1e-9)
        throw InputError(path + ":" + std::to_string(lineno) + ": label is not an integer");
      labels.push_back(li);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path + ": no data rows");
  Dataset data;
  data.points.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      data.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  data.labels = std::move(labels);
  return data;
}

void write_csv(const std::string& path, const Dataset& data, bool write_labels) {
  if (write_labels && !data.has_labels())
    throw InputError("write_csv: dataset has no labels to write");
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out.precision(17);
  for (int i = 0; i < data.size(); ++i) {
    for (int j = 0; j < data.dim(); ++j) {
      if (j) out << ',';
      out << data.points(i, j);
    }
    if (write_labels) out << ',' << data.labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw InputError("failed writing " + path);
}

std::string normalize_mode_name(NormalizeMode m) {
  switch (m) {
    case NormalizeMode::minmax: return "minmax";
    case NormalizeMode::scale_only: return "scale";
    case NormalizeMode::none: return "none";
  }
  return "unknown";
}

NormalizeMode normalize_mode_from_name(const std::string& name) {
  if (name == "minmax") return NormalizeMode::minmax;
  if (name == "scale" || name == "scale_only") return NormalizeMode::scale_only;
  if (name == "none") return NormalizeMode::none;
  throw InputError("unknown normalization mode: " + name);
}

Eigen::VectorXd Normalization::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z(x.size());
  for (int i = 0; i < x.size(); ++i)
    z[i] = degenerate[static_cast<std::size_t>(i)] ? 0.5 : (x[i] - offset[i]) / scale[i];
  return z;
}

Eigen::VectorXd Normalization::invert(const Eigen::VectorXd& z) const {
  Eigen::VectorXd x(z.size());
  for (int i = 0; i < z.size(); ++i)
    x[i] = degenerate[static_cast<std::size_t>(i)] ? offset[i] : offset[i] + scale[i] * z[i];
  return x;
}

std::pair<Dataset, Normalization> normalize(const Dataset& data, NormalizeMode mode) {
  const int n = data.dim();
  Normalization map;
  map.offset = Eigen::VectorXd::Zero(n);
  map.scale = Eigen::VectorXd::Ones(n);
  map.degenerate.assign(static_cast<std::size_t>(n), false);

  for (int j = 0; j < n && mode != NormalizeMode::none; ++j) {
    const double lo = data.points.col(j).minCoeff();
    const double hi = data.points.col(j).maxCoeff();
    if (mode == NormalizeMode::minmax) {
      const double span = hi - lo;
      if (span <= 1e-12 * std::max(1.0, std::abs(hi))) {
        map.degenerate[static_cast<std::size_t>(j)] = true;
        map.offset[j] = lo;
      } else {
        map.offset[j] = lo;
        map.scale[j] = span;
      }
    } else {  // scale_only: divide by the largest magnitude, keep the origin
      const double mag = std::max(std::abs(lo), std::abs(hi));
      if (mag <= 1e-300) {
        map.degenerate[static_cast<std::size_t>(j)] = true;
      } else {
        map.scale[j] = mag;
      }
    }
  }

  Dataset out;
  out.labels = data.labels;
  out.points.resize(data.points.rows(), data.points.cols());
  for (int i = 0; i < data.size(); ++i)
    out.points.row(i) = map.apply(data.points.row(i).transpose()).transpose();
  return {std::move(out), std::move(map)};
}

PseudoMomentSequence empirical_moments(const Eigen::MatrixXd& points, int maxdeg) {
  if (points.rows() == 0) throw InputError("empirical_moments: no samples");
  const int n = static_cast<int>(points.cols());
  const int N = static_cast<int>(points.rows());
  GradedBasis basis(n, maxdeg);

  // powers[j](i, k) = points(i, j)^k
  std::vector<Eigen::MatrixXd> powers(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd& P = powers[static_cast<std::size_t>(j)];
    P.resize(N, maxdeg + 1);
    P.col(0).setOnes();
    for (int k = 1; k <= maxdeg; ++k)
      P.col(k) = P.col(k - 1).cwiseProduct(points.col(j));
  }

  Eigen::VectorXd values(basis.size());
  Eigen::VectorXd mono(N);
  for (int idx = 0; idx < basis.size(); ++idx) {
    const auto& e = basis.at(idx).exp;
    mono.setOnes();
    for (int j = 0; j < n; ++j) {
      const int k = e[static_cast<std::size_t>(j)];
      if (k > 0) mono = mono.cwiseProduct(powers[static_cast<std::size_t>(j)].col(k));
    }
    values[idx] = mono.mean();
  }
  return PseudoMomentSequence(basis, values);
}

PseudoMomentSequence empirical_moments(const Dataset& data, int maxdeg) {
  return empirical_moments(data.points, maxdeg);
}

std::pair<Dataset, PcaReduction> pca_reduce(const Dataset& data, int k) {
  const int n = data.dim();
  const int N = data.size();
  if (k < 1 || k > n) throw InputError("pca_reduce: k out of range");
  if (N < 2) throw InputError("pca_reduce: need at least two samples");

  PcaReduction red;
  red.mean = data.points.colwise().mean();
  Eigen::MatrixXd centered = data.points.rowwise() - red.mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(N - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);

  red.components.resize(n, k);
  red.explained.resize(k);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd v = eig.eigenvectors().col(n - 1 - j);
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0.0) v = -v;
    red.components.col(j) = v;
    red.explained[j] = std::max(0.0, eig.eigenvalues()[n - 1 - j]);
  }

  Dataset out;
  out.labels = data.labels;
  out.points = centered * red.components;
  return {std::move(out), std::move(red)};
}

Dataset sample_gmm(MixtureSpec& spec, int N, std::uint64_t seed) {
  if (spec.dim < 1 || spec.K < 1) throw InputError("sample_gmm: dim and K must be positive");
  if (N < 1) throw InputError("sample_gmm: need at least one sample");
  if (spec.sigma_lo <= 0.0 || spec.sigma_hi < spec.sigma_lo)
    throw InputError("sample_gmm: invalid sigma range");
  double ecc = spec.eccentricity;
  if (ecc <= 0.0) throw InputError("sample_gmm: eccentricity must be positive");
  if (ecc > 1.0) ecc = 1.0 / ecc;  // accept the reciprocal convention

  const int n = spec.dim;
  const int K = spec.K;
  Rng rng(seed, 0xd4);

  if (spec.variances.empty()) {
    spec.variances.resize(static_cast<std::size_t>(K));
    for (int c = 0; c < K; ++c) {
      const double smax = rng.uniform(spec.sigma_lo, spec.sigma_hi);
      const double vmax = smax * smax;
      const double vmin = ecc * vmax;
      Eigen::VectorXd var(n);
      var[0] = vmax;
      if (n > 1) var[n - 1] = vmin;
      for (int j = 1; j < n - 1; ++j)
        var[j] = vmin * std::pow(vmax / vmin, rng.uniform());
      // shuffle which axis carries which eigenvalue
      for (int j = n - 1; j > 0; --j) std::swap(var[j], var[rng.uniform_int(j + 1)]);
      spec.variances[static_cast<std::size_t>(c)] = var;
    }
  }
  if (static_cast<int>(spec.variances.size()) != K)
    throw InputError("sample_gmm: variances/K mismatch");

  double sigma_max = 0.0;
  for (const auto& var : spec.variances) {
    if (var.size() != n) throw InputError("sample_gmm: variance dimension mismatch");
    sigma_max = std::max(sigma_max, std::sqrt(var.maxCoeff()));
  }

  if (spec.means.empty()) {
    const double need = spec.separability * sigma_max;
    const double margin = 0.12;
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      std::vector<Eigen::VectorXd> cand;
      for (int c = 0; c < K; ++c) {
        Eigen::VectorXd m(n);
        for (int j = 0; j < n; ++j) m[j] = rng.uniform(margin, 1.0 - margin);
        cand.push_back(std::move(m));
      }
      bool ok = true;
      for (int a = 0; a < K && ok; ++a)
        for (int b = a + 1; b < K && ok; ++b)
          if ((cand[static_cast<std::size_t>(a)] - cand[static_cast<std::size_t>(b)]).norm() < need) ok = false;
      if (ok) {
        spec.means = std::move(cand);
        placed = true;
      }
    }
    if (!placed)
      throw InputError("sample_gmm: could not place " + std::to_string(K) +
                       " centers at separability " + std::to_string(spec.separability) +
                       " within 1000 attempts; lower the separability or sigma range");
  }
  if (static_cast<int>(spec.means.size()) != K) throw InputError("sample_gmm: means/K mismatch");
  for (const auto& m : spec.means)
    if (m.size() != n) throw InputError("sample_gmm: mean dimension mismatch");

  if (spec.weights.empty()) spec.weights.assign(static_cast<std::size_t>(K), 1.0 / K);
  if (static_cast<int>(spec.weights.size()) != K)
    throw InputError("sample_gmm: weights/K mismatch");
  double wsum = 0.0;
  for (double w : spec.weights) {
    if (w < 0.0) throw InputError("sample_gmm: negative weight");
    wsum += w;
  }
  if (wsum <= 0.0) throw InputError("sample_gmm: weights sum to zero");
  for (double& w : spec.weights) w /= wsum;

  Dataset data;
  data.points.resize(N, n);
  data.labels.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    double u = rng.uniform();
    int c = 0;
    while (c < K - 1 && u >= spec.weights[static_cast<std::size_t>(c)]) {
      u -= spec.weights[static_cast<std::size_t>(c)];
      ++c;
    }
    data.labels[static_cast<std::size_t>(i)] = c;
    const auto& m = spec.means[static_cast<std::size_t>(c)];
    const auto& var = spec.variances[static_cast<std::size_t>(c)];
    for (int j = 0; j < n; ++j)
      data.points(i, j) = m[j] + std::sqrt(var[j]) * rng.normal();
  }
  return data;
}

}  // namespace momix
