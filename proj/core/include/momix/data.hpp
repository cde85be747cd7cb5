#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "momix/moments.hpp"

namespace momix {

// Malformed files, impossible configurations, user input that cannot be
// acted on.  CLI maps this to its usage exit code.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Dataset {
  Eigen::MatrixXd points;   // one row per observation
  std::vector<int> labels;  // empty, or one label per row

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  bool has_labels() const { return !labels.empty(); }
};

// Numeric CSV.  When has_labels is set the last column is read as integer
// class labels.  A header row is skipped when has_header is set.
Dataset read_csv(const std::string& path, bool has_header = false, bool has_labels = false);
void write_csv(const std::string& path, const Dataset& data, bool write_labels = false);

enum class NormalizeMode { minmax, scale_only, none };
std::string normalize_mode_name(NormalizeMode m);
NormalizeMode normalize_mode_from_name(const std::string& name);

// Per-dimension affine map x -> (x - offset) / scale and its inverse.
// Dimensions with no spread are flagged and pinned to 0.5 under minmax.
struct Normalization {
  Eigen::VectorXd offset;
  Eigen::VectorXd scale;  // 1.0 on degenerate dimensions
  std::vector<bool> degenerate;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd invert(const Eigen::VectorXd& z) const;
};

std::pair<Dataset, Normalization> normalize(const Dataset& data,
                                            NormalizeMode mode = NormalizeMode::minmax);

// Sample-average moments of the rows up to total degree maxdeg.
PseudoMomentSequence empirical_moments(const Eigen::MatrixXd& points, int maxdeg);
PseudoMomentSequence empirical_moments(const Dataset& data, int maxdeg);

struct PcaReduction {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // one column per kept direction
  Eigen::VectorXd explained;   // eigenvalues of the kept directions, descending
};

// Projects onto the k leading covariance eigenvectors.  Each component is
// signed so its largest-magnitude entry is positive, making the output
// deterministic across runs.
std::pair<Dataset, PcaReduction> pca_reduce(const Dataset& data, int k);

// Ground truth for a synthetic diagonal-covariance Gaussian mixture.
// Separability c means every pair of centers is at least c times the
// largest per-component sigma_max apart.
struct MixtureSpec {
  int dim = 2;
  int K = 2;
  double separability = 4.0;
  // ratio of smallest to largest covariance eigenvalue per component;
  // values above 1 are interpreted as the reciprocal convention
  double eccentricity = 0.25;
  double sigma_lo = 0.035;
  double sigma_hi = 0.065;

  std::vector<Eigen::VectorXd> means;      // filled by sample_gmm when empty
  std::vector<Eigen::VectorXd> variances;  // diagonal entries, same layout
  std::vector<double> weights;             // uniform when empty
};

// Draws the ground-truth parameters (when absent) and N labeled samples.
// Center placement is rejection sampling inside [margin, 1-margin]^dim with
// at most 1000 attempts before reporting the configuration infeasible.
Dataset sample_gmm(MixtureSpec& spec, int N, std::uint64_t seed);

}  // namespace momix
