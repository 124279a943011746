#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpma/stiefel.hpp"

namespace rpma {

struct SbmParams {
  Eigen::Index n = 0;
  int k = 1;
  double p_in = 0.0;   // within-community edge probability
  double p_out = 0.0;  // between-community edge probability
  std::vector<Eigen::Index> sizes;  // empty => balanced
  std::uint64_t seed = 0;
};

struct LabeledDataset {
  std::optional<Matrix> features;  // n x d
  std::optional<Matrix> affinity;  // n x n symmetric
  std::vector<int> labels;         // values in 1..K
};

// Symmetric 0/1 affinity from the stochastic block model: unit diagonal,
// upper-triangle entries Bernoulli(p_in or p_out by label equality), mirrored.
// p_out > p_in is tolerated; probabilities outside [0, 1] are not.
LabeledDataset gen_sbm(const SbmParams& params);

// A_ij = exp(-||x_i - x_j||^2 / sigma^2) with the bandwidth set to the mean
// squared pairwise distance sigma^2 = 2/(n(n-1)) * sum_{i<j} ||x_i - x_j||^2.
Matrix gaussian_affinity(const Matrix& features);

// Plain CSV: comma-separated numeric cells, no header, one row per line.
Matrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const Matrix& m, const std::string& path);

// Labels: one integer per line.
std::vector<int> load_labels_csv(const std::string& path);
void save_labels_csv(const std::vector<int>& labels, const std::string& path);

}  // namespace rpma
