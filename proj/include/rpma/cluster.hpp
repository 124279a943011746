#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rpma/stiefel.hpp"

namespace rpma {

struct KMeansResult {
  std::vector<int> labels;  // values in 1..k
  double inertia = 0.0;     // within-cluster sum of squared distances
  std::vector<double> restart_inertias;
};

// Lloyd's algorithm on the rows of `points` with k-means++ seeding, the best
// of `restarts` independently seeded runs. Empty clusters are repaired by
// reseeding the centroid at the point farthest from its assigned centroid.
KMeansResult kmeans_rows(const Matrix& points, int k, std::uint64_t seed,
                         int restarts = 10);

// Fraction of agreeing samples under the best one-to-one matching of predicted
// to true classes (optimal assignment on the confusion matrix).
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// Normalized mutual information I(pred; truth) / sqrt(H(pred) H(truth)),
// natural log; zero when either partition is constant.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// ||X - ideal_projector(truth)||_F.
double frobenius_to_ideal(const ProjectionMatrix& x, const std::vector<int>& truth);

}  // namespace rpma
