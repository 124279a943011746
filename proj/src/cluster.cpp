#include "rpma/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "rpma/rng.hpp"
#include "rpma/spectral.hpp"

namespace rpma {

namespace {

constexpr int kMaxLloydIters = 300;
constexpr double kCentroidTol = 1e-9;

struct SingleRun {
  std::vector<int> assign;  // 0-based cluster per row
  double inertia = 0.0;
};

Eigen::Index nearest_centroid(const Matrix& points, const Matrix& centroids,
                              Eigen::Index row) {
  Eigen::Index best = 0;
  double best_d = (points.row(row) - centroids.row(0)).squaredNorm();
  for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
    const double d = (points.row(row) - centroids.row(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Matrix plus_plus_seed(const Matrix& points, int k, Rng& rng) {
  const Eigen::Index n = points.rows();
  Matrix centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.uniform_index(n)));
  Vector dist2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (int j = 0; j < c; ++j) {
        d = std::min(d, (points.row(i) - centroids.row(j)).squaredNorm());
      }
      dist2(i) = d;
      total += d;
    }
    Eigen::Index pick;
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(rng.uniform_index(n));
    } else {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist2(i);
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = points.row(pick);
  }
  return centroids;
}

SingleRun lloyd(const Matrix& points, int k, Rng& rng) {
  const Eigen::Index n = points.rows();
  Matrix centroids = plus_plus_seed(points, k, rng);
  SingleRun run;
  run.assign.assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < kMaxLloydIters; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      run.assign[static_cast<std::size_t>(i)] =
          static_cast<int>(nearest_centroid(points, centroids, i));
    }
    // Repair empty clusters: move their centroid to the point farthest from
    // its current centroid, then reassign.
    for (int repair = 0; repair < k; ++repair) {
      std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
      for (int a : run.assign) ++counts[static_cast<std::size_t>(a)];
      int empty = -1;
      for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
          empty = c;
          break;
        }
      }
      if (empty < 0) break;
      Eigen::Index far_row = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d =
            (points.row(i) - centroids.row(run.assign[static_cast<std::size_t>(i)]))
                .squaredNorm();
        if (d > far_d) {
          far_d = d;
          far_row = i;
        }
      }
      centroids.row(empty) = points.row(far_row);
      for (Eigen::Index i = 0; i < n; ++i) {
        run.assign[static_cast<std::size_t>(i)] =
            static_cast<int>(nearest_centroid(points, centroids, i));
      }
    }
    Matrix next = Matrix::Zero(k, points.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      next.row(run.assign[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(run.assign[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        next.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        next.row(c) = centroids.row(c);
      }
    }
    const double moved = (next - centroids).norm();
    centroids = next;
    if (moved <= kCentroidTol) break;
  }
  run.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.inertia +=
        (points.row(i) - centroids.row(run.assign[static_cast<std::size_t>(i)]))
            .squaredNorm();
  }
  return run;
}

// Minimum-cost perfect assignment on a square cost matrix (Hungarian
// algorithm with potentials, O(n^3)). Returns col_of_row.
std::vector<int> hungarian(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
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
      for (int j = 0; j <= n; ++j) {
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
  std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (p[static_cast<std::size_t>(j)] > 0) {
      col_of_row[static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) - 1] = j - 1;
    }
  }
  return col_of_row;
}

// Remaps arbitrary integer labels to 0..m-1 in order of first appearance.
std::vector<int> compact_labels(const std::vector<int>& labels, int* num_classes) {
  std::map<int, int> ids;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = ids.emplace(labels[i], static_cast<int>(ids.size())).first->second;
  }
  *num_classes = static_cast<int>(ids.size());
  return out;
}

Matrix confusion_matrix(const std::vector<int>& pred, const std::vector<int>& truth,
                        int* np, int* nt) {
  const std::vector<int> p = compact_labels(pred, np);
  const std::vector<int> t = compact_labels(truth, nt);
  Matrix c = Matrix::Zero(*np, *nt);
  for (std::size_t i = 0; i < p.size(); ++i) {
    c(p[i], t[i]) += 1.0;
  }
  return c;
}

}  // namespace

KMeansResult kmeans_rows(const Matrix& points, int k, std::uint64_t seed,
                         int restarts) {
  if (points.rows() < 1) throw std::invalid_argument("kmeans requires points");
  if (k < 1 || k > points.rows()) {
    throw std::invalid_argument("kmeans requires 1 <= k <= n");
  }
  if (restarts < 1) throw std::invalid_argument("kmeans requires restarts >= 1");
  Rng master(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng run_rng(master.raw());
    const SingleRun run = lloyd(points, k, run_rng);
    best.restart_inertias.push_back(run.inertia);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.labels.resize(run.assign.size());
      for (std::size_t i = 0; i < run.assign.size(); ++i) {
        best.labels[i] = run.assign[i] + 1;
      }
    }
  }
  return best;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw std::invalid_argument("accuracy requires equal-length non-empty labels");
  }
  int np = 0, nt = 0;
  const Matrix confusion = confusion_matrix(pred, truth, &np, &nt);
  const int m = std::max(np, nt);
  const double top = confusion.maxCoeff();
  Matrix cost = Matrix::Constant(m, m, top);  // padded cells carry zero count
  cost.topLeftCorner(np, nt) = (top - confusion.array()).matrix();
  const std::vector<int> match = hungarian(cost);
  double agree = 0.0;
  for (int i = 0; i < np; ++i) {
    if (match[static_cast<std::size_t>(i)] < nt) {
      agree += confusion(i, match[static_cast<std::size_t>(i)]);
    }
  }
  return agree / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw std::invalid_argument("nmi requires equal-length non-empty labels");
  }
  int np = 0, nt = 0;
  const Matrix joint = confusion_matrix(pred, truth, &np, &nt);
  const double n = static_cast<double>(pred.size());
  const Vector row = joint.rowwise().sum();
  const Vector col = joint.colwise().sum();
  double hp = 0.0, ht = 0.0, mi = 0.0;
  for (int i = 0; i < np; ++i) {
    if (row(i) > 0.0) hp -= row(i) / n * std::log(row(i) / n);
  }
  for (int j = 0; j < nt; ++j) {
    if (col(j) > 0.0) ht -= col(j) / n * std::log(col(j) / n);
  }
  if (hp <= 0.0 || ht <= 0.0) return 0.0;
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nt; ++j) {
      if (joint(i, j) > 0.0) {
        mi += joint(i, j) / n * std::log(n * joint(i, j) / (row(i) * col(j)));
      }
    }
  }
  const double v = mi / std::sqrt(hp * ht);
  return std::min(1.0, std::max(0.0, v));
}

double frobenius_to_ideal(const ProjectionMatrix& x, const std::vector<int>& truth) {
  if (static_cast<Eigen::Index>(truth.size()) != x.dim()) {
    throw std::invalid_argument("label length must match the projector dimension");
  }
  const ProjectionMatrix ideal = ideal_projector(truth);
  return (x.matrix() - ideal.matrix()).norm();
}

}  // namespace rpma
