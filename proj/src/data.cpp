#include "rpma/data.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rpma/errors.hpp"
#include "rpma/rng.hpp"

namespace rpma {

namespace {

std::vector<Eigen::Index> balanced_sizes(Eigen::Index n, int k) {
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    sizes[static_cast<std::size_t>(c)] = n / k + (c < n % k ? 1 : 0);
  }
  return sizes;
}

}  // namespace

LabeledDataset gen_sbm(const SbmParams& params) {
  if (params.n < 1 || params.k < 1 || params.k > params.n) {
    throw std::invalid_argument("sbm requires 1 <= K <= n");
  }
  for (double p : {params.p_in, params.p_out}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("sbm probabilities must lie in [0, 1]");
    }
  }
  std::vector<Eigen::Index> sizes =
      params.sizes.empty() ? balanced_sizes(params.n, params.k) : params.sizes;
  if (static_cast<int>(sizes.size()) != params.k) {
    throw std::invalid_argument("sbm sizes must list one count per community");
  }
  Eigen::Index total = 0;
  for (Eigen::Index s : sizes) {
    if (s < 1) throw std::invalid_argument("sbm community sizes must be positive");
    total += s;
  }
  if (total != params.n) {
    throw std::invalid_argument("sbm community sizes must sum to n");
  }

  LabeledDataset out;
  out.labels.resize(static_cast<std::size_t>(params.n));
  Eigen::Index pos = 0;
  for (int c = 0; c < params.k; ++c) {
    for (Eigen::Index i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i) {
      out.labels[static_cast<std::size_t>(pos++)] = c + 1;
    }
  }

  Rng rng(params.seed);
  Matrix a = Matrix::Zero(params.n, params.n);
  for (Eigen::Index i = 0; i < params.n; ++i) {
    a(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < params.n; ++j) {
      const bool same = out.labels[static_cast<std::size_t>(i)] ==
                        out.labels[static_cast<std::size_t>(j)];
      const double p = same ? params.p_in : params.p_out;
      const double v = rng.uniform() < p ? 1.0 : 0.0;
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  out.affinity = std::move(a);
  return out;
}

Matrix gaussian_affinity(const Matrix& features) {
  const Eigen::Index n = features.rows();
  if (n < 2) throw std::invalid_argument("gaussian affinity requires n >= 2");
  if (!features.allFinite()) {
    throw std::invalid_argument("features must be finite");
  }
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      sum_sq += (features.row(i) - features.row(j)).squaredNorm();
    }
  }
  const double sigma_sq = 2.0 * sum_sq / (static_cast<double>(n) * (n - 1.0));
  if (sigma_sq <= 0.0) {
    throw DataError("gaussian affinity undefined: all feature rows identical");
  }
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (features.row(i) - features.row(j)).squaredNorm();
      const double v = std::exp(-d2 / sigma_sq);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const std::string t = trim(cell);
  if (t.empty()) {
    throw DataError("empty cell at row " + std::to_string(row + 1) + ", column " +
                    std::to_string(col + 1));
  }
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0') {
    throw DataError("non-numeric cell '" + t + "' at row " + std::to_string(row + 1) +
                    ", column " + std::to_string(col + 1));
  }
  return v;
}

}  // namespace

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row_idx = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      ++row_idx;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col_idx = 0;
    while (std::getline(ss, cell, ',')) {
      row.push_back(parse_cell(cell, row_idx, col_idx));
      ++col_idx;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("ragged CSV: row " + std::to_string(row_idx + 1) + " has " +
                      std::to_string(row.size()) + " cells, expected " +
                      std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
    ++row_idx;
  }
  if (rows.empty()) throw DataError("CSV file '" + path + "' is empty");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

void save_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing '" + path + "'");
}

std::vector<int> load_labels_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::vector<int> labels;
  std::string line;
  std::size_t row_idx = 0;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    ++row_idx;
    if (t.empty()) continue;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end == t.c_str() || *end != '\0') {
      throw DataError("non-integer label '" + t + "' at row " +
                      std::to_string(row_idx));
    }
    labels.push_back(static_cast<int>(v));
  }
  if (labels.empty()) throw DataError("labels file '" + path + "' is empty");
  return labels;
}

void save_labels_csv(const std::vector<int>& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  for (int v : labels) out << v << '\n';
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace rpma
