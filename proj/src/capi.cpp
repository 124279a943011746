#include "rpma.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "rpma/cluster.hpp"
#include "rpma/data.hpp"
#include "rpma/errors.hpp"
#include "rpma/solver.hpp"
#include "rpma/spectral.hpp"
#include "rpma/trace.hpp"

struct rpma_matrix {
  rpma::Matrix m;
};

struct rpma_labels {
  std::vector<int> v;
};

struct rpma_solution {
  rpma::SolveResult result;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return RPMA_OK;
  } catch (const std::invalid_argument& e) {
    return fail(RPMA_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const rpma::DataError& e) {
    return fail(RPMA_ERROR_DATA, e.what());
  } catch (const rpma::NumericalError& e) {
    return fail(RPMA_ERROR_NUMERICAL, e.what());
  } catch (const std::exception& e) {
    return fail(RPMA_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(RPMA_ERROR_INTERNAL, "unknown error");
  }
}

int require_nonnull(const void* p, const char* what) {
  if (p != nullptr) return RPMA_OK;
  return fail(RPMA_ERROR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

}  // namespace

extern "C" {

const char* rpma_last_error(void) { return g_last_error.c_str(); }

int rpma_matrix_create(int64_t rows, int64_t cols, const double* row_major,
                       rpma_matrix** out) {
  if (int rc = require_nonnull(row_major, "data")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  if (rows < 1 || cols < 1) {
    return fail(RPMA_ERROR_INVALID_ARGUMENT, "matrix dimensions must be positive");
  }
  return guarded([&] {
    auto* h = new rpma_matrix;
    h->m.resize(rows, cols);
    for (int64_t i = 0; i < rows; ++i) {
      for (int64_t j = 0; j < cols; ++j) h->m(i, j) = row_major[i * cols + j];
    }
    *out = h;
  });
}

int rpma_matrix_rows(const rpma_matrix* m, int64_t* out) {
  if (int rc = require_nonnull(m, "matrix")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = m->m.rows();
  return RPMA_OK;
}

int rpma_matrix_cols(const rpma_matrix* m, int64_t* out) {
  if (int rc = require_nonnull(m, "matrix")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = m->m.cols();
  return RPMA_OK;
}

int rpma_matrix_get(const rpma_matrix* m, int64_t row, int64_t col, double* out) {
  if (int rc = require_nonnull(m, "matrix")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  if (row < 0 || row >= m->m.rows() || col < 0 || col >= m->m.cols()) {
    return fail(RPMA_ERROR_INVALID_ARGUMENT, "matrix index out of range");
  }
  *out = m->m(row, col);
  return RPMA_OK;
}

int rpma_matrix_copy_data(const rpma_matrix* m, double* out_row_major) {
  if (int rc = require_nonnull(m, "matrix")) return rc;
  if (int rc = require_nonnull(out_row_major, "out")) return rc;
  const int64_t cols = m->m.cols();
  for (int64_t i = 0; i < m->m.rows(); ++i) {
    for (int64_t j = 0; j < cols; ++j) out_row_major[i * cols + j] = m->m(i, j);
  }
  return RPMA_OK;
}

int rpma_matrix_load_csv(const char* path, rpma_matrix** out) {
  if (int rc = require_nonnull(path, "path")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  return guarded([&] { *out = new rpma_matrix{rpma::load_matrix_csv(path)}; });
}

int rpma_matrix_save_csv(const rpma_matrix* m, const char* path) {
  if (int rc = require_nonnull(m, "matrix")) return rc;
  if (int rc = require_nonnull(path, "path")) return rc;
  return guarded([&] { rpma::save_matrix_csv(m->m, path); });
}

int rpma_matrix_asymmetry(const rpma_matrix* m, double* out) {
  if (int rc = require_nonnull(m, "matrix")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  if (m->m.rows() != m->m.cols()) {
    return fail(RPMA_ERROR_INVALID_ARGUMENT, "asymmetry requires a square matrix");
  }
  *out = (m->m - m->m.transpose()).norm();
  return RPMA_OK;
}

void rpma_matrix_free(rpma_matrix* m) { delete m; }

int rpma_labels_create(int64_t n, const int32_t* values, rpma_labels** out) {
  if (int rc = require_nonnull(values, "values")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  if (n < 1) return fail(RPMA_ERROR_INVALID_ARGUMENT, "labels must be non-empty");
  auto* h = new rpma_labels;
  h->v.assign(values, values + n);
  *out = h;
  return RPMA_OK;
}

int rpma_labels_size(const rpma_labels* l, int64_t* out) {
  if (int rc = require_nonnull(l, "labels")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = static_cast<int64_t>(l->v.size());
  return RPMA_OK;
}

int rpma_labels_copy_data(const rpma_labels* l, int32_t* out) {
  if (int rc = require_nonnull(l, "labels")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  for (std::size_t i = 0; i < l->v.size(); ++i) out[i] = l->v[i];
  return RPMA_OK;
}

int rpma_labels_load_csv(const char* path, rpma_labels** out) {
  if (int rc = require_nonnull(path, "path")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  return guarded([&] { *out = new rpma_labels{rpma::load_labels_csv(path)}; });
}

int rpma_labels_save_csv(const rpma_labels* l, const char* path) {
  if (int rc = require_nonnull(l, "labels")) return rc;
  if (int rc = require_nonnull(path, "path")) return rc;
  return guarded([&] { rpma::save_labels_csv(l->v, path); });
}

void rpma_labels_free(rpma_labels* l) { delete l; }

int rpma_sbm_generate(int64_t n, int32_t k, double p_in, double p_out,
                      const int64_t* sizes, uint64_t seed,
                      rpma_matrix** affinity_out, rpma_labels** labels_out) {
  if (int rc = require_nonnull(affinity_out, "affinity_out")) return rc;
  if (int rc = require_nonnull(labels_out, "labels_out")) return rc;
  return guarded([&] {
    rpma::SbmParams params;
    params.n = n;
    params.k = k;
    params.p_in = p_in;
    params.p_out = p_out;
    params.seed = seed;
    if (sizes != nullptr) {
      params.sizes.assign(sizes, sizes + k);
    }
    rpma::LabeledDataset data = rpma::gen_sbm(params);
    auto* aff = new rpma_matrix{std::move(*data.affinity)};
    auto* lab = new rpma_labels{std::move(data.labels)};
    *affinity_out = aff;
    *labels_out = lab;
  });
}

int rpma_gaussian_affinity(const rpma_matrix* features, rpma_matrix** affinity_out) {
  if (int rc = require_nonnull(features, "features")) return rc;
  if (int rc = require_nonnull(affinity_out, "affinity_out")) return rc;
  return guarded(
      [&] { *affinity_out = new rpma_matrix{rpma::gaussian_affinity(features->m)}; });
}

void rpma_solve_options_init(rpma_solve_options* opts) {
  if (opts == nullptr) return;
  const rpma::SolverConfig defaults;
  opts->method = RPMA_METHOD_ADMM;
  opts->penalty = RPMA_PENALTY_NONNEG;
  opts->alpha = 0.0;
  opts->beta = HUGE_VAL;
  opts->delta = 1e-5;
  opts->lambda = 0.5;
  opts->rho1 = defaults.rho1;
  opts->rho2 = defaults.rho2;
  opts->tau0 = defaults.tau0;
  opts->epsilon = defaults.epsilon;
  opts->max_iters = defaults.max_iters;
  opts->max_halvings = defaults.max_halvings;
  opts->perturb_c = defaults.perturb_c;
  opts->rho_admm = defaults.rho_admm;
  opts->seed = defaults.seed;
}

int rpma_solve(const rpma_matrix* affinity, int32_t k,
               const rpma_solve_options* opts, rpma_solution** out) {
  if (int rc = require_nonnull(affinity, "affinity")) return rc;
  if (int rc = require_nonnull(opts, "options")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  return guarded([&] {
    rpma::PenaltySpec penalty;
    switch (opts->penalty) {
      case RPMA_PENALTY_BOUNDED:
        penalty = rpma::PenaltySpec::bounded(opts->alpha, opts->beta);
        break;
      case RPMA_PENALTY_NONNEG:
        penalty = rpma::PenaltySpec::non_negative();
        break;
      case RPMA_PENALTY_HUBER:
        penalty = rpma::PenaltySpec::huber(opts->delta);
        break;
      default:
        throw std::invalid_argument("unknown penalty code");
    }
    rpma::SolveMethod method;
    switch (opts->method) {
      case RPMA_METHOD_CURVILINEAR_U: method = rpma::SolveMethod::CurvilinearU; break;
      case RPMA_METHOD_PERTURBED_U: method = rpma::SolveMethod::PerturbedU; break;
      case RPMA_METHOD_CURVILINEAR_X: method = rpma::SolveMethod::CurvilinearX; break;
      case RPMA_METHOD_ADMM: method = rpma::SolveMethod::Admm; break;
      case RPMA_METHOD_BEST_OF: method = rpma::SolveMethod::BestOf; break;
      default:
        throw std::invalid_argument("unknown method code");
    }
    rpma::SolverConfig cfg;
    cfg.rho1 = opts->rho1;
    cfg.rho2 = opts->rho2;
    cfg.tau0 = opts->tau0;
    cfg.epsilon = opts->epsilon;
    cfg.max_iters = static_cast<int>(opts->max_iters);
    cfg.max_halvings = opts->max_halvings;
    cfg.perturb_c = opts->perturb_c;
    cfg.rho_admm = opts->rho_admm;
    cfg.seed = opts->seed;
    cfg.validate();

    rpma::ProblemInstance inst(affinity->m, k, opts->lambda, penalty);
    *out = new rpma_solution{rpma::solve(inst, method, cfg)};
  });
}

int rpma_solution_projector(const rpma_solution* s, rpma_matrix** out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  return guarded([&] { *out = new rpma_matrix{s->result.x.matrix()}; });
}

int rpma_solution_basis(const rpma_solution* s, rpma_matrix** out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  return guarded([&] { *out = new rpma_matrix{s->result.u.matrix()}; });
}

int rpma_solution_objective(const rpma_solution* s, double* out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = s->result.objective;
  return RPMA_OK;
}

int rpma_solution_kkt_residual(const rpma_solution* s, double* out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = s->result.kkt;
  return RPMA_OK;
}

int rpma_solution_iterations(const rpma_solution* s, int64_t* out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = s->result.iterations;
  return RPMA_OK;
}

int rpma_solution_converged(const rpma_solution* s, int32_t* out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = s->result.converged ? 1 : 0;
  return RPMA_OK;
}

int rpma_solution_weak_step(const rpma_solution* s, int32_t* out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = s->result.weak_step ? 1 : 0;
  return RPMA_OK;
}

int rpma_solution_degenerate_gap(const rpma_solution* s, int32_t* out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = s->result.degenerate_gap ? 1 : 0;
  return RPMA_OK;
}

int rpma_solution_theory_rho(const rpma_solution* s, int32_t* out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = s->result.theory_rho ? 1 : 0;
  return RPMA_OK;
}

int rpma_solution_rho_used(const rpma_solution* s, double* out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = s->result.rho_used;
  return RPMA_OK;
}

int rpma_solution_method(const rpma_solution* s, const char** out) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  *out = s->result.method.c_str();
  return RPMA_OK;
}

int rpma_solution_write_trace_json(const rpma_solution* s, const char* path) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(path, "path")) return rc;
  return guarded([&] { rpma::write_trace_json(s->result.trace, path); });
}

int rpma_solution_write_trace_csv(const rpma_solution* s, const char* path) {
  if (int rc = require_nonnull(s, "solution")) return rc;
  if (int rc = require_nonnull(path, "path")) return rc;
  return guarded([&] { rpma::write_trace_csv(s->result.trace, path); });
}

void rpma_solution_free(rpma_solution* s) { delete s; }

int rpma_kmeans_rows(const rpma_matrix* points, int32_t k, uint64_t seed,
                     int32_t restarts, rpma_labels** out) {
  if (int rc = require_nonnull(points, "points")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  return guarded([&] {
    rpma::KMeansResult result = rpma::kmeans_rows(points->m, k, seed, restarts);
    *out = new rpma_labels{std::move(result.labels)};
  });
}

int rpma_accuracy(const rpma_labels* pred, const rpma_labels* truth, double* out) {
  if (int rc = require_nonnull(pred, "pred")) return rc;
  if (int rc = require_nonnull(truth, "truth")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  return guarded([&] { *out = rpma::accuracy(pred->v, truth->v); });
}

int rpma_nmi(const rpma_labels* pred, const rpma_labels* truth, double* out) {
  if (int rc = require_nonnull(pred, "pred")) return rc;
  if (int rc = require_nonnull(truth, "truth")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  return guarded([&] { *out = rpma::nmi(pred->v, truth->v); });
}

int rpma_frobenius_to_ideal(const rpma_matrix* projector, const rpma_labels* truth,
                            double* out) {
  if (int rc = require_nonnull(projector, "projector")) return rc;
  if (int rc = require_nonnull(truth, "truth")) return rc;
  if (int rc = require_nonnull(out, "out")) return rc;
  return guarded([&] {
    rpma::ProjectionMatrix x(projector->m);
    *out = rpma::frobenius_to_ideal(x, truth->v);
  });
}

}  // extern "C"
