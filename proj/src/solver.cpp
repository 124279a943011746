#include "rpma/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "rpma/errors.hpp"
#include "rpma/rng.hpp"
#include "rpma/spectral.hpp"

namespace rpma {

void SolverConfig::validate() const {
  if (!(rho1 > 0.0 && rho1 <= rho2 && rho2 < 1.0)) {
    throw std::invalid_argument("wolfe constants require 0 < rho1 <= rho2 < 1");
  }
  if (!(tau0 > 0.0)) throw std::invalid_argument("tau0 must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be >= 0");
  if (!(perturb_c >= 0.0)) throw std::invalid_argument("perturb_c must be >= 0");
}

std::string method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::CurvilinearU: return "curvilinear-u";
    case SolveMethod::PerturbedU: return "perturbed-u";
    case SolveMethod::CurvilinearX: return "curvilinear-x";
    case SolveMethod::Admm: return "admm";
    case SolveMethod::BestOf: return "best-of";
  }
  return "unknown";
}

std::optional<SolveMethod> method_from_name(const std::string& name) {
  if (name == "curvilinear-u") return SolveMethod::CurvilinearU;
  if (name == "perturbed-u") return SolveMethod::PerturbedU;
  if (name == "curvilinear-x") return SolveMethod::CurvilinearX;
  if (name == "admm") return SolveMethod::Admm;
  if (name == "best-of") return SolveMethod::BestOf;
  return std::nullopt;
}

std::vector<int> default_phi_index_set(Eigen::Index n) {
  std::vector<int> idx(static_cast<std::size_t>((n + 1) / 2));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return idx;
}

std::array<double, 2> phi_map(const Matrix& x, const std::vector<int>& index_set) {
  if (x.rows() != x.cols() || x.size() == 0) {
    throw std::invalid_argument("phi requires a square matrix");
  }
  const Eigen::Index n = x.rows();
  if (static_cast<Eigen::Index>(index_set.size()) != (n + 1) / 2) {
    throw std::invalid_argument("phi index set must have ceil(n/2) entries");
  }
  std::vector<char> in_set(static_cast<std::size_t>(n), 0);
  for (int j : index_set) {
    if (j < 0 || j >= n) {
      throw std::invalid_argument("phi index set entry out of range");
    }
    if (in_set[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("phi index set entries must be distinct");
    }
    in_set[static_cast<std::size_t>(j)] = 1;
  }
  const double scale = 0.5 * static_cast<double>(n) * static_cast<double>(n);
  double inside = 0.0, outside = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double colsum = x.col(j).sum();
    if (in_set[static_cast<std::size_t>(j)]) {
      inside += colsum;
    } else {
      outside += colsum;
    }
  }
  return {scale * inside, scale * outside};
}

namespace {

double frob_dot(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

// dd0 below this magnitude (relative to the objective scale) is treated as
// exact stationarity; the curve barely moves and backtracking would only
// compare rounding noise.
double stationary_threshold(double f0) {
  return 1e-20 * std::max(1.0, std::abs(f0));
}

WolfeResult wolfe_backtrack_impl(const ProblemInstance& inst, const StiefelPoint& u0,
                                 const SkewDirection& dir, const SolverConfig& cfg,
                                 double f0, const Matrix& grad0) {
  if (!dir.is_factored()) {
    throw std::invalid_argument("wolfe search expects a factored direction");
  }
  // U'(0) = -W U0 = -P (Q' U0).
  const Matrix uprime0 = -(dir.p() * (dir.q().transpose() * u0.matrix()));
  const double dd0 = frob_dot(grad0, uprime0);

  if (dd0 >= -stationary_threshold(f0)) {
    WolfeResult r{0.0, u0, f0, grad0, dd0, false, true, 0};
    return r;
  }

  std::optional<WolfeResult> smallest_evaluated;
  double tau = cfg.tau0;
  for (int m = 0; m <= cfg.max_halvings; ++m, tau /= 2.0) {
    const auto eval = cayley_curve_smw_with_derivative(u0, dir, tau);
    if (!eval) continue;  // singular trial step: halve and retry
    Matrix u_mat = eval->u;
    const Eigen::Index k = u_mat.cols();
    if ((u_mat.transpose() * u_mat - Matrix::Identity(k, k)).norm() >
        StiefelPoint::kOrthTol) {
      continue;
    }
    StiefelPoint u_tau(std::move(u_mat));
    const double f_tau = eval_objective(inst, u_tau);
    if (!std::isfinite(f_tau)) continue;
    Matrix grad_tau = euclidean_gradient(inst, u_tau);
    const double d_tau = frob_dot(grad_tau, eval->u_prime);

    WolfeResult candidate{tau,   std::move(u_tau), f_tau, std::move(grad_tau),
                          dd0,   false,            false, m};
    const bool armijo = f_tau < f0 + cfg.rho1 * tau * dd0;
    const bool curvature = d_tau < cfg.rho2 * dd0;
    if (armijo && curvature) return candidate;
    smallest_evaluated = std::move(candidate);
  }

  if (smallest_evaluated) {
    smallest_evaluated->weak_step = true;
    smallest_evaluated->halvings = cfg.max_halvings;
    return *smallest_evaluated;
  }
  // Every trial step failed numerically; report no movement.
  WolfeResult r{0.0, u0, f0, grad0, dd0, true, false, cfg.max_halvings};
  return r;
}

StiefelPoint spectral_start(const ProblemInstance& inst) {
  return StiefelPoint(top_k_eigvecs(inst.a, inst.k).vectors);
}

// KKT residual measured at the canonical (eigen-aligned) representative of
// span(U); the raw basis is only determined up to rotation.
double kkt_aligned(const ProblemInstance& inst, const StiefelPoint& u) {
  return kkt_residual(inst, align_to_eigenbasis(inst, u));
}

TraceRecord make_record(int iter, double f, double kkt,
                        const std::array<double, 2>& phi) {
  TraceRecord rec;
  rec.iter = iter;
  rec.objective = f;
  rec.kkt = kkt;
  rec.phi = phi;
  return rec;
}

SolveResult finish_from_u(const ProblemInstance& inst, const StiefelPoint& u,
                          SolverTrace trace, double f, int iterations,
                          bool converged, bool weak, const std::string& method) {
  StiefelPoint aligned = align_to_eigenbasis(inst, u);
  ProjectionMatrix x = projector_from_basis(aligned);
  const double kkt = kkt_residual(inst, aligned);
  SolveResult result{std::move(x), std::move(aligned), std::move(trace), f, kkt,
                     iterations,   converged,          weak,             false,
                     false,        0.0,                method};
  return result;
}

SolveResult run_search_u(const ProblemInstance& inst, const SolverConfig& cfg,
                         bool perturbed) {
  cfg.validate();
  StiefelPoint u = spectral_start(inst);
  double f = eval_objective(inst, u);
  Matrix grad = euclidean_gradient(inst, u);
  Matrix x_prev = u.matrix() * u.matrix().transpose();

  SolverTrace trace;
  trace.index_set = default_phi_index_set(inst.dim());
  trace.records.push_back(
      make_record(0, f, kkt_aligned(inst, u), phi_map(x_prev, trace.index_set)));

  Rng perturb_rng(cfg.seed);
  bool weak = false;
  bool converged = false;
  int iterations = 0;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const SkewDirection dir = gradient_direction(grad, u);
    WolfeResult step = wolfe_backtrack_impl(inst, u, dir, cfg, f, grad);
    if (step.stationary) {
      converged = true;
      break;
    }
    weak |= step.weak_step;
    u = std::move(step.u);
    f = step.objective;
    grad = std::move(step.gradient);

    double delta_used = 0.0;
    if (perturbed) {
      const SkewDirection kick = random_direction(u, perturb_rng);
      const double delta = cfg.perturb_c * step.tau;
      if (delta > 0.0) {
        if (auto moved = cayley_curve_smw(u, kick, delta)) {
          u = std::move(*moved);
          f = eval_objective(inst, u);
          grad = euclidean_gradient(inst, u);
          delta_used = delta;
        }
      }
    }

    if (!std::isfinite(f)) {
      throw NumericalError("objective became non-finite during curvilinear search");
    }

    const Matrix x = u.matrix() * u.matrix().transpose();
    TraceRecord rec = make_record(iter, f, kkt_aligned(inst, u),
                                  phi_map(x, trace.index_set));
    rec.tau = step.tau;
    if (perturbed) rec.delta = delta_used;
    trace.records.push_back(rec);
    iterations = iter;

    const double diff = (x - x_prev).norm();
    x_prev = x;
    if (diff < cfg.epsilon) {
      converged = true;
      break;
    }
  }

  SolveResult result = finish_from_u(
      inst, std::move(u), std::move(trace), f, iterations, converged, weak,
      perturbed ? method_name(SolveMethod::PerturbedU)
                : method_name(SolveMethod::CurvilinearU));
  return result;
}

}  // namespace

WolfeResult wolfe_backtrack(const ProblemInstance& inst, const StiefelPoint& u0,
                            const SkewDirection& dir, const SolverConfig& cfg) {
  cfg.validate();
  const double f0 = eval_objective(inst, u0);
  const Matrix grad0 = euclidean_gradient(inst, u0);
  return wolfe_backtrack_impl(inst, u0, dir, cfg, f0, grad0);
}

SolveResult curvilinear_search_u(const ProblemInstance& inst, const SolverConfig& cfg) {
  return run_search_u(inst, cfg, false);
}

SolveResult perturbed_search_u(const ProblemInstance& inst, const SolverConfig& cfg) {
  return run_search_u(inst, cfg, true);
}

SolveResult curvilinear_search_x(const ProblemInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  const StiefelPoint u0 = spectral_start(inst);
  ProjectionMatrix x = projector_from_basis(u0);
  double f = eval_objective_x(inst, x.matrix());

  SolverTrace trace;
  trace.index_set = default_phi_index_set(inst.dim());
  trace.records.push_back(make_record(0, f, kkt_aligned(inst, u0),
                                      phi_map(x.matrix(), trace.index_set)));

  const Eigen::Index n = inst.dim();
  Matrix x_prev = x.matrix();
  bool weak = false;
  bool converged = false;
  int iterations = 0;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const Matrix grad = euclidean_gradient_x(inst, x.matrix());
    Matrix w = grad * x.matrix() - x.matrix() * grad;
    w = 0.5 * (w - w.transpose()).eval();  // exact skew symmetry
    const Matrix xprime0 = x.matrix() * w - w * x.matrix();
    const double dd0 = frob_dot(grad, xprime0);
    if (dd0 >= -stationary_threshold(f)) {
      converged = true;
      break;
    }

    bool accepted = false;
    std::optional<std::pair<ProjectionMatrix, double>> smallest;
    double smallest_tau = 0.0;
    double accepted_tau = 0.0;
    double tau = cfg.tau0;
    for (int m = 0; m <= cfg.max_halvings; ++m, tau /= 2.0) {
      const Matrix lhs = Matrix::Identity(n, n) + (tau / 2.0) * w;
      const auto lu = lhs.partialPivLu();
      const Matrix c = lu.solve(Matrix::Identity(n, n) - (tau / 2.0) * w);
      Matrix x_tau_mat = c * x.matrix() * c.transpose();
      x_tau_mat = 0.5 * (x_tau_mat + x_tau_mat.transpose()).eval();
      std::optional<ProjectionMatrix> x_tau;
      try {
        x_tau.emplace(std::move(x_tau_mat));
      } catch (const std::invalid_argument&) {
        continue;  // trial point off the manifold: halve and retry
      }
      const double f_tau = eval_objective_x(inst, x_tau->matrix());
      if (!std::isfinite(f_tau)) continue;
      // X'(tau) = D + D' with D = C'(tau) X0 C(tau)' and C' = -B W B,
      // B = (I + tau/2 W)^{-1}.
      const Matrix b = lu.solve(Matrix::Identity(n, n));
      const Matrix cprime = -(b * (w * b));
      const Matrix d = cprime * x.matrix() * c.transpose();
      const Matrix xprime = d + d.transpose();
      const Matrix grad_tau = euclidean_gradient_x(inst, x_tau->matrix());
      const double d_tau = frob_dot(grad_tau, xprime);

      smallest = {*x_tau, f_tau};
      smallest_tau = tau;
      const bool armijo = f_tau < f + cfg.rho1 * tau * dd0;
      const bool curvature = d_tau < cfg.rho2 * dd0;
      if (armijo && curvature) {
        x = std::move(*x_tau);
        f = f_tau;
        accepted_tau = tau;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!smallest) break;  // every trial failed numerically
      weak = true;
      x = std::move(smallest->first);
      f = smallest->second;
      accepted_tau = smallest_tau;
    }

    const StiefelPoint basis = basis_from_projector(x);
    TraceRecord rec = make_record(iter, f, kkt_aligned(inst, basis),
                                  phi_map(x.matrix(), trace.index_set));
    rec.tau = accepted_tau;
    trace.records.push_back(rec);
    iterations = iter;

    const double diff = (x.matrix() - x_prev).norm();
    x_prev = x.matrix();
    if (diff < cfg.epsilon) {
      converged = true;
      break;
    }
  }

  StiefelPoint u_final = align_to_eigenbasis(inst, basis_from_projector(x));
  const double kkt = kkt_residual(inst, u_final);
  SolveResult result{std::move(x), std::move(u_final), std::move(trace), f, kkt,
                     iterations,   converged,          weak,             false,
                     false,        0.0,                method_name(SolveMethod::CurvilinearX)};
  return result;
}

SolveResult admm_solve(const ProblemInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  const double lipschitz = inst.penalty.lipschitz();
  const bool theory = cfg.rho_admm <= 0.0 && inst.lambda > 0.0;
  double rho = cfg.rho_admm;
  if (rho <= 0.0) rho = inst.lambda > 0.0 ? 3.0 * inst.lambda * lipschitz : 1.0;
  const double tau_prox = 2.0 * inst.lambda / rho;

  const EigenResult start = top_k_eigvecs(inst.a, inst.k);
  Matrix u = start.vectors;
  Matrix x = u * u.transpose();
  x = 0.5 * (x + x.transpose()).eval();
  Matrix y = x;
  // Dual-consistent start: the Y-step optimality condition at a fixed point
  // reads Lambda = lambda * g'(Y), so the dual begins on that manifold.
  Matrix lambda_dual = Matrix::Zero(inst.dim(), inst.dim());
  if (inst.lambda != 0.0) lambda_dual = inst.lambda * g_matrix_x(inst, y);

  auto lagrangian = [&](const Matrix& xm, const Matrix& ym, const Matrix& lm) {
    double value = (inst.a - xm).squaredNorm();
    if (inst.lambda != 0.0) {
      double pen = 0.0;
      for (Eigen::Index j = 0; j < ym.cols(); ++j) {
        for (Eigen::Index i = 0; i < ym.rows(); ++i) {
          pen += inst.penalty.value(ym(i, j));
        }
      }
      value += inst.lambda * pen;
    }
    value += 0.5 * rho * (xm - ym).squaredNorm();
    value += frob_dot(lm, xm - ym);
    return value;
  };

  SolverTrace trace;
  trace.index_set = default_phi_index_set(inst.dim());
  {
    TraceRecord rec = make_record(0, eval_objective_x(inst, x),
                                  kkt_aligned(inst, StiefelPoint(u)),
                                  phi_map(x, trace.index_set));
    rec.lagrangian = lagrangian(x, y, lambda_dual);
    rec.primal_gap = (x - y).norm();
    trace.records.push_back(rec);
  }

  bool converged = false;
  bool degenerate = false;
  int iterations = 0;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const Matrix w = 2.0 * inst.a + rho * y - lambda_dual;
    const EigenResult eig = top_k_eigvecs(w, inst.k);
    degenerate |= eig.degenerate_gap;
    u = eig.vectors;
    x = u * u.transpose();
    x = 0.5 * (x + x.transpose()).eval();

    Matrix y_next(inst.dim(), inst.dim());
    if (tau_prox == 0.0) {
      y_next = x + lambda_dual / rho;
    } else {
      for (Eigen::Index j = 0; j < y_next.cols(); ++j) {
        for (Eigen::Index i = 0; i < y_next.rows(); ++i) {
          y_next(i, j) =
              prox(inst.penalty, x(i, j) + lambda_dual(i, j) / rho, tau_prox).z;
        }
      }
    }
    const double dy = (y_next - y).norm();
    const Matrix lambda_next = lambda_dual + rho * (x - y_next);
    const double dlambda = (lambda_next - lambda_dual).norm();
    y = std::move(y_next);
    lambda_dual = lambda_next;

    const double lag = lagrangian(x, y, lambda_dual);
    if (!std::isfinite(lag)) {
      throw NumericalError("ADMM augmented Lagrangian became non-finite");
    }
    const double primal = (x - y).norm();

    TraceRecord rec = make_record(iter, eval_objective_x(inst, x),
                                  kkt_aligned(inst, StiefelPoint(u)),
                                  phi_map(x, trace.index_set));
    rec.lagrangian = lag;
    rec.primal_gap = primal;
    rec.dy = dy;
    rec.dlambda = dlambda;
    trace.records.push_back(rec);
    iterations = iter;

    if (std::max(primal, dy) < cfg.epsilon) {
      converged = true;
      break;
    }
  }

  ProjectionMatrix x_final(x);
  StiefelPoint u_final = align_to_eigenbasis(inst, StiefelPoint(u));
  const double f = eval_objective_x(inst, x_final.matrix());
  const double kkt = kkt_residual(inst, u_final);
  SolveResult result{std::move(x_final), std::move(u_final), std::move(trace),
                     f,                  kkt,                iterations,
                     converged,          false,              degenerate,
                     theory,             rho,                method_name(SolveMethod::Admm)};
  return result;
}

SolveResult best_of_solve(const ProblemInstance& inst, const SolverConfig& cfg) {
  SolveResult curvilinear = curvilinear_search_u(inst, cfg);
  SolveResult admm = admm_solve(inst, cfg);
  return admm.objective < curvilinear.objective ? std::move(admm)
                                                : std::move(curvilinear);
}

SolveResult solve(const ProblemInstance& inst, SolveMethod method,
                  const SolverConfig& cfg) {
  switch (method) {
    case SolveMethod::CurvilinearU: return curvilinear_search_u(inst, cfg);
    case SolveMethod::PerturbedU: return perturbed_search_u(inst, cfg);
    case SolveMethod::CurvilinearX: return curvilinear_search_x(inst, cfg);
    case SolveMethod::Admm: return admm_solve(inst, cfg);
    case SolveMethod::BestOf: return best_of_solve(inst, cfg);
  }
  throw std::invalid_argument("unknown solve method");
}

}  // namespace rpma
