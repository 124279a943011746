#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpma/objective.hpp"
#include "rpma/trace.hpp"

namespace rpma {

struct SolverConfig {
  double rho1 = 1e-4;    // sufficient-decrease constant, 0 < rho1 <= rho2 < 1
  double rho2 = 0.9;     // curvature constant
  double tau0 = 1.0;     // initial trial step
  double epsilon = 1e-6; // stop when ||X_k - X_{k-1}||_F < epsilon
  int max_iters = 500;
  int max_halvings = 50; // backtracking cap per step
  double perturb_c = 0.1;  // perturbation step delta_k = c * tau_k
  double rho_admm = 0.0;   // <= 0 selects the default 3*lambda*lipschitz
                           // (1.0 when lambda = 0, where that product degenerates)
  std::uint64_t seed = 0;

  void validate() const;
};

enum class SolveMethod { CurvilinearU, PerturbedU, CurvilinearX, Admm, BestOf };

std::string method_name(SolveMethod m);
std::optional<SolveMethod> method_from_name(const std::string& name);

struct SolveResult {
  ProjectionMatrix x;
  StiefelPoint u;
  SolverTrace trace;
  double objective = 0.0;
  double kkt = 0.0;
  int iterations = 0;
  bool converged = false;
  bool weak_step = false;       // a line search exhausted max_halvings
  bool degenerate_gap = false;  // ADMM eigengap fell below 1e-12 at some step
  bool theory_rho = false;      // ADMM ran with the default rho = 3*lambda*l
  double rho_used = 0.0;        // 0 for non-ADMM methods
  std::string method;
};

// One curvilinear line search along the factored direction W = P Q' from u0.
// Accepts the first tau = tau0 / 2^m (m <= max_halvings) with
//   F(U(tau)) <  F(U0) + rho1 * tau * dd0   and
//   <grad F(U(tau)), U'(tau)>  <  rho2 * dd0,
// where dd0 = <grad F(U0), U'(0)> < 0. When the budget is exhausted the
// smallest successfully evaluated tau is returned with weak_step set.
struct WolfeResult {
  double tau = 0.0;
  StiefelPoint u;
  double objective = 0.0;
  Matrix gradient;   // euclidean gradient at the accepted point
  double dd0 = 0.0;
  bool weak_step = false;
  bool stationary = false;  // dd0 was numerically zero; no step taken
  int halvings = 0;
};

WolfeResult wolfe_backtrack(const ProblemInstance& inst, const StiefelPoint& u0,
                            const SkewDirection& dir, const SolverConfig& cfg);

SolveResult curvilinear_search_u(const ProblemInstance& inst, const SolverConfig& cfg);
SolveResult perturbed_search_u(const ProblemInstance& inst, const SolverConfig& cfg);
SolveResult curvilinear_search_x(const ProblemInstance& inst, const SolverConfig& cfg);
SolveResult admm_solve(const ProblemInstance& inst, const SolverConfig& cfg);

// Runs curvilinear_search_u and admm_solve from the same spectral start and
// returns the result with the smaller objective.
SolveResult best_of_solve(const ProblemInstance& inst, const SolverConfig& cfg);

SolveResult solve(const ProblemInstance& inst, SolveMethod method,
                  const SolverConfig& cfg);

// Two-dimensional column-sum diagnostic:
//   phi(X) = [ n^2/2 * sum_{j in I, all i} X_ij,  n^2/2 * sum_{j notin I, all i} X_ij ].
// index_set holds 0-based column indices, must be distinct, in range, and of
// size ceil(n/2).
std::array<double, 2> phi_map(const Matrix& x, const std::vector<int>& index_set);

// First ceil(n/2) indices, the default I used in traces.
std::vector<int> default_phi_index_set(Eigen::Index n);

}  // namespace rpma
