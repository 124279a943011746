// Command-line front end: generate synthetic data, solve, evaluate, sweep.
// Talks to the solver library exclusively through the C API in rpma.h.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rpma.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void die(int exit_code, const std::string& message) {
  throw CliError{exit_code, message};
}

// Maps a C-API status to the CLI exit code and raises.
void check(int status, const std::string& context) {
  if (status == RPMA_OK) return;
  int exit_code = kExitNumerical;
  if (status == RPMA_ERROR_INVALID_ARGUMENT) exit_code = kExitUsage;
  if (status == RPMA_ERROR_DATA) exit_code = kExitData;
  die(exit_code, context + ": " + rpma_last_error());
}

struct MatrixDeleter {
  void operator()(rpma_matrix* m) const { rpma_matrix_free(m); }
};
struct LabelsDeleter {
  void operator()(rpma_labels* l) const { rpma_labels_free(l); }
};
struct SolutionDeleter {
  void operator()(rpma_solution* s) const { rpma_solution_free(s); }
};
using MatrixPtr = std::unique_ptr<rpma_matrix, MatrixDeleter>;
using LabelsPtr = std::unique_ptr<rpma_labels, LabelsDeleter>;
using SolutionPtr = std::unique_ptr<rpma_solution, SolutionDeleter>;

MatrixPtr load_matrix(const std::string& path) {
  rpma_matrix* m = nullptr;
  check(rpma_matrix_load_csv(path.c_str(), &m), "loading '" + path + "'");
  return MatrixPtr(m);
}

LabelsPtr load_labels(const std::string& path) {
  rpma_labels* l = nullptr;
  check(rpma_labels_load_csv(path.c_str(), &l), "loading '" + path + "'");
  return LabelsPtr(l);
}

std::vector<double> parse_grid(const std::string& csv, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t pos = 0;
      values.push_back(std::stod(cell, &pos));
      if (pos != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      die(kExitUsage, flag + ": cannot parse '" + cell + "' as a number");
    }
  }
  if (values.empty()) die(kExitUsage, flag + ": empty grid");
  return values;
}

struct PenaltyFlags {
  std::string name = "nonneg";
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> delta;
};

int32_t resolve_penalty(const PenaltyFlags& p, rpma_solve_options* opts) {
  if (p.name == "bounded") {
    if (!p.alpha || !p.beta) {
      die(kExitUsage, "--penalty bounded requires --alpha and --beta");
    }
    opts->alpha = *p.alpha;
    opts->beta = *p.beta;
    return RPMA_PENALTY_BOUNDED;
  }
  if (p.name == "nonneg") {
    return RPMA_PENALTY_NONNEG;
  }
  if (p.name == "huber") {
    if (!p.delta) die(kExitUsage, "--penalty huber requires --delta");
    opts->delta = *p.delta;
    return RPMA_PENALTY_HUBER;
  }
  die(kExitUsage, "unknown penalty '" + p.name + "'");
}

int32_t resolve_method(const std::string& name) {
  if (name == "curvilinear-u") return RPMA_METHOD_CURVILINEAR_U;
  if (name == "perturbed-u") return RPMA_METHOD_PERTURBED_U;
  if (name == "curvilinear-x") return RPMA_METHOD_CURVILINEAR_X;
  if (name == "admm") return RPMA_METHOD_ADMM;
  if (name == "best-of") return RPMA_METHOD_BEST_OF;
  die(kExitUsage, "unknown method '" + name + "'");
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) die(kExitData, "cannot open '" + path + "' for writing");
  out << body;
  if (!out) die(kExitData, "failed writing '" + path + "'");
}

void warn_if_asymmetric(const rpma_matrix* affinity, const std::string& path) {
  double asym = 0.0;
  if (rpma_matrix_asymmetry(affinity, &asym) == RPMA_OK && asym > 1e-8) {
    std::cerr << "warning: affinity '" << path << "' has asymmetry ||A-A'||_F = "
              << asym << "; it will be symmetrized\n";
  }
}

struct SolveArtifacts {
  SolutionPtr solution;
  MatrixPtr projector;
  MatrixPtr basis;
  LabelsPtr labels;  // k-means on the basis rows
  double objective = 0.0;
  double kkt = 0.0;
  int64_t iterations = 0;
  int32_t converged = 0;
  double wall_ms = 0.0;
  std::string method_used;
  std::optional<double> acc;
  std::optional<double> nmi_value;
  std::optional<double> frob;
};

SolveArtifacts run_solve(const rpma_matrix* affinity, int32_t k,
                         const rpma_solve_options& opts, int32_t kmeans_restarts,
                         const rpma_labels* truth) {
  SolveArtifacts art;
  const auto t0 = std::chrono::steady_clock::now();
  rpma_solution* raw = nullptr;
  check(rpma_solve(affinity, k, &opts, &raw), "solving");
  art.solution.reset(raw);
  const auto t1 = std::chrono::steady_clock::now();
  art.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  rpma_matrix* proj = nullptr;
  check(rpma_solution_projector(art.solution.get(), &proj), "reading projector");
  art.projector.reset(proj);
  rpma_matrix* basis = nullptr;
  check(rpma_solution_basis(art.solution.get(), &basis), "reading basis");
  art.basis.reset(basis);
  check(rpma_solution_objective(art.solution.get(), &art.objective), "summary");
  check(rpma_solution_kkt_residual(art.solution.get(), &art.kkt), "summary");
  check(rpma_solution_iterations(art.solution.get(), &art.iterations), "summary");
  check(rpma_solution_converged(art.solution.get(), &art.converged), "summary");
  const char* method = nullptr;
  check(rpma_solution_method(art.solution.get(), &method), "summary");
  art.method_used = method;

  rpma_labels* pred = nullptr;
  check(rpma_kmeans_rows(art.basis.get(), k, opts.seed, kmeans_restarts, &pred),
        "clustering");
  art.labels.reset(pred);

  if (truth != nullptr) {
    double v = 0.0;
    check(rpma_accuracy(art.labels.get(), truth, &v), "scoring");
    art.acc = v;
    check(rpma_nmi(art.labels.get(), truth, &v), "scoring");
    art.nmi_value = v;
    check(rpma_frobenius_to_ideal(art.projector.get(), truth, &v), "scoring");
    art.frob = v;
  }
  return art;
}

ordered_json config_json(const rpma_solve_options& opts, const std::string& method,
                         const std::string& penalty, int32_t k,
                         int32_t kmeans_restarts) {
  ordered_json j;
  j["method"] = method;
  j["penalty"] = penalty;
  j["k"] = k;
  j["lambda"] = opts.lambda;
  if (penalty == "bounded") {
    j["alpha"] = opts.alpha;
    j["beta"] = std::isinf(opts.beta) ? ordered_json("inf") : ordered_json(opts.beta);
  }
  if (penalty == "huber") j["delta"] = opts.delta;
  j["rho1"] = opts.rho1;
  j["rho2"] = opts.rho2;
  j["tau0"] = opts.tau0;
  j["epsilon"] = opts.epsilon;
  j["max_iters"] = opts.max_iters;
  j["max_halvings"] = opts.max_halvings;
  j["perturb_c"] = opts.perturb_c;
  j["rho_admm"] = opts.rho_admm;
  j["seed"] = opts.seed;
  j["kmeans_restarts"] = kmeans_restarts;
  return j;
}

// -------------------------------------------------------------------
// Subcommand configuration

struct SynthArgs {
  int64_t n = 0;
  int32_t k = 0;
  double p_in = 0.0;
  double p_out = 0.0;
  std::string sizes;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

struct SolverFlags {
  std::string method = "admm";
  PenaltyFlags penalty;
  double lambda = 0.0;
  rpma_solve_options opts{};
  std::uint64_t seed = 0;
  int32_t kmeans_restarts = 10;
};

void add_solver_flags(CLI::App* cmd, SolverFlags* f) {
  rpma_solve_options_init(&f->opts);
  cmd->add_option("--method", f->method,
                  "curvilinear-u | perturbed-u | curvilinear-x | admm | best-of");
  cmd->add_option("--penalty", f->penalty.name, "bounded | nonneg | huber");
  cmd->add_option("--lambda", f->lambda, "penalty weight")->required();
  auto optional_double = [](std::optional<double>* slot) {
    return [slot](const CLI::results_t& r) {
      try {
        std::size_t pos = 0;
        *slot = std::stod(r[0], &pos);
        return pos == r[0].size();
      } catch (const std::exception&) {
        return false;
      }
    };
  };
  cmd->add_option("--alpha", optional_double(&f->penalty.alpha),
                  "bounded penalty lower bound");
  cmd->add_option("--beta", optional_double(&f->penalty.beta),
                  "bounded penalty upper bound (inf allowed)");
  cmd->add_option("--delta", optional_double(&f->penalty.delta),
                  "huber threshold");
  cmd->add_option("--rho1", f->opts.rho1, "Wolfe sufficient-decrease constant");
  cmd->add_option("--rho2", f->opts.rho2, "Wolfe curvature constant");
  cmd->add_option("--tau0", f->opts.tau0, "initial step");
  cmd->add_option("--epsilon", f->opts.epsilon, "convergence tolerance");
  cmd->add_option("--max-iters", f->opts.max_iters, "iteration cap");
  cmd->add_option("--max-halvings", f->opts.max_halvings, "backtracking cap");
  cmd->add_option("--perturb-c", f->opts.perturb_c, "perturbation scale c");
  cmd->add_option("--rho-admm", f->opts.rho_admm,
                  "ADMM penalty rho (<= 0 selects 3*lambda*lipschitz)");
  cmd->add_option("--seed", f->seed, "random seed");
  cmd->add_option("--kmeans-restarts", f->kmeans_restarts, "k-means restarts");
}

void finalize_solver_flags(SolverFlags* f) {
  f->opts.method = resolve_method(f->method);
  f->opts.penalty = resolve_penalty(f->penalty, &f->opts);
  f->opts.lambda = f->lambda;
  f->opts.seed = f->seed;
  if (f->opts.method == RPMA_METHOD_ADMM || f->opts.method == RPMA_METHOD_BEST_OF) {
    if (f->opts.rho_admm > 0.0) {
      std::cerr << "warning: --rho-admm overrides the default 3*lambda*lipschitz; "
                   "the ADMM descent guarantees assume the default\n";
    }
  }
}

int run_synth(const SynthArgs& args) {
  std::vector<int64_t> sizes;
  if (!args.sizes.empty()) {
    std::stringstream ss(args.sizes);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        sizes.push_back(std::stoll(cell));
      } catch (const std::exception&) {
        die(kExitUsage, "--sizes: cannot parse '" + cell + "' as an integer");
      }
    }
  }
  if (args.p_out > args.p_in) {
    std::cerr << "warning: p_out > p_in inverts the community structure\n";
  }
  rpma_matrix* affinity = nullptr;
  rpma_labels* labels = nullptr;
  check(rpma_sbm_generate(args.n, args.k, args.p_in, args.p_out,
                          sizes.empty() ? nullptr : sizes.data(), args.seed,
                          &affinity, &labels),
        "generating SBM data");
  MatrixPtr affinity_ptr(affinity);
  LabelsPtr labels_ptr(labels);
  const std::string affinity_path = args.out_dir + "/affinity.csv";
  const std::string labels_path = args.out_dir + "/labels.csv";
  check(rpma_matrix_save_csv(affinity, affinity_path.c_str()),
        "writing '" + affinity_path + "'");
  check(rpma_labels_save_csv(labels, labels_path.c_str()),
        "writing '" + labels_path + "'");
  std::cout << "wrote " << affinity_path << " and " << labels_path << "\n";
  return 0;
}

void check_label_length(const rpma_labels* labels, const rpma_matrix* affinity,
                        const std::string& what) {
  int64_t n_labels = 0, n_rows = 0;
  check(rpma_labels_size(labels, &n_labels), "reading labels");
  check(rpma_matrix_rows(affinity, &n_rows), "reading affinity");
  if (n_labels != n_rows) {
    die(kExitData, what + ": " + std::to_string(n_labels) +
                       " labels do not match matrix dimension " +
                       std::to_string(n_rows));
  }
}

int run_solve_cmd(const std::string& affinity_path, const std::string& labels_path,
                  int32_t k, SolverFlags* flags, const std::string& out_dir) {
  finalize_solver_flags(flags);
  MatrixPtr affinity = load_matrix(affinity_path);
  warn_if_asymmetric(affinity.get(), affinity_path);
  LabelsPtr truth;
  if (!labels_path.empty()) {
    truth = load_labels(labels_path);
    check_label_length(truth.get(), affinity.get(), "'" + labels_path + "'");
  }

  SolveArtifacts art = run_solve(affinity.get(), k, flags->opts,
                                 flags->kmeans_restarts, truth.get());

  const std::string proj_path = out_dir + "/projector.csv";
  const std::string labels_out = out_dir + "/labels.csv";
  const std::string trace_json = out_dir + "/trace.json";
  const std::string trace_csv = out_dir + "/trace.csv";
  const std::string summary_path = out_dir + "/summary.json";
  check(rpma_matrix_save_csv(art.projector.get(), proj_path.c_str()),
        "writing '" + proj_path + "'");
  check(rpma_labels_save_csv(art.labels.get(), labels_out.c_str()),
        "writing '" + labels_out + "'");
  check(rpma_solution_write_trace_json(art.solution.get(), trace_json.c_str()),
        "writing '" + trace_json + "'");
  check(rpma_solution_write_trace_csv(art.solution.get(), trace_csv.c_str()),
        "writing '" + trace_csv + "'");

  ordered_json summary;
  summary["F_final"] = art.objective;
  summary["kkt"] = art.kkt;
  if (art.acc) summary["acc"] = *art.acc;
  if (art.nmi_value) summary["nmi"] = *art.nmi_value;
  if (art.frob) summary["frob"] = *art.frob;
  summary["iters"] = art.iterations;
  summary["wall_ms"] = art.wall_ms;
  summary["converged"] = art.converged != 0;
  summary["method_used"] = art.method_used;
  int32_t flag = 0;
  check(rpma_solution_weak_step(art.solution.get(), &flag), "summary");
  summary["weak_step"] = flag != 0;
  check(rpma_solution_degenerate_gap(art.solution.get(), &flag), "summary");
  summary["degenerate_gap"] = flag != 0;
  double rho_used = 0.0;
  check(rpma_solution_rho_used(art.solution.get(), &rho_used), "summary");
  if (rho_used > 0.0) summary["rho_used"] = rho_used;
  summary["config"] = config_json(flags->opts, flags->method, flags->penalty.name,
                                  k, flags->kmeans_restarts);
  summary["config"]["affinity"] = affinity_path;
  if (!labels_path.empty()) summary["config"]["labels"] = labels_path;

  write_text(summary_path, summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int run_eval(const std::string& pred_path, const std::string& truth_path,
             const std::string& projector_path, const std::string& out_path) {
  LabelsPtr pred = load_labels(pred_path);
  LabelsPtr truth = load_labels(truth_path);
  int64_t n_pred = 0, n_truth = 0;
  check(rpma_labels_size(pred.get(), &n_pred), "reading labels");
  check(rpma_labels_size(truth.get(), &n_truth), "reading labels");
  if (n_pred != n_truth) {
    die(kExitData, "label files disagree in length: " + std::to_string(n_pred) +
                       " vs " + std::to_string(n_truth));
  }
  double acc = 0.0, nmi_value = 0.0;
  check(rpma_accuracy(pred.get(), truth.get(), &acc), "scoring");
  check(rpma_nmi(pred.get(), truth.get(), &nmi_value), "scoring");
  ordered_json j;
  j["acc"] = acc;
  j["nmi"] = nmi_value;
  if (!projector_path.empty()) {
    MatrixPtr projector = load_matrix(projector_path);
    double frob = 0.0;
    check(rpma_frobenius_to_ideal(projector.get(), truth.get(), &frob), "scoring");
    j["frob"] = frob;
  }
  const std::string body = j.dump(2) + "\n";
  std::cout << body;
  if (!out_path.empty()) write_text(out_path, body);
  return 0;
}

struct SweepRow {
  std::string penalty;
  double lambda = 0.0;
  std::optional<double> delta;
  double frob = 0.0;
  double acc = 0.0;
  double nmi_value = 0.0;
};

// Aggregates sweep rows into the (penalty, lambda, delta) x (frob, acc, nmi)
// table. Empty input and inconsistent rows are rejected.
std::string report_table(const std::vector<SweepRow>& rows) {
  if (rows.empty()) die(kExitData, "report table: no sweep rows");
  for (const SweepRow& row : rows) {
    if (row.penalty != rows.front().penalty) {
      die(kExitData, "report table: inconsistent penalty across rows");
    }
    if (row.delta.has_value() != rows.front().delta.has_value()) {
      die(kExitData, "report table: inconsistent delta column across rows");
    }
  }
  std::ostringstream out;
  out << "penalty,lambda,delta,frob,acc,nmi\n";
  for (const SweepRow& row : rows) {
    out << row.penalty << ',' << ordered_json(row.lambda).dump() << ',';
    if (row.delta) out << ordered_json(*row.delta).dump();
    out << ',' << ordered_json(row.frob).dump() << ','
        << ordered_json(row.acc).dump() << ',' << ordered_json(row.nmi_value).dump()
        << '\n';
  }
  return out.str();
}

int run_sweep(const std::string& affinity_path, const std::string& labels_path,
              int32_t k, SolverFlags* flags, const std::string& lambda_grid,
              const std::string& delta_grid, const std::string& out_path) {
  const std::vector<double> lambdas = parse_grid(lambda_grid, "--lambda-grid");
  std::vector<double> deltas;
  if (flags->penalty.name == "huber") {
    if (delta_grid.empty()) {
      if (!flags->penalty.delta) {
        die(kExitUsage, "--penalty huber requires --delta or --delta-grid");
      }
      deltas.push_back(*flags->penalty.delta);
    } else {
      deltas = parse_grid(delta_grid, "--delta-grid");
    }
    flags->penalty.delta = deltas.front();
  } else if (!delta_grid.empty()) {
    die(kExitUsage, "--delta-grid only applies to --penalty huber");
  }
  finalize_solver_flags(flags);

  MatrixPtr affinity = load_matrix(affinity_path);
  warn_if_asymmetric(affinity.get(), affinity_path);
  LabelsPtr truth = load_labels(labels_path);
  check_label_length(truth.get(), affinity.get(), "'" + labels_path + "'");

  std::vector<SweepRow> rows;
  const bool has_delta = !deltas.empty();
  const std::size_t delta_count = has_delta ? deltas.size() : 1;
  for (std::size_t di = 0; di < delta_count; ++di) {
    for (double lambda : lambdas) {
      rpma_solve_options opts = flags->opts;
      opts.lambda = lambda;
      if (has_delta) opts.delta = deltas[di];
      SolveArtifacts art =
          run_solve(affinity.get(), k, opts, flags->kmeans_restarts, truth.get());
      SweepRow row;
      row.penalty = flags->penalty.name;
      row.lambda = lambda;
      if (has_delta) row.delta = deltas[di];
      row.frob = art.frob.value_or(0.0);
      row.acc = art.acc.value_or(0.0);
      row.nmi_value = art.nmi_value.value_or(0.0);
      rows.push_back(row);
    }
  }
  const std::string table = report_table(rows);
  write_text(out_path, table);
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized projection matrix approximation toolkit"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "generate a stochastic block model instance");
  synth_cmd->add_option("--n", synth.n, "sample count")->required();
  synth_cmd->add_option("--k", synth.k, "community count")->required();
  synth_cmd->add_option("--p-in", synth.p_in, "within-community probability")
      ->required();
  synth_cmd->add_option("--p-out", synth.p_out, "between-community probability")
      ->required();
  synth_cmd->add_option("--sizes", synth.sizes, "per-community sizes, e.g. 20,20");
  synth_cmd->add_option("--seed", synth.seed, "random seed");
  synth_cmd->add_option("--out-dir", synth.out_dir, "output directory");

  std::string affinity_path, labels_path, out_dir = ".";
  int32_t k = 0;
  SolverFlags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one instance");
  solve_cmd->add_option("--affinity", affinity_path, "affinity CSV")->required();
  solve_cmd->add_option("--labels", labels_path, "ground-truth labels CSV");
  solve_cmd->add_option("--k", k, "target rank / cluster count")->required();
  solve_cmd->add_option("--out-dir", out_dir, "output directory");
  add_solver_flags(solve_cmd, &solve_flags);

  std::string pred_path, truth_path, projector_path, eval_out;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score labels against truth");
  eval_cmd->add_option("--pred", pred_path, "predicted labels CSV")->required();
  eval_cmd->add_option("--truth", truth_path, "ground-truth labels CSV")->required();
  eval_cmd->add_option("--projector", projector_path,
                       "projector CSV for the Frobenius distance");
  eval_cmd->add_option("--out", eval_out, "also write the metrics JSON here");

  std::string sweep_affinity, sweep_labels, lambda_grid, delta_grid,
      sweep_out = "sweep.csv";
  int32_t sweep_k = 0;
  SolverFlags sweep_flags;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a lambda (and delta) grid");
  sweep_cmd->add_option("--affinity", sweep_affinity, "affinity CSV")->required();
  sweep_cmd->add_option("--labels", sweep_labels, "ground-truth labels CSV")
      ->required();
  sweep_cmd->add_option("--k", sweep_k, "target rank / cluster count")->required();
  sweep_cmd->add_option("--lambda-grid", lambda_grid, "comma-separated lambdas")
      ->required();
  sweep_cmd->add_option("--delta-grid", delta_grid, "comma-separated deltas (huber)");
  sweep_cmd->add_option("--out", sweep_out, "output table CSV");
  add_solver_flags(sweep_cmd, &sweep_flags);
  // The sweep supplies lambda per cell; --lambda is not meaningful here.
  sweep_cmd->get_option("--lambda")->required(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::ostringstream msg;
    msg << e.what();
    std::cerr << ordered_json{{"error", {{"code", kExitUsage}, {"message", msg.str()}}}}
                     .dump()
              << "\n";
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (solve_cmd->parsed()) {
      return run_solve_cmd(affinity_path, labels_path, k, &solve_flags, out_dir);
    }
    if (eval_cmd->parsed()) {
      return run_eval(pred_path, truth_path, projector_path, eval_out);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep(sweep_affinity, sweep_labels, sweep_k, &sweep_flags,
                       lambda_grid, delta_grid, sweep_out);
    }
  } catch (const CliError& e) {
    std::cerr << ordered_json{{"error",
                               {{"code", e.exit_code}, {"message", e.message}}}}
                     .dump()
              << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << ordered_json{{"error",
                               {{"code", kExitNumerical}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return kExitNumerical;
  }
  return 0;
}
