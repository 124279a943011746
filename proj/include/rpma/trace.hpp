#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rpma {

// One iteration of any solver. Field order in the serialized forms is fixed:
// iter, F, kkt, tau, delta?, phi, lagrangian?, primal_gap?, dy?, dlambda?.
struct TraceRecord {
  int iter = 0;
  double objective = 0.0;  // F
  double kkt = 0.0;
  std::optional<double> tau;
  std::optional<double> delta;
  std::array<double, 2> phi{0.0, 0.0};
  std::optional<double> lagrangian;
  std::optional<double> primal_gap;
  std::optional<double> dy;
  std::optional<double> dlambda;
};

struct SolverTrace {
  std::vector<int> index_set;  // the I used by the phi diagnostic (0-based)
  std::vector<TraceRecord> records;
};

std::string trace_to_json(const SolverTrace& trace);
std::string trace_to_csv(const SolverTrace& trace);

void write_trace_json(const SolverTrace& trace, const std::string& path);
void write_trace_csv(const SolverTrace& trace, const std::string& path);

}  // namespace rpma
