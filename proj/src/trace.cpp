#include "rpma/trace.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rpma/errors.hpp"

namespace rpma {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json record_to_json(const TraceRecord& r) {
  ordered_json j;
  j["iter"] = r.iter;
  j["F"] = r.objective;
  j["kkt"] = r.kkt;
  if (r.tau) j["tau"] = *r.tau;
  if (r.delta) j["delta"] = *r.delta;
  j["phi"] = {r.phi[0], r.phi[1]};
  if (r.lagrangian) j["lagrangian"] = *r.lagrangian;
  if (r.primal_gap) j["primal_gap"] = *r.primal_gap;
  if (r.dy) j["dy"] = *r.dy;
  if (r.dlambda) j["dlambda"] = *r.dlambda;
  return j;
}

void append_cell(std::ostringstream& out, const std::optional<double>& v) {
  out << ',';
  if (v) out << ordered_json(*v).dump();
}

}  // namespace

std::string trace_to_json(const SolverTrace& trace) {
  ordered_json j;
  j["index_set"] = trace.index_set;
  j["records"] = ordered_json::array();
  for (const TraceRecord& r : trace.records) {
    j["records"].push_back(record_to_json(r));
  }
  return j.dump(2);
}

std::string trace_to_csv(const SolverTrace& trace) {
  std::ostringstream out;
  out << "iter,F,kkt,tau,delta,phi_a,phi_b,lagrangian,primal_gap,dy,dlambda\n";
  for (const TraceRecord& r : trace.records) {
    out << r.iter << ',' << ordered_json(r.objective).dump() << ','
        << ordered_json(r.kkt).dump();
    append_cell(out, r.tau);
    append_cell(out, r.delta);
    out << ',' << ordered_json(r.phi[0]).dump() << ','
        << ordered_json(r.phi[1]).dump();
    append_cell(out, r.lagrangian);
    append_cell(out, r.primal_gap);
    append_cell(out, r.dy);
    append_cell(out, r.dlambda);
    out << '\n';
  }
  return out.str();
}

namespace {

void write_file(const std::string& body, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << body;
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace

void write_trace_json(const SolverTrace& trace, const std::string& path) {
  write_file(trace_to_json(trace) + "\n", path);
}

void write_trace_csv(const SolverTrace& trace, const std::string& path) {
  write_file(trace_to_csv(trace), path);
}

}  // namespace rpma
