#include "nsns/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nsns {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_vtk(const std::string& path, const MixedSpace& space, const SolutionState& state,
               const std::string& title) {
  const Mesh& mesh = *space.mesh;
  std::ostringstream out;
  out.precision(12);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& p : mesh.nodes) out << p.x << " " << p.y << " 0\n";
  out << "CELLS " << mesh.num_triangles() << " " << 4 * mesh.num_triangles() << "\n";
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.num_triangles() << "\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) out << "5\n";
  out << "POINT_DATA " << mesh.num_nodes() << "\n";
  out << "VECTORS velocity double\n";
  for (int n = 0; n < mesh.num_nodes(); ++n) out << state.velocity[2 * n] << " " << state.velocity[2 * n + 1] << " 0\n";
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int n = 0; n < mesh.num_nodes(); ++n) out << state.pressure[n] << "\n";
  write_text_file(path, out.str());
}

void write_raw_state(const std::string& path, const SolutionState& state) {
  std::ostringstream out;
  out.precision(17);
  out << "nsns-state 1\n";
  out << "velocity " << state.velocity.size() << "\n";
  for (Eigen::Index i = 0; i < state.velocity.size(); ++i) out << state.velocity[i] << "\n";
  out << "pressure " << state.pressure.size() << "\n";
  for (Eigen::Index i = 0; i < state.pressure.size(); ++i) out << state.pressure[i] << "\n";
  out << "multiplier " << state.multiplier << "\n";
  write_text_file(path, out.str());
}

SolutionState read_raw_state(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string kw;
  int version = 0;
  in >> kw >> version;
  if (kw != "nsns-state" || version != 1) throw std::runtime_error("not a nsns-state file: " + path);
  SolutionState s;
  Eigen::Index n = 0;
  in >> kw >> n;
  if (kw != "velocity") throw std::runtime_error("malformed state file: " + path);
  s.velocity.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) in >> s.velocity[i];
  in >> kw >> n;
  if (kw != "pressure") throw std::runtime_error("malformed state file: " + path);
  s.pressure.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) in >> s.pressure[i];
  in >> kw >> s.multiplier;
  if (kw != "multiplier" || !in) throw std::runtime_error("malformed state file: " + path);
  return s;
}

std::string format_rate_csv(const RateTable& table) {
  std::ostringstream out;
  out << "mesh,dof,newton_its,p_l2,p_rate,u_h1,u_h1_rate,u_l2,u_l2_rate,slip\n";
  for (const auto& r : table.rows) {
    out << r.mesh_label << "," << r.dof << "," << r.newton_its << ",";
    out << sci(r.p_l2) << "," << (r.has_rates ? fixed2(r.rate_p) : "") << ",";
    out << sci(r.u_h1) << "," << (r.has_rates ? fixed2(r.rate_h1) : "") << ",";
    out << sci(r.u_l2) << "," << (r.has_rates ? fixed2(r.rate_l2) : "") << ",";
    out << sci(r.slip) << "\n";
  }
  return out.str();
}

void write_rate_csv(const std::string& path, const RateTable& table) { write_text_file(path, format_rate_csv(table)); }

std::string diagnostics_csv_header() { return "step,time,kinetic_energy,slip_norm\n"; }

std::string format_diagnostics_row(const StepDiagnostics& d) {
  std::ostringstream out;
  out.precision(12);
  out << d.step << "," << d.time << "," << d.kinetic_energy << "," << d.slip_norm << "\n";
  return out.str();
}

}  // namespace nsns
