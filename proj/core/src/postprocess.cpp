#include "pff/postprocess.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "pff/errors.hpp"

namespace pff {

namespace {

// Shortest decimal form that round-trips to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

double crack_extension(const Vec& phi, const Mesh& mesh, const std::array<double, 2>& tip,
                       const std::vector<int>& exclude_nodes, double threshold) {
  std::vector<uint8_t> excluded(mesh.num_nodes(), 0);
  for (int n : exclude_nodes) excluded[n] = 1;
  double best = 0.0;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    if (excluded[n] || phi[n] < threshold) continue;
    const double dx = mesh.nodes[n][0] - tip[0];
    const double dy = mesh.nodes[n][1] - tip[1];
    best = std::max(best, std::hypot(dx, dy));
  }
  return best;
}

namespace {

void write_scalar_field(std::ofstream& os, const std::string& name,
                        const std::vector<double>& values) {
  if (name.empty()) throw ConfigError("VTK field name must not be empty");
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) os << fmt(v) << "\n";
}

}  // namespace

void write_vtk(const Mesh& mesh, const std::map<std::string, std::vector<double>>& point_fields,
               const std::map<std::string, std::vector<double>>& cell_fields,
               const std::string& path) {
  for (const auto& [name, values] : point_fields) {
    if (name.empty()) throw ConfigError("VTK field name must not be empty");
    if (static_cast<int>(values.size()) != mesh.num_nodes())
      throw ConfigError("point field '" + name + "' has wrong size");
  }
  for (const auto& [name, values] : cell_fields) {
    if (name.empty()) throw ConfigError("VTK field name must not be empty");
    if (static_cast<int>(values.size()) != mesh.num_elements())
      throw ConfigError("cell field '" + name + "' has wrong size");
  }

  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << "# vtk DataFile Version 3.0\n";
  os << "fatigue phase-field output\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& p : mesh.nodes) os << fmt(p[0]) << " " << fmt(p[1]) << " 0\n";
  os << "CELLS " << mesh.num_elements() << " " << 5 * mesh.num_elements() << "\n";
  for (const auto& e : mesh.elements)
    os << "4 " << e[0] << " " << e[1] << " " << e[2] << " " << e[3] << "\n";
  os << "CELL_TYPES " << mesh.num_elements() << "\n";
  for (int e = 0; e < mesh.num_elements(); ++e) os << "9\n";

  if (!point_fields.empty()) {
    os << "POINT_DATA " << mesh.num_nodes() << "\n";
    for (const auto& [name, values] : point_fields) write_scalar_field(os, name, values);
  }
  if (!cell_fields.empty()) {
    os << "CELL_DATA " << mesh.num_elements() << "\n";
    for (const auto& [name, values] : cell_fields) write_scalar_field(os, name, values);
  }
  if (!os) throw ConfigError("write failed for '" + path + "'");
}

void write_metrics(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << "strategy,wall_time_s,factorizations,iters_phi,iters_u,final_crack_extension_mm\n";
  for (const auto& r : rows)
    os << r.strategy << "," << fmt(r.wall_time_s) << "," << r.factorizations << ","
       << r.iters_phi << "," << r.iters_u << "," << fmt(r.final_crack_extension_mm) << "\n";
}

void write_extension_history(
    const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& histories,
    const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << "strategy,cycle,crack_extension_mm\n";
  for (const auto& [name, hist] : histories)
    for (const auto& [cycle, ext] : hist)
      os << name << "," << fmt(cycle) << "," << fmt(ext) << "\n";
}

std::optional<double> extension_deviation(double extension_lumped, double extension_reference) {
  if (extension_reference == 0.0) return std::nullopt;
  return 100.0 * (extension_lumped - extension_reference) / extension_reference;
}

}  // namespace pff
