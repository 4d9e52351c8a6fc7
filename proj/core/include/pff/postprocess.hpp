#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pff/linsolve.hpp"
#include "pff/mesh.hpp"

namespace pff {

// Crack extension: largest distance from the original tip to any node with
// phi >= threshold, excluding the initial crack nodes; 0 if none qualify.
double crack_extension(const Vec& phi, const Mesh& mesh, const std::array<double, 2>& tip,
                       const std::vector<int>& exclude_nodes, double threshold = 0.95);

// Legacy ASCII VTK unstructured-grid writer (quad cells, type 9). Point and
// cell fields are written as scalars in shortest round-trip decimal form.
void write_vtk(const Mesh& mesh, const std::map<std::string, std::vector<double>>& point_fields,
               const std::map<std::string, std::vector<double>>& cell_fields,
               const std::string& path);

struct MetricsRow {
  std::string strategy;
  double wall_time_s = 0.0;
  long factorizations = 0;
  long iters_phi = 0;
  long iters_u = 0;
  double final_crack_extension_mm = 0.0;
};

// Summary CSV, one row per strategy.
void write_metrics(const std::vector<MetricsRow>& rows, const std::string& path);

// Crack-extension history CSV in long format: strategy,cycle,extension.
void write_extension_history(
    const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& histories,
    const std::string& path);

// Signed relative deviation (percent) of a lumped-cycle run against the
// cycle-resolved reference; empty when the reference extension is zero.
std::optional<double> extension_deviation(double extension_lumped, double extension_reference);

}  // namespace pff
