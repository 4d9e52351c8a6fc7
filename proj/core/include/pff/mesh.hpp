#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pff {

// Structured bilinear quad meshes on tensor-product coordinate lines.
// Node and element numbering is row-major and fully deterministic.

struct RefinementSpec {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;  // axis-aligned box, mm
  double h_fine = 0.0;                            // element edge inside the box, mm
};

struct CrackSpec {
  // Axis-aligned segment lying on mesh lines; start is the mouth, tip the front.
  std::array<double, 2> start{0.0, 0.0};
  std::array<double, 2> tip{0.0, 0.0};
};

struct Mesh {
  std::vector<std::array<double, 2>> nodes;       // coordinates, mm
  std::vector<std::array<int, 4>> elements;       // CCW node ids
  std::map<std::string, std::vector<int>> node_sets;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
};

// Rectangle [0,w] x [0,h]; coarse spacing h_coarse, optionally refined to
// refine->h_fine inside the given box with a geometric transition (ratio 1.4)
// back to h_coarse. The grid stays conforming (no hanging nodes). Boundary
// node sets "left", "right", "bottom", "top" are populated.
Mesh generate_rect_mesh(double width, double height, double h_coarse,
                        const std::optional<RefinementSpec>& refine = std::nullopt);

// Node ids whose coordinates satisfy the predicate, ascending.
std::vector<int> select_nodes(const Mesh& mesh, const std::function<bool(double, double)>& pred);

// The two node lines spanning the initial crack: the mesh line containing the
// segment plus the adjacent line on its negative side. Empty for a degenerate
// (zero-length) segment. Count is 2 * (crossed element columns + 1).
std::vector<int> initial_crack_nodes(const Mesh& mesh, const CrackSpec& crack);

// Remove elements whose centroid satisfies the predicate, then drop orphan
// nodes and renumber. Node sets are remapped.
void remove_elements(Mesh& mesh, const std::function<bool(double, double)>& centroid_pred);

// Structural checks: valid connectivity, positive Jacobian at the 2x2 Gauss
// points of every element. Throws ConfigError on violation.
void validate_mesh(const Mesh& mesh);

}  // namespace pff
