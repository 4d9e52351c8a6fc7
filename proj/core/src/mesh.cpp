#include "pff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pff/errors.hpp"

namespace pff {

namespace {

constexpr double kGradeRatio = 1.4;

// Subdivide [a, b] uniformly with spacing <= h; at least one cell.
void fill_uniform(std::vector<double>& pts, double a, double b, double h) {
  const double len = b - a;
  const int n = std::max(1, static_cast<int>(std::ceil(len / h - 1e-9)));
  for (int i = 1; i <= n; ++i) pts.push_back(a + len * i / n);
}

// Cell sizes walking from the fine box edge outward: geometric growth from
// h_fine to h_coarse, then uniform h_coarse; the run is rescaled to land
// exactly on the segment end.
std::vector<double> graded_sizes(double length, double h_fine, double h_coarse) {
  std::vector<double> sizes;
  double h = h_fine;
  double acc = 0.0;
  while (acc < length) {
    h = std::min(h * kGradeRatio, h_coarse);
    sizes.push_back(h);
    acc += h;
  }
  const double scale = length / acc;
  for (double& s : sizes) s *= scale;
  return sizes;
}

// 1D coordinate line: uniform h_fine inside [f0, f1], graded to h_coarse outside.
std::vector<double> build_axis(double total, double h_coarse, double f0, double f1,
                               double h_fine) {
  std::vector<double> pts{0.0};
  if (!(f1 > f0)) {
    fill_uniform(pts, 0.0, total, h_coarse);
    return pts;
  }
  f0 = std::max(0.0, f0);
  f1 = std::min(total, f1);
  if (f0 > 0.0) {
    // Walk outward from the box edge toward 0, then flip.
    std::vector<double> seg;
    double x = f0;
    for (double s : graded_sizes(f0, h_fine, h_coarse)) {
      x -= s;
      seg.push_back(x);
    }
    seg.back() = 0.0;
    std::reverse(seg.begin(), seg.end());
    pts.assign(seg.begin(), seg.end());
    pts.push_back(f0);
  }
  fill_uniform(pts, f0, f1, h_fine);
  if (f1 < total) {
    std::vector<double> sizes = graded_sizes(total - f1, h_fine, h_coarse);
    double x = f1;
    for (double s : sizes) {
      x += s;
      pts.push_back(x);
    }
    pts.back() = total;
  }
  // Deduplicate exact repeats from boundary landings.
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

Mesh generate_rect_mesh(double width, double height, double h_coarse,
                        const std::optional<RefinementSpec>& refine) {
  if (width <= 0.0 || height <= 0.0) throw ConfigError("mesh dimensions must be positive");
  if (h_coarse <= 0.0) throw ConfigError("h_coarse must be positive");

  double fx0 = 0.0, fx1 = -1.0, fy0 = 0.0, fy1 = -1.0, h_fine = h_coarse;
  if (refine) {
    if (refine->h_fine <= 0.0 || refine->h_fine > h_coarse)
      throw ConfigError("refinement requires 0 < h_fine <= h_coarse");
    if (refine->x1 <= refine->x0 || refine->y1 <= refine->y0)
      throw ConfigError("refinement box is empty");
    if (refine->x0 < 0.0 || refine->y0 < 0.0 || refine->x1 > width || refine->y1 > height)
      throw ConfigError("refinement box lies outside the domain");
    fx0 = refine->x0;
    fx1 = refine->x1;
    fy0 = refine->y0;
    fy1 = refine->y1;
    h_fine = refine->h_fine;
  }

  const std::vector<double> xs = build_axis(width, h_coarse, fx0, fx1, h_fine);
  const std::vector<double> ys = build_axis(height, h_coarse, fy0, fy1, h_fine);
  const int nx = static_cast<int>(xs.size());
  const int ny = static_cast<int>(ys.size());

  Mesh mesh;
  mesh.nodes.reserve(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) mesh.nodes.push_back({xs[i], ys[j]});

  mesh.elements.reserve(static_cast<size_t>(nx - 1) * (ny - 1));
  auto vid = [nx](int i, int j) { return j * nx + i; };
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i)
      mesh.elements.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});

  auto& sets = mesh.node_sets;
  for (int j = 0; j < ny; ++j) {
    sets["left"].push_back(vid(0, j));
    sets["right"].push_back(vid(nx - 1, j));
  }
  for (int i = 0; i < nx; ++i) {
    sets["bottom"].push_back(vid(i, 0));
    sets["top"].push_back(vid(i, ny - 1));
  }
  for (auto& [name, ids] : sets) std::sort(ids.begin(), ids.end());
  return mesh;
}

std::vector<int> select_nodes(const Mesh& mesh,
                              const std::function<bool(double, double)>& pred) {
  std::vector<int> out;
  for (int n = 0; n < mesh.num_nodes(); ++n)
    if (pred(mesh.nodes[n][0], mesh.nodes[n][1])) out.push_back(n);
  return out;
}

std::vector<int> initial_crack_nodes(const Mesh& mesh, const CrackSpec& crack) {
  const double dx = crack.tip[0] - crack.start[0];
  const double dy = crack.tip[1] - crack.start[1];
  const double len = std::hypot(dx, dy);
  if (len < 1e-12) return {};
  const bool horizontal = std::abs(dy) <= 1e-12 * std::max(1.0, std::abs(dx));
  const bool vertical = std::abs(dx) <= 1e-12 * std::max(1.0, std::abs(dy));
  if (!horizontal && !vertical)
    throw ConfigError("initial crack segment must be axis-aligned");

  // along = coordinate along the segment, across = the fixed coordinate.
  const int across_axis = horizontal ? 1 : 0;
  const int along_axis = horizontal ? 0 : 1;
  const double c = crack.start[across_axis];
  const double a0 = std::min(crack.start[along_axis], crack.tip[along_axis]);
  const double a1 = std::max(crack.start[along_axis], crack.tip[along_axis]);
  const double tol = 1e-9 * std::max(1.0, len);

  // Distinct across-coordinates of nodes within the along-range.
  std::set<double> lines;
  for (const auto& p : mesh.nodes)
    if (p[along_axis] >= a0 - tol && p[along_axis] <= a1 + tol) lines.insert(p[across_axis]);

  auto on_line = [&](double v, double target) { return std::abs(v - target) <= tol; };
  double line0 = 0.0;
  bool found = false;
  for (double v : lines)
    if (on_line(v, c)) {
      line0 = v;
      found = true;
    }
  if (!found) throw ConfigError("initial crack does not lie on a mesh line");

  // Adjacent line on the negative side of the crack line.
  double line1 = -1e300;
  bool has1 = false;
  for (double v : lines)
    if (v < line0 - tol && v > line1) {
      line1 = v;
      has1 = true;
    }
  if (!has1) throw ConfigError("initial crack needs a mesh line below/left of it");

  std::vector<int> out;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const auto& p = mesh.nodes[n];
    if (p[along_axis] < a0 - tol || p[along_axis] > a1 + tol) continue;
    if (on_line(p[across_axis], line0) || on_line(p[across_axis], line1)) out.push_back(n);
  }
  return out;
}

void remove_elements(Mesh& mesh, const std::function<bool(double, double)>& centroid_pred) {
  std::vector<std::array<int, 4>> kept;
  kept.reserve(mesh.elements.size());
  for (const auto& e : mesh.elements) {
    double cx = 0.0, cy = 0.0;
    for (int n : e) {
      cx += mesh.nodes[n][0];
      cy += mesh.nodes[n][1];
    }
    if (!centroid_pred(0.25 * cx, 0.25 * cy)) kept.push_back(e);
  }
  mesh.elements = std::move(kept);

  std::vector<int> remap(mesh.nodes.size(), -1);
  int next = 0;
  for (const auto& e : mesh.elements)
    for (int n : e)
      if (remap[n] < 0) remap[n] = 0;
  for (size_t n = 0; n < remap.size(); ++n)
    if (remap[n] == 0) remap[n] = next++;
  std::vector<std::array<double, 2>> nodes(next);
  for (size_t n = 0; n < remap.size(); ++n)
    if (remap[n] >= 0) nodes[remap[n]] = mesh.nodes[n];
  mesh.nodes = std::move(nodes);
  for (auto& e : mesh.elements)
    for (int& n : e) n = remap[n];
  for (auto& [name, ids] : mesh.node_sets) {
    std::vector<int> mapped;
    for (int n : ids)
      if (remap[n] >= 0) mapped.push_back(remap[n]);
    std::sort(mapped.begin(), mapped.end());
    ids = std::move(mapped);
  }
}

void validate_mesh(const Mesh& mesh) {
  static const double g = 1.0 / std::sqrt(3.0);
  static const double pts[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    for (int n : mesh.elements[e])
      if (n < 0 || n >= mesh.num_nodes())
        throw ConfigError("element " + std::to_string(e) + " references invalid node");
    const auto& el = mesh.elements[e];
    for (const auto& gp : pts) {
      const double xi = gp[0], eta = gp[1];
      const double dxi[4] = {-0.25 * (1 - eta), 0.25 * (1 - eta), 0.25 * (1 + eta),
                             -0.25 * (1 + eta)};
      const double deta[4] = {-0.25 * (1 - xi), -0.25 * (1 + xi), 0.25 * (1 + xi),
                              0.25 * (1 - xi)};
      double j00 = 0, j01 = 0, j10 = 0, j11 = 0;
      for (int a = 0; a < 4; ++a) {
        j00 += dxi[a] * mesh.nodes[el[a]][0];
        j01 += dxi[a] * mesh.nodes[el[a]][1];
        j10 += deta[a] * mesh.nodes[el[a]][0];
        j11 += deta[a] * mesh.nodes[el[a]][1];
      }
      if (j00 * j11 - j01 * j10 <= 0.0)
        throw ConfigError("element " + std::to_string(e) + " has non-positive Jacobian");
    }
  }
  for (const auto& [name, ids] : mesh.node_sets)
    for (int n : ids)
      if (n < 0 || n >= mesh.num_nodes())
        throw ConfigError("node set '" + name + "' references invalid node");
}

}  // namespace pff
