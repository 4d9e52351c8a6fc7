#pragma once

#include <array>
#include <vector>

#include "pff/constitutive.hpp"
#include "pff/linsolve.hpp"
#include "pff/mesh.hpp"

namespace pff {

// Bilinear quad shape functions at a parent point.
struct ShapeValues {
  std::array<double, 4> N{};
  std::array<std::array<double, 2>, 4> dN{};  // d/dxi, d/deta
};
ShapeValues shape_functions(double xi, double eta);

// Per-field constraint table. Equation numbering is the identity (constrained
// rows become identity rows with zero residual, columns eliminated), so the
// sparsity pattern never changes when constraints are added.
struct DofMap {
  int n_dof = 0;
  std::vector<uint8_t> constrained;
  std::vector<double> prescribed;

  void resize(int n) {
    n_dof = n;
    constrained.assign(n, 0);
    prescribed.assign(n, 0.0);
  }
  void constrain(int dof, double value) {
    constrained[dof] = 1;
    prescribed[dof] = value;
  }
};

// Zero the rows/columns of constrained dofs (keeping symmetry), put 1 on their
// diagonal and 0 in the residual. Standalone variant for externally built
// systems; the assembler applies the same treatment during assembly.
void apply_dirichlet(SpMat& K, Vec& r, const DofMap& map);

// Element loops for the two subproblems on a fixed mesh. Geometry (gradients,
// Jacobians) and sparse scatter slots are precomputed once.
class Assembler {
 public:
  Assembler(const Mesh& mesh, const MaterialParams& mat, SplitKind split);

  const Mesh& mesh() const { return mesh_; }
  const MaterialParams& material() const { return mat_; }
  SplitKind split() const { return split_; }

  int n_u_dofs() const { return 2 * mesh_.num_nodes(); }
  int n_phi_dofs() const { return mesh_.num_nodes(); }
  int n_quad_points() const { return 4 * mesh_.num_elements(); }

  DofMap& u_map() { return u_map_; }
  const DofMap& u_map() const { return u_map_; }
  DofMap& phi_map() { return phi_map_; }
  const DofMap& phi_map() const { return phi_map_; }

  // Compressed matrices carrying the fixed pattern (values zeroed).
  SpMat create_u_matrix() const;
  SpMat create_phi_matrix() const;

  // Displacement subproblem at fixed phi: residual of the degraded stress
  // divergence, optionally with the tangent. Constrained dofs: zero residual,
  // identity rows/columns in K.
  void displacement_system(const Vec& u, const Vec& phi, SpMat* K, Vec& r) const;

  // Phase-field subproblem: driving force 2*H (history field) and fatigue
  // degradation f(abar) of the fracture term.
  void phasefield_system(const Vec& phi, const std::vector<QuadPointState>& states,
                         const std::vector<double>& history, SpMat* K, Vec& r) const;

  // Tensile part of the undegraded energy density at every quadrature point.
  void tensile_energy(const Vec& u, std::vector<double>& psi_plus) const;

  // Strain at one quadrature point (plane strain embedded tensor).
  SymTensor strain_at(int elem, int gp, const Vec& u) const;

  void set_body_force(double bx, double by) { body_force_ = {bx, by}; }

 private:
  struct GpGeom {
    std::array<std::array<double, 2>, 4> dNdx;  // physical gradients
    double w;                                   // detJ * gauss weight
  };

  void build_patterns();

  const Mesh& mesh_;
  MaterialParams mat_;
  SplitKind split_;
  DofMap u_map_, phi_map_;
  std::array<double, 2> body_force_{0.0, 0.0};

  std::vector<std::array<GpGeom, 4>> geom_;
  std::array<ShapeValues, 4> parent_;  // shared shape values at the 4 Gauss points

  // Pattern skeletons (outer/inner arrays) plus per-element value slots.
  SpMat u_pattern_, phi_pattern_;
  std::vector<std::array<int, 64>> u_slots_;
  std::vector<std::array<int, 16>> phi_slots_;
  std::vector<int> u_diag_, phi_diag_;
};

inline double free_inf_norm(const Vec& r) { return r.lpNorm<Eigen::Infinity>(); }

}  // namespace pff
