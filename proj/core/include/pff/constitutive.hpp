#pragma once

#include <array>

namespace pff {

// Units used throughout the library: lengths in mm, stresses and energy
// densities in GPa (= kN/mm^2 = J/mm^3), fracture energies in GPa*mm (= J/mm^2).
// 1 kJ/m^2 = 1e-3 GPa*mm; the config layer performs that conversion.

struct LameConstants {
  double lambda = 0.0;  // GPa
  double mu = 0.0;      // GPa
  double bulk = 0.0;    // lambda + 2 mu / 3, GPa
};

LameConstants lame_constants(double E, double nu);

enum class SplitKind { Isotropic, VolDev, Spectral, NoTension };

struct MaterialParams {
  double E = 0.0;        // GPa
  double nu = 0.0;
  double Gc = 0.0;       // GPa*mm
  double ell = 0.0;      // mm
  double alpha_T = 0.0;  // GPa, fatigue threshold energy density
  LameConstants lame;
};

// alpha_T <= 0 selects the default Gc / (12 ell).
MaterialParams make_material(double E, double nu, double Gc, double ell, double alpha_T = 0.0);

// Plane-strain embedded symmetric tensor: out-of-plane shears are zero,
// zz may be nonzero so principal-strain expressions stay 3D.
struct SymTensor {
  double xx = 0.0, yy = 0.0, zz = 0.0, xy = 0.0;
  double trace() const { return xx + yy + zz; }
};

struct PrincipalStrains {
  std::array<double, 3> value{};                      // descending
  std::array<std::array<double, 3>, 3> direction{};   // unit vectors, rows match values
};

// Closed-form in-plane eigendecomposition plus the out-of-plane direction.
// Deterministic direction signs; ties resolved by fixed axis order.
PrincipalStrains spectral_decompose(const SymTensor& eps);

double psi0(const SymTensor& eps, const LameConstants& lame);

// Undegraded stress sigma0 = C0 : eps (isotropic, 3D constants).
SymTensor stress0(const SymTensor& eps, const LameConstants& lame);

// Degraded stress (1 - phi)^2 C0 : eps; the full stiffness is degraded
// regardless of the energy split (hybrid formulation).
SymTensor degraded_stress(const SymTensor& eps, double phi, const LameConstants& lame);

inline double degradation(double phi) {
  const double g = 1.0 - phi;
  return g * g;
}

struct SplitEnergy {
  double plus = 0.0;
  double minus = 0.0;
};

SplitEnergy split_energy(const SymTensor& eps, const MaterialParams& mat, SplitKind kind);

namespace detail {
// Branch-level evaluation of the no-tension split on sorted principal strains
// (e1 >= e2 >= e3); exposed so boundary continuity can be tested directly.
SplitEnergy no_tension_branch(const std::array<double, 3>& e, const MaterialParams& mat,
                              int branch);
int no_tension_select_branch(const std::array<double, 3>& e, double nu);
}  // namespace detail

// Fatigue degradation of the fracture energy: 1 below the threshold,
// (2 alpha_T / (abar + alpha_T))^2 above it; continuous at abar = alpha_T.
double fatigue_degradation(double abar, double alpha_T);

// Cycle-resolved accumulation: only positive jumps of the tensile energy count.
double accumulate_resolved(double abar, double psi_prev, double psi_now);

// Constant-load accumulation over n_cycles cycles at load ratio R.
// The mean-load factor is 1 - R^2 * H(R) with H(0) = 0.
double accumulate_cla(double abar, double psi_plus, double n_cycles, double R);

// History field: running maximum of the tensile energy density.
inline double update_history(double h, double psi_plus) { return psi_plus > h ? psi_plus : h; }

// Per-quadrature-point internal state, committed once per converged increment.
struct QuadPointState {
  double abar = 0.0;      // accumulated fatigue measure, GPa
  double history = 0.0;   // max tensile energy density seen, GPa
  double psi_prev = 0.0;  // tensile energy density at last commit, GPa
};

}  // namespace pff
