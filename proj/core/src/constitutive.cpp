#include "pff/constitutive.hpp"

#include <algorithm>
#include <cmath>

#include "pff/errors.hpp"

namespace pff {

namespace {

inline double pos(double x) { return x > 0.0 ? x : 0.0; }
inline double neg(double x) { return x < 0.0 ? x : 0.0; }

}  // namespace

LameConstants lame_constants(double E, double nu) {
  if (E <= 0.0) throw ConfigError("Young's modulus must be positive");
  if (nu <= -1.0 || nu >= 0.5) throw ConfigError("Poisson's ratio must lie in (-1, 0.5)");
  LameConstants l;
  l.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  l.mu = E / (2.0 * (1.0 + nu));
  l.bulk = l.lambda + 2.0 * l.mu / 3.0;
  return l;
}

MaterialParams make_material(double E, double nu, double Gc, double ell, double alpha_T) {
  if (Gc <= 0.0) throw ConfigError("fracture energy must be positive");
  if (ell <= 0.0) throw ConfigError("length scale must be positive");
  MaterialParams m;
  m.E = E;
  m.nu = nu;
  m.Gc = Gc;
  m.ell = ell;
  m.lame = lame_constants(E, nu);
  m.alpha_T = alpha_T > 0.0 ? alpha_T : Gc / (12.0 * ell);
  return m;
}

PrincipalStrains spectral_decompose(const SymTensor& eps) {
  // In-plane 2x2 block, closed form; the out-of-plane axis is already principal.
  const double a = eps.xx, b = eps.yy, c = eps.xy;
  const double mean = 0.5 * (a + b);
  const double rad = std::sqrt(0.25 * (a - b) * (a - b) + c * c);
  const double e_hi = mean + rad, e_lo = mean - rad;

  // Eigenvector for e_hi; the other in-plane direction is its 90-degree rotation.
  double vx, vy;
  if (rad < 1e-300) {  // isotropic in-plane block: fixed axis order
    vx = 1.0;
    vy = 0.0;
  } else if (std::abs(c) > 1e-14 * (std::abs(a) + std::abs(b) + rad)) {
    vx = c;
    vy = e_hi - a;
    const double n = std::sqrt(vx * vx + vy * vy);
    vx /= n;
    vy /= n;
    if (vx < 0.0 || (vx == 0.0 && vy < 0.0)) {
      vx = -vx;
      vy = -vy;
    }
  } else if (a >= b) {
    vx = 1.0;
    vy = 0.0;
  } else {
    vx = 0.0;
    vy = 1.0;
  }

  struct Pair {
    double value;
    std::array<double, 3> dir;
  };
  std::array<Pair, 3> p{Pair{e_hi, {vx, vy, 0.0}}, Pair{e_lo, {-vy, vx, 0.0}},
                        Pair{eps.zz, {0.0, 0.0, 1.0}}};
  std::stable_sort(p.begin(), p.end(), [](const Pair& l, const Pair& r) { return l.value > r.value; });

  PrincipalStrains out;
  for (int i = 0; i < 3; ++i) {
    out.value[i] = p[i].value;
    out.direction[i] = p[i].dir;
  }
  return out;
}

double psi0(const SymTensor& eps, const LameConstants& lame) {
  const double tr = eps.trace();
  const double sq = eps.xx * eps.xx + eps.yy * eps.yy + eps.zz * eps.zz + 2.0 * eps.xy * eps.xy;
  return 0.5 * lame.lambda * tr * tr + lame.mu * sq;
}

SymTensor stress0(const SymTensor& eps, const LameConstants& lame) {
  const double ltr = lame.lambda * eps.trace();
  SymTensor s;
  s.xx = ltr + 2.0 * lame.mu * eps.xx;
  s.yy = ltr + 2.0 * lame.mu * eps.yy;
  s.zz = ltr + 2.0 * lame.mu * eps.zz;
  s.xy = 2.0 * lame.mu * eps.xy;
  return s;
}

SymTensor degraded_stress(const SymTensor& eps, double phi, const LameConstants& lame) {
  const double g = degradation(phi);
  SymTensor s = stress0(eps, lame);
  s.xx *= g;
  s.yy *= g;
  s.zz *= g;
  s.xy *= g;
  return s;
}

namespace detail {

int no_tension_select_branch(const std::array<double, 3>& e, double nu) {
  if (e[2] > 0.0) return 1;
  if (e[1] + nu * e[2] > 0.0) return 2;
  if ((1.0 - nu) * e[0] + nu * (e[1] + e[2]) > 0.0) return 3;
  return 4;
}

SplitEnergy no_tension_branch(const std::array<double, 3>& e, const MaterialParams& mat,
                              int branch) {
  const double lambda = mat.lame.lambda, mu = mat.lame.mu, nu = mat.nu, E = mat.E;
  const double tr = e[0] + e[1] + e[2];
  const double sq = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
  SplitEnergy s;
  switch (branch) {
    case 1:  // all principal directions open
      s.plus = 0.5 * lambda * tr * tr + mu * sq;
      s.minus = 0.0;
      break;
    case 2: {  // contact along e3 only; uniaxial compression stored there
      const double a = e[0] + nu * e[2];
      const double b = e[1] + nu * e[2];
      s.plus = 0.5 * lambda * (a + b) * (a + b) + mu * (a * a + b * b);
      s.minus = 0.5 * E * e[2] * e[2];
      break;
    }
    case 3: {  // contact along e2 and e3; biaxial compression stored
      const double x = (1.0 - nu) * e[0] + nu * (e[1] + e[2]);
      const double c3 = (0.5 * lambda + mu) / ((1.0 - nu) * (1.0 - nu));
      s.plus = c3 * x * x;
      s.minus = E / (2.0 * (1.0 - nu * nu)) * (e[1] * e[1] + e[2] * e[2] + 2.0 * nu * e[1] * e[2]);
      break;
    }
    case 4:  // fully closed
      s.plus = 0.0;
      s.minus = 0.5 * lambda * tr * tr + mu * sq;
      break;
    default:
      throw Error("no_tension_branch: branch must be 1..4");
  }
  return s;
}

}  // namespace detail

SplitEnergy split_energy(const SymTensor& eps, const MaterialParams& mat, SplitKind kind) {
  const LameConstants& lame = mat.lame;
  SplitEnergy s;
  switch (kind) {
    case SplitKind::Isotropic:
      s.plus = psi0(eps, lame);
      s.minus = 0.0;
      break;
    case SplitKind::VolDev: {
      const double tr = eps.trace();
      const double m = tr / 3.0;
      const double dxx = eps.xx - m, dyy = eps.yy - m, dzz = eps.zz - m;
      const double devdev = dxx * dxx + dyy * dyy + dzz * dzz + 2.0 * eps.xy * eps.xy;
      s.plus = 0.5 * lame.bulk * pos(tr) * pos(tr) + lame.mu * devdev;
      s.minus = 0.5 * lame.bulk * neg(tr) * neg(tr);
      break;
    }
    case SplitKind::Spectral: {
      const PrincipalStrains p = spectral_decompose(eps);
      const double tr = eps.trace();
      double sp = 0.0, sm = 0.0;
      for (double ei : p.value) {
        sp += pos(ei) * pos(ei);
        sm += neg(ei) * neg(ei);
      }
      s.plus = 0.5 * lame.lambda * pos(tr) * pos(tr) + lame.mu * sp;
      s.minus = 0.5 * lame.lambda * neg(tr) * neg(tr) + lame.mu * sm;
      break;
    }
    case SplitKind::NoTension: {
      const PrincipalStrains p = spectral_decompose(eps);
      const int branch = detail::no_tension_select_branch(p.value, mat.nu);
      s = detail::no_tension_branch(p.value, mat, branch);
      break;
    }
  }
  return s;
}

double fatigue_degradation(double abar, double alpha_T) {
  if (abar <= alpha_T) return 1.0;
  const double r = 2.0 * alpha_T / (abar + alpha_T);
  return r * r;
}

double accumulate_resolved(double abar, double psi_prev, double psi_now) {
  const double jump = psi_now - psi_prev;
  return abar + (jump > 0.0 ? jump : 0.0);
}

double accumulate_cla(double abar, double psi_plus, double n_cycles, double R) {
  const double heaviside = R > 0.0 ? 1.0 : 0.0;  // H(0) = 0
  return abar + n_cycles * psi_plus * (1.0 - R * R * heaviside);
}

}  // namespace pff
