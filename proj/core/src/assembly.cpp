#include "pff/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "pff/errors.hpp"

namespace pff {

ShapeValues shape_functions(double xi, double eta) {
  ShapeValues s;
  const double xm = 1.0 - xi, xp = 1.0 + xi, em = 1.0 - eta, ep = 1.0 + eta;
  s.N = {0.25 * xm * em, 0.25 * xp * em, 0.25 * xp * ep, 0.25 * xm * ep};
  s.dN = {{{-0.25 * em, -0.25 * xm},
           {0.25 * em, -0.25 * xp},
           {0.25 * ep, 0.25 * xp},
           {-0.25 * ep, 0.25 * xm}}};
  return s;
}

void apply_dirichlet(SpMat& K, Vec& r, const DofMap& map) {
  for (int col = 0; col < K.outerSize(); ++col) {
    for (SpMat::InnerIterator it(K, col); it; ++it) {
      const bool crow = map.constrained[it.row()];
      const bool ccol = map.constrained[col];
      if (crow || ccol) it.valueRef() = (it.row() == col) ? 1.0 : 0.0;
    }
  }
  for (int d = 0; d < map.n_dof; ++d)
    if (map.constrained[d]) r[d] = 0.0;
}

Assembler::Assembler(const Mesh& mesh, const MaterialParams& mat, SplitKind split)
    : mesh_(mesh), mat_(mat), split_(split) {
  validate_mesh(mesh_);
  u_map_.resize(n_u_dofs());
  phi_map_.resize(n_phi_dofs());

  static const double g = 1.0 / std::sqrt(3.0);
  static const double gp[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
  for (int q = 0; q < 4; ++q) parent_[q] = shape_functions(gp[q][0], gp[q][1]);

  geom_.resize(mesh_.num_elements());
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& el = mesh_.elements[e];
    for (int q = 0; q < 4; ++q) {
      const auto& sh = parent_[q];
      double j00 = 0, j01 = 0, j10 = 0, j11 = 0;
      for (int a = 0; a < 4; ++a) {
        const auto& x = mesh_.nodes[el[a]];
        j00 += sh.dN[a][0] * x[0];
        j01 += sh.dN[a][0] * x[1];
        j10 += sh.dN[a][1] * x[0];
        j11 += sh.dN[a][1] * x[1];
      }
      const double det = j00 * j11 - j01 * j10;
      const double i00 = j11 / det, i01 = -j01 / det, i10 = -j10 / det, i11 = j00 / det;
      GpGeom& gg = geom_[e][q];
      for (int a = 0; a < 4; ++a) {
        gg.dNdx[a][0] = i00 * sh.dN[a][0] + i01 * sh.dN[a][1];
        gg.dNdx[a][1] = i10 * sh.dN[a][0] + i11 * sh.dN[a][1];
      }
      gg.w = det;  // 2x2 Gauss weights are 1
    }
  }
  build_patterns();
}

void Assembler::build_patterns() {
  using T = Eigen::Triplet<double>;
  {
    std::vector<T> trips;
    trips.reserve(mesh_.num_elements() * 64 + n_u_dofs());
    for (const auto& el : mesh_.elements)
      for (int a = 0; a < 4; ++a)
        for (int ca = 0; ca < 2; ++ca)
          for (int b = 0; b < 4; ++b)
            for (int cb = 0; cb < 2; ++cb)
              trips.emplace_back(2 * el[a] + ca, 2 * el[b] + cb, 0.0);
    for (int d = 0; d < n_u_dofs(); ++d) trips.emplace_back(d, d, 0.0);
    u_pattern_.resize(n_u_dofs(), n_u_dofs());
    u_pattern_.setFromTriplets(trips.begin(), trips.end());
    u_pattern_.makeCompressed();
  }
  {
    std::vector<T> trips;
    trips.reserve(mesh_.num_elements() * 16 + n_phi_dofs());
    for (const auto& el : mesh_.elements)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) trips.emplace_back(el[a], el[b], 0.0);
    for (int d = 0; d < n_phi_dofs(); ++d) trips.emplace_back(d, d, 0.0);
    phi_pattern_.resize(n_phi_dofs(), n_phi_dofs());
    phi_pattern_.setFromTriplets(trips.begin(), trips.end());
    phi_pattern_.makeCompressed();
  }

  auto slot = [](const SpMat& A, int row, int col) {
    const int* inner = A.innerIndexPtr();
    const int* outer = A.outerIndexPtr();
    const int* lo = inner + outer[col];
    const int* hi = inner + outer[col + 1];
    const int* it = std::lower_bound(lo, hi, row);
    return static_cast<int>(it - inner);
  };

  u_slots_.resize(mesh_.num_elements());
  phi_slots_.resize(mesh_.num_elements());
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& el = mesh_.elements[e];
    for (int a = 0; a < 4; ++a)
      for (int ca = 0; ca < 2; ++ca)
        for (int b = 0; b < 4; ++b)
          for (int cb = 0; cb < 2; ++cb)
            u_slots_[e][(2 * a + ca) * 8 + 2 * b + cb] =
                slot(u_pattern_, 2 * el[a] + ca, 2 * el[b] + cb);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) phi_slots_[e][a * 4 + b] = slot(phi_pattern_, el[a], el[b]);
  }
  u_diag_.resize(n_u_dofs());
  for (int d = 0; d < n_u_dofs(); ++d) u_diag_[d] = slot(u_pattern_, d, d);
  phi_diag_.resize(n_phi_dofs());
  for (int d = 0; d < n_phi_dofs(); ++d) phi_diag_[d] = slot(phi_pattern_, d, d);
}

SpMat Assembler::create_u_matrix() const { return u_pattern_; }
SpMat Assembler::create_phi_matrix() const { return phi_pattern_; }

void Assembler::displacement_system(const Vec& u, const Vec& phi, SpMat* K, Vec& r) const {
  const double c11 = mat_.lame.lambda + 2.0 * mat_.lame.mu;
  const double c12 = mat_.lame.lambda;
  const double c33 = mat_.lame.mu;

  r.setZero(n_u_dofs());
  double* kv = nullptr;
  if (K) {
    std::fill(K->valuePtr(), K->valuePtr() + K->nonZeros(), 0.0);
    kv = K->valuePtr();
  }

  std::array<double, 8> ue{}, re{};
  std::array<double, 64> ke{};
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& el = mesh_.elements[e];
    for (int a = 0; a < 4; ++a) {
      ue[2 * a] = u[2 * el[a]];
      ue[2 * a + 1] = u[2 * el[a] + 1];
    }
    re.fill(0.0);
    if (K) ke.fill(0.0);

    for (int q = 0; q < 4; ++q) {
      const GpGeom& gg = geom_[e][q];
      const auto& N = parent_[q].N;
      // Quadratic degradation (1-phi)^2, interpolating 1-phi directly so a
      // fully broken element transmits exactly zero stress.
      double omg = 0.0;
      for (int a = 0; a < 4; ++a) omg += N[a] * (1.0 - phi[el[a]]);
      const double gdeg = omg * omg;

      double exx = 0.0, eyy = 0.0, gxy = 0.0;
      for (int a = 0; a < 4; ++a) {
        exx += gg.dNdx[a][0] * ue[2 * a];
        eyy += gg.dNdx[a][1] * ue[2 * a + 1];
        gxy += gg.dNdx[a][1] * ue[2 * a] + gg.dNdx[a][0] * ue[2 * a + 1];
      }
      const double tr = exx + eyy;
      const double sxx = gdeg * (c12 * tr + 2.0 * c33 * exx);
      const double syy = gdeg * (c12 * tr + 2.0 * c33 * eyy);
      const double sxy = gdeg * (c33 * gxy);

      for (int a = 0; a < 4; ++a) {
        const double dxa = gg.dNdx[a][0], dya = gg.dNdx[a][1];
        re[2 * a] += gg.w * (dxa * sxx + dya * sxy - N[a] * body_force_[0]);
        re[2 * a + 1] += gg.w * (dya * syy + dxa * sxy - N[a] * body_force_[1]);
      }
      if (K) {
        // Upper block triangle only; mirrored below so K is symmetric to the bit.
        const double wg = gg.w * gdeg;
        for (int a = 0; a < 4; ++a) {
          const double dxa = gg.dNdx[a][0], dya = gg.dNdx[a][1];
          for (int b = a; b < 4; ++b) {
            const double dxb = gg.dNdx[b][0], dyb = gg.dNdx[b][1];
            ke[(2 * a) * 8 + 2 * b] += wg * (c11 * dxa * dxb + c33 * dya * dyb);
            ke[(2 * a) * 8 + 2 * b + 1] += wg * (c12 * dxa * dyb + c33 * dya * dxb);
            ke[(2 * a + 1) * 8 + 2 * b] += wg * (c12 * dya * dxb + c33 * dxa * dyb);
            ke[(2 * a + 1) * 8 + 2 * b + 1] += wg * (c11 * dya * dyb + c33 * dxa * dxb);
          }
        }
      }
    }

    for (int a = 0; a < 8; ++a) r[2 * el[a / 2] + a % 2] += re[a];
    if (K) {
      for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) ke[j * 8 + i] = ke[i * 8 + j];
      // Identity rows/columns for constrained dofs, kept symmetric.
      for (int i = 0; i < 8; ++i) {
        const bool ci = u_map_.constrained[2 * el[i / 2] + i % 2];
        for (int j = 0; j < 8; ++j) {
          const bool cj = u_map_.constrained[2 * el[j / 2] + j % 2];
          if (!(ci || cj)) kv[u_slots_[e][i * 8 + j]] += ke[i * 8 + j];
        }
      }
    }
  }
  for (int d = 0; d < n_u_dofs(); ++d)
    if (u_map_.constrained[d]) {
      r[d] = 0.0;
      if (K) kv[u_diag_[d]] = 1.0;
    }
}

void Assembler::phasefield_system(const Vec& phi, const std::vector<QuadPointState>& states,
                                  const std::vector<double>& history, SpMat* K, Vec& r) const {
  const double Gc = mat_.Gc, ell = mat_.ell, aT = mat_.alpha_T;

  r.setZero(n_phi_dofs());
  double* kv = nullptr;
  if (K) {
    std::fill(K->valuePtr(), K->valuePtr() + K->nonZeros(), 0.0);
    kv = K->valuePtr();
  }

  std::array<double, 4> pe{}, re{};
  std::array<double, 16> ke{};
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& el = mesh_.elements[e];
    for (int a = 0; a < 4; ++a) pe[a] = phi[el[a]];
    re.fill(0.0);
    if (K) ke.fill(0.0);

    for (int q = 0; q < 4; ++q) {
      const GpGeom& gg = geom_[e][q];
      const auto& N = parent_[q].N;
      const int sq = 4 * e + q;
      const double H = history[sq];
      const double f = fatigue_degradation(states[sq].abar, aT);

      double phig = 0.0, gx = 0.0, gy = 0.0;
      for (int a = 0; a < 4; ++a) {
        phig += N[a] * pe[a];
        gx += gg.dNdx[a][0] * pe[a];
        gy += gg.dNdx[a][1] * pe[a];
      }

      const double bulk = -2.0 * (1.0 - phig) * H + f * Gc * phig / ell;
      for (int a = 0; a < 4; ++a)
        re[a] += gg.w * (bulk * N[a] + f * Gc * ell * (gg.dNdx[a][0] * gx + gg.dNdx[a][1] * gy));

      if (K) {
        const double cN = gg.w * (2.0 * H + f * Gc / ell);
        const double cG = gg.w * f * Gc * ell;
        for (int a = 0; a < 4; ++a)
          for (int b = a; b < 4; ++b)
            ke[a * 4 + b] += cN * N[a] * N[b] +
                             cG * (gg.dNdx[a][0] * gg.dNdx[b][0] + gg.dNdx[a][1] * gg.dNdx[b][1]);
      }
    }

    for (int a = 0; a < 4; ++a) r[el[a]] += re[a];
    if (K) {
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) ke[j * 4 + i] = ke[i * 4 + j];
      for (int i = 0; i < 4; ++i) {
        const bool ci = phi_map_.constrained[el[i]];
        for (int j = 0; j < 4; ++j) {
          const bool cj = phi_map_.constrained[el[j]];
          if (!(ci || cj)) kv[phi_slots_[e][i * 4 + j]] += ke[i * 4 + j];
        }
      }
    }
  }
  for (int d = 0; d < n_phi_dofs(); ++d)
    if (phi_map_.constrained[d]) {
      r[d] = 0.0;
      if (K) kv[phi_diag_[d]] = 1.0;
    }
}

void Assembler::tensile_energy(const Vec& u, std::vector<double>& psi_plus) const {
  psi_plus.resize(n_quad_points());
  for (int e = 0; e < mesh_.num_elements(); ++e)
    for (int q = 0; q < 4; ++q)
      psi_plus[4 * e + q] = split_energy(strain_at(e, q, u), mat_, split_).plus;
}

SymTensor Assembler::strain_at(int e, int q, const Vec& u) const {
  const auto& el = mesh_.elements[e];
  const GpGeom& gg = geom_[e][q];
  SymTensor eps;
  for (int a = 0; a < 4; ++a) {
    const double ux = u[2 * el[a]], uy = u[2 * el[a] + 1];
    eps.xx += gg.dNdx[a][0] * ux;
    eps.yy += gg.dNdx[a][1] * uy;
    eps.xy += 0.5 * (gg.dNdx[a][1] * ux + gg.dNdx[a][0] * uy);
  }
  return eps;  // zz = 0 (plane strain)
}

}  // namespace pff
