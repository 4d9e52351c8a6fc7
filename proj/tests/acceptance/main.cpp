// Acceptance suite: end-to-end gates on the fatigue solver, one line per
// criterion. Run with no arguments to execute all nine; pass criterion
// numbers (e.g. "acceptance_tests 1 2 6") to run a subset. Exit code is
// nonzero if any executed criterion fails.

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pff/assembly.hpp"
#include "pff/config.hpp"
#include "pff/constitutive.hpp"
#include "pff/errors.hpp"
#include "pff/mesh.hpp"
#include "pff/solver.hpp"

namespace {

struct Criterion {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& on_fail) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += on_fail;
    }
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

std::string num(double v, const char* fmt = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared solver runs. Every completed run is recorded so the invariants
// criterion can audit all of them at the end.

struct RunRecord {
  std::string label;
  bool converged = false;
  double phi_min = 0.0, phi_max = 0.0;
  long mono_violations = 0;
  long crack_set_size = 0;
  long initial_crack_nodes = 0;
};

std::vector<RunRecord> g_records;

struct NamedRun {
  pff::Problem problem;
  pff::RunResult result;
};

NamedRun do_run(const std::string& label, const pff::RunSpec& spec) {
  pff::Problem p = pff::build_problem(spec);
  pff::RunResult r = pff::run_fatigue(p.mesh, p.mat, p.split, p.bcs, p.program, p.solver);
  std::printf("  [run] %-26s elements=%d increments=%ld paired=%ld wall=%.1fs da=%.6f%s\n",
              label.c_str(), p.mesh.num_elements(), r.counters.increments,
              r.counters.factors.paired(), r.counters.wall_seconds, r.final_extension,
              r.converged ? "" : "  NOT CONVERGED");
  std::fflush(stdout);
  g_records.push_back({label, r.converged, r.phi_min_seen, r.phi_max_seen,
                       r.state_monotonicity_violations, r.crack_set_size,
                       static_cast<long>(p.bcs.crack_nodes.size())});
  return {std::move(p), std::move(r)};
}

pff::RunSpec sent_desk(const std::string& strategy, long n_cla) {
  pff::RunSpec s = pff::preset_spec("sent-desk");
  s.strategy = strategy;
  s.n_cla = n_cla;
  return s;
}

// The tension-specimen runs shared by criteria 3, 4, 7 and the determinism
// check in criterion 9.
struct SentRuns {
  NamedRun baseline, mn, cla, mn_cla;
};

const SentRuns& ensure_sent_runs() {
  static std::optional<SentRuns> runs;
  if (!runs) {
    runs.emplace(SentRuns{
        do_run("sent-desk/baseline", sent_desk("baseline", 1)),
        do_run("sent-desk/mn", sent_desk("mn", 1)),
        do_run("sent-desk/cla-n1", sent_desk("cla", 1)),
        do_run("sent-desk/mn+cla-n1", sent_desk("mn+cla", 1)),
    });
  }
  return *runs;
}

// ---------------------------------------------------------------------------
// Criterion 1: pointwise material laws.

pff::SymTensor random_strain(std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  pff::SymTensor e;
  e.xx = d(rng);
  e.yy = d(rng);
  e.zz = d(rng);
  e.xy = d(rng);
  return e;
}

Criterion criterion_1() {
  Criterion c;
  const pff::MaterialParams mat = pff::make_material(210.0, 0.3, 2.7e-3, 0.016);
  std::mt19937 rng(12345);

  // Energy-split additivity: plus + minus must reassemble the full density.
  double add_max = 0.0;
  for (pff::SplitKind kind :
       {pff::SplitKind::Isotropic, pff::SplitKind::VolDev, pff::SplitKind::Spectral}) {
    for (int i = 0; i < 1000; ++i) {
      const pff::SymTensor e = random_strain(rng, 1.0);
      const double total = pff::psi0(e, mat.lame);
      const pff::SplitEnergy s = pff::split_energy(e, mat, kind);
      add_max = std::max(add_max, std::abs(s.plus + s.minus - total) / std::max(total, 1e-30));
    }
  }
  c.require(add_max <= 1e-10, "split additivity rel err " + num(add_max) + " > 1e-10");

  // No-tension split: adjacent branch formulas must agree on their shared
  // boundary (principal strains sorted descending).
  double nt_max = 0.0;
  std::uniform_real_distribution<double> pos(0.1, 1.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  const double nu = mat.nu;
  for (int i = 0; i < 200; ++i) {
    // Boundary between the open cone and single-direction contact: e3 = 0.
    const double a1 = pos(rng);
    std::array<double, 3> b12 = {a1, frac(rng) * a1, 0.0};
    // Boundary between one and two contact directions: e2 + nu*e3 = 0.
    const double e3 = -pos(rng);
    std::array<double, 3> b23 = {-nu * e3 + pos(rng), -nu * e3, e3};
    // Boundary between two contact directions and full closure:
    // (1-nu)*e1 + nu*(e2+e3) = 0.
    const double f3 = -pos(rng);
    const double f2 = frac(rng) * f3;  // in [f3, 0]
    std::array<double, 3> b34 = {-nu * (f2 + f3) / (1.0 - nu), std::max(f2, f3),
                                 std::min(f2, f3)};
    const std::array<std::array<double, 3>, 3> pts = {b12, b23, b34};
    const std::array<std::pair<int, int>, 3> pairs = {{{1, 2}, {2, 3}, {3, 4}}};
    for (int k = 0; k < 3; ++k) {
      const pff::SplitEnergy lo = pff::detail::no_tension_branch(pts[k], mat, pairs[k].first);
      const pff::SplitEnergy hi = pff::detail::no_tension_branch(pts[k], mat, pairs[k].second);
      const double scale = std::max(1.0, std::abs(lo.plus) + std::abs(lo.minus));
      nt_max = std::max(nt_max, std::abs(lo.plus - hi.plus) / scale);
      nt_max = std::max(nt_max, std::abs(lo.minus - hi.minus) / scale);
    }
  }
  c.require(nt_max <= 1e-8, "no-tension boundary mismatch " + num(nt_max) + " > 1e-8");

  // Fatigue degradation of the fracture energy.
  const double aT = mat.alpha_T;
  const double f_at = pff::fatigue_degradation(aT, aT);
  const double f_3at = pff::fatigue_degradation(3.0 * aT, aT);
  c.require(std::abs(f_at - 1.0) <= 1e-12, "f(alpha_T) = " + num(f_at, "%.15g"));
  c.require(std::abs(f_3at - 0.25) <= 1e-12, "f(3 alpha_T) = " + num(f_3at, "%.15g"));
  bool monotone = true;
  double prev = pff::fatigue_degradation(0.0, aT);
  for (int i = 1; i < 10000; ++i) {
    const double cur = pff::fatigue_degradation(10.0 * aT * i / 9999.0, aT);
    if (cur > prev) monotone = false;
    prev = cur;
  }
  c.require(monotone, "fatigue degradation not monotone non-increasing");

  // Undegraded stress against central finite differences of the energy.
  double fd_max = 0.0;
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const pff::SymTensor e = random_strain(rng, 0.5);
    const pff::SymTensor s = pff::stress0(e, mat.lame);
    const double mag =
        std::abs(s.xx) + std::abs(s.yy) + std::abs(s.zz) + 2.0 * std::abs(s.xy);
    auto fd = [&](double pff::SymTensor::* comp) {
      pff::SymTensor ep = e, em = e;
      ep.*comp += h;
      em.*comp -= h;
      return (pff::psi0(ep, mat.lame) - pff::psi0(em, mat.lame)) / (2.0 * h);
    };
    // The energy sees the symmetric pair of shear entries through the single
    // stored component, so its derivative is twice the shear stress.
    const std::array<double, 4> got = {fd(&pff::SymTensor::xx), fd(&pff::SymTensor::yy),
                                       fd(&pff::SymTensor::zz), fd(&pff::SymTensor::xy)};
    const std::array<double, 4> want = {s.xx, s.yy, s.zz, 2.0 * s.xy};
    for (int k = 0; k < 4; ++k) {
      const double denom = std::max(std::abs(want[k]), 1e-3 * mag);
      fd_max = std::max(fd_max, std::abs(got[k] - want[k]) / denom);
    }
  }
  c.require(fd_max <= 1e-5, "stress vs FD rel err " + num(fd_max) + " > 1e-5");

  if (c.pass)
    c.detail = "additivity " + num(add_max) + ", branch continuity " + num(nt_max) +
               ", f(alpha_T)=1 f(3 alpha_T)=0.25 monotone, stress-vs-FD " + num(fd_max);
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 2: discrete verification (patch test + homogeneous damage field).

Criterion criterion_2() {
  Criterion c;
  const pff::MaterialParams mat = pff::make_material(210.0, 0.3, 2.7e-3, 0.016);

  // Distorted four-element patch: prescribing a uniform-strain field on the
  // boundary must reproduce it exactly at the interior node.
  pff::Mesh mesh;
  mesh.nodes = {{0.0, 0.0},  {0.6, 0.0},  {1.0, 0.0},   //
                {0.0, 0.55}, {0.57, 0.43}, {1.0, 0.4},  //
                {0.0, 1.0},  {0.45, 1.0}, {1.0, 1.0}};
  mesh.elements = {{0, 1, 4, 3}, {1, 2, 5, 4}, {3, 4, 7, 6}, {4, 5, 8, 7}};
  const double exx = 3e-3, eyy = -2e-3, gxy = 1.5e-3;
  auto exact = [&](int n) {
    const double x = mesh.nodes[n][0], y = mesh.nodes[n][1];
    return std::array<double, 2>{exx * x + 0.5 * gxy * y, 0.5 * gxy * x + eyy * y};
  };

  pff::Assembler patch(mesh, mat, pff::SplitKind::Isotropic);
  pff::Vec u = pff::Vec::Zero(patch.n_u_dofs());
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    if (n == 4) continue;  // interior node stays free
    const auto val = exact(n);
    patch.u_map().constrain(2 * n, val[0]);
    patch.u_map().constrain(2 * n + 1, val[1]);
    u[2 * n] = val[0];
    u[2 * n + 1] = val[1];
  }
  const pff::Vec phi0 = pff::Vec::Zero(patch.n_phi_dofs());
  pff::SpMat K = patch.create_u_matrix();
  pff::Vec r(patch.n_u_dofs());
  patch.displacement_system(u, phi0, &K, r);
  Eigen::SimplicialLDLT<pff::SpMat> ldlt(K);
  u -= ldlt.solve(r).eval();
  patch.displacement_system(u, phi0, nullptr, r);

  const double res = pff::free_inf_norm(r);
  const auto want = exact(4);
  const double field_err =
      std::max(std::abs(u[8] - want[0]), std::abs(u[9] - want[1]));
  c.require(res <= 1e-10, "patch residual " + num(res) + " > 1e-10");
  c.require(field_err <= 1e-10, "patch field error " + num(field_err) + " > 1e-10");

  // Single element with a uniform driving force and no fatigue decay: the
  // damage field must converge to the closed-form homogeneous value
  // 2 H0 / (2 H0 + Gc / ell).
  const pff::Mesh one = pff::generate_rect_mesh(1.0, 1.0, 1.0, std::nullopt);
  c.require(one.num_elements() == 1, "expected a single-element mesh");
  pff::Assembler damage(one, mat, pff::SplitKind::Isotropic);
  const double H0 = 0.05;
  const std::vector<pff::QuadPointState> states(damage.n_quad_points());
  const std::vector<double> history(damage.n_quad_points(), H0);
  pff::Vec phi = pff::Vec::Zero(damage.n_phi_dofs());
  pff::Vec rphi(damage.n_phi_dofs());
  pff::SpMat Kphi = damage.create_phi_matrix();
  for (int it = 0; it < 5; ++it) {
    damage.phasefield_system(phi, states, history, &Kphi, rphi);
    if (pff::free_inf_norm(rphi) <= 1e-14) break;
    Eigen::SimplicialLDLT<pff::SpMat> fac(Kphi);
    phi -= fac.solve(rphi).eval();
  }
  const double target = 2.0 * H0 / (2.0 * H0 + mat.Gc / mat.ell);
  double phi_err = 0.0;
  for (int n = 0; n < one.num_nodes(); ++n)
    phi_err = std::max(phi_err, std::abs(phi[n] - target));
  c.require(phi_err <= 1e-8, "homogeneous damage error " + num(phi_err) + " > 1e-8");

  if (c.pass)
    c.detail = "patch residual " + num(res) + ", patch field err " + num(field_err) +
               ", homogeneous damage err " + num(phi_err) + " (target " +
               num(target, "%.9g") + ")";
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 3: factorization reuse must not change the physics.

Criterion criterion_3() {
  Criterion c;
  const SentRuns& runs = ensure_sent_runs();
  const int elems = runs.baseline.problem.mesh.num_elements();
  c.require(elems >= 3000 && elems <= 8000,
            "element count " + std::to_string(elems) + " outside 3000..8000");
  c.require(runs.baseline.result.converged && runs.mn.result.converged,
            "run did not converge");

  const double da_base = runs.baseline.result.final_extension;
  const double da_mn = runs.mn.result.final_extension;
  const double rel = std::abs(da_mn - da_base) / std::max(std::abs(da_base), 1e-30);
  c.require(rel <= 0.01, "extension deviation " + num(100.0 * rel) + "% > 1%");

  const double dphi =
      (runs.mn.result.phi - runs.baseline.result.phi).lpNorm<Eigen::Infinity>();
  const double gate = 10.0 * runs.baseline.problem.solver.tol_out;
  c.require(dphi <= gate, "phi field diff " + num(dphi) + " > " + num(gate));

  c.note("da " + num(da_base, "%.6f") + " vs " + num(da_mn, "%.6f") + " (" +
         num(100.0 * rel) + "%), |dphi|_inf " + num(dphi) + " (gate " + num(gate) + ")");
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 4: one-cycle load lumping reproduces the resolved response.

Criterion criterion_4() {
  Criterion c;
  const SentRuns& runs = ensure_sent_runs();
  c.require(runs.cla.result.converged, "lumped run did not converge");

  // Crack-extension curves must agree at every commonly recorded cycle. The
  // resolved curve is keyed twice: at the whole cycle (state after unloading)
  // for the gate itself, and at the preceding peak for a diagnostic that
  // separates genuine drift from half-increment staircase slips.
  std::map<long, double> resolved;
  for (const auto& [cycles, ext] : runs.baseline.result.extension_history)
    resolved[std::llround(2.0 * cycles)] = ext;
  struct CurveDev {
    double max = 0.0;
    long at = -1;
    long compared = 0;
    long violations = 0;
  };
  auto compare = [&](long key_shift) {
    CurveDev d;
    for (const auto& [cycles, ext] : runs.cla.result.extension_history) {
      const auto it = resolved.find(std::llround(2.0 * cycles) + key_shift);
      if (it == resolved.end()) continue;
      ++d.compared;
      const double ref = it->second;
      const double dev = ref == 0.0 ? (ext == 0.0 ? 0.0 : 1.0) : std::abs(ext - ref) / ref;
      if (dev > 0.02) ++d.violations;
      if (dev > d.max) {
        d.max = dev;
        d.at = std::llround(cycles);
      }
    }
    return d;
  };
  const CurveDev whole = compare(0);
  const CurveDev peak = compare(-1);
  c.require(whole.compared > 0, "no commonly recorded cycles");
  c.require(whole.max <= 0.02,
            "extension deviation " + num(100.0 * whole.max) + "% > 2% at cycle " +
                std::to_string(whole.at) + " (" + std::to_string(whole.violations) + " of " +
                std::to_string(whole.compared) + " recorded cycles over 2%; peak-aligned max " +
                num(100.0 * peak.max) + "% at cycle " + std::to_string(peak.at) + ")");

  // Stepwise twin solves: over the first ten cycles the accumulated fatigue
  // measure of the lumped mode must equal the resolved one to round-off.
  const pff::Problem pa = pff::build_problem(sent_desk("baseline", 1));
  const pff::Problem pb = pff::build_problem(sent_desk("cla", 1));
  pff::FatigueSolver A(pa.mesh, pa.mat, pa.split, pa.bcs, pa.solver);
  pff::FatigueSolver B(pb.mesh, pb.mat, pb.split, pb.bcs, pb.solver);
  double abar_max = 0.0;
  for (int cycle = 0; cycle < 10; ++cycle) {
    A.staggered_increment(pa.program.u_max, 0.0, pff::LoadMode::ResolvedR0, 0.0);
    A.staggered_increment(0.0, 0.0, pff::LoadMode::ResolvedR0, 0.0);
    B.staggered_increment(pb.program.u_max, 1.0, pff::LoadMode::CLA, 0.0);
    for (size_t q = 0; q < A.states().size(); ++q)
      abar_max = std::max(abar_max, std::abs(A.states()[q].abar - B.states()[q].abar));
  }
  c.require(abar_max <= 1e-8, "abar mismatch " + num(abar_max) + " > 1e-8");

  c.note("extension dev max " + num(100.0 * whole.max) + "% over " +
         std::to_string(whole.compared) + " recorded cycles, abar diff max " + num(abar_max) +
         " over 10 cycles");
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 5: error of lumping 16 cycles per increment, against 1 cycle per
// increment, across increasing characteristic cycle counts.

Criterion criterion_5() {
  Criterion c;
  struct Case {
    long cycles;
    double u_max;
  };
  const std::array<Case, 3> cases = {{{2000, 5.0e-4}, {4000, 4.0e-4}, {8000, 3.2e-4}}};
  std::array<double, 3> dev{};
  for (size_t i = 0; i < cases.size(); ++i) {
    std::array<double, 2> ext{};
    const std::array<long, 2> lump = {1, 16};
    for (size_t j = 0; j < 2; ++j) {
      pff::RunSpec s = sent_desk("mn+cla", lump[j]);
      s.cycles = cases[i].cycles;
      s.u_max = cases[i].u_max;
      const NamedRun run = do_run("sent-desk/" + std::to_string(cases[i].cycles) + "cy-n" +
                                      std::to_string(lump[j]),
                                  s);
      c.require(run.result.converged, "run did not converge");
      ext[j] = run.result.final_extension;
    }
    c.require(ext[0] > 0.0, "reference run grew no crack");
    dev[i] = 100.0 * (ext[1] - ext[0]) / ext[0];
  }

  std::string devs;
  for (size_t i = 0; i < cases.size(); ++i) {
    devs += (i ? ", " : "") + std::to_string(cases[i].cycles) + "cy: " + num(dev[i], "%+.2f") + "%";
    c.require(std::abs(dev[i]) <= 5.0,
              std::to_string(cases[i].cycles) + "cy deviation " + num(dev[i], "%+.2f") +
                  "% exceeds 5%");
  }
  const bool trend = std::abs(dev[0]) > std::abs(dev[1]) && std::abs(dev[1]) > std::abs(dev[2]);
  c.require(trend, "deviation magnitude not decreasing with characteristic cycle count");
  c.note("16-vs-1 lumping deviation " + devs + (trend ? " (monotone trend holds)" : ""));
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 6: factorization counting.

Criterion criterion_6() {
  Criterion c;

  pff::RunSpec lumped = sent_desk("mn+cla", 1);
  lumped.cycles = 1000;
  lumped.u_max = 1.0e-4;
  const NamedRun mn = do_run("sent-desk/count-mn+cla", lumped);
  const long I = mn.result.counters.increments;
  const long paired = mn.result.counters.factors.paired();
  const long expected = 1 + (I - 1) / mn.problem.solver.n_c;
  c.require(mn.result.converged, "reuse run did not converge");
  c.require(I == 1000, "expected 1000 increments, got " + std::to_string(I));
  c.require(paired >= 10 && paired <= 11,
            "paired factorizations " + std::to_string(paired) + " outside 10..11");
  if (mn.result.counters.inner_failures == 0)
    c.require(paired == expected, "zero-failure run should pair exactly " +
                                      std::to_string(expected) + ", got " +
                                      std::to_string(paired));

  pff::RunSpec base = sent_desk("baseline", 1);
  base.cycles = 1000;
  base.u_max = 1.0e-4;
  const NamedRun bl = do_run("sent-desk/count-baseline", base);
  c.require(bl.result.converged, "baseline run did not converge");
  c.require(bl.result.counters.increments == 2000,
            "baseline increments " + std::to_string(bl.result.counters.increments) + " != 2000");
  c.require(bl.result.counters.factors.paired() == 2000,
            "baseline paired factorizations " +
                std::to_string(bl.result.counters.factors.paired()) + " != 2000");

  c.note("reuse run: " + std::to_string(paired) + " paired factorizations over " +
         std::to_string(I) + " increments (" +
         std::to_string(mn.result.counters.inner_failures) +
         " inner failures, formula gives " + std::to_string(expected) +
         "), baseline: " + std::to_string(bl.result.counters.factors.paired()) + " over " +
         std::to_string(bl.result.counters.increments));
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 7: wall-clock ordering of the acceleration strategies.

Criterion criterion_7() {
  Criterion c;
  const SentRuns& runs = ensure_sent_runs();
  const double t_base = runs.baseline.result.counters.wall_seconds;
  const double t_mn = runs.mn.result.counters.wall_seconds;
  const double t_cla = runs.cla.result.counters.wall_seconds;
  const double t_both = runs.mn_cla.result.counters.wall_seconds;
  c.require(t_both < t_cla && t_cla < t_base,
            "expected combined < lumped < baseline, got " + num(t_both, "%.2f") + " / " +
                num(t_cla, "%.2f") + " / " + num(t_base, "%.2f"));
  c.require(t_both < t_mn && t_mn < t_base,
            "expected combined < reuse < baseline, got " + num(t_both, "%.2f") + " / " +
                num(t_mn, "%.2f") + " / " + num(t_base, "%.2f"));
  c.note("baseline " + num(t_base, "%.1f") + "s, mn " + num(t_mn, "%.1f") + "s, cla " +
         num(t_cla, "%.1f") + "s, mn+cla " + num(t_both, "%.1f") + "s");
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 8: the strain-energy split changes the predicted crack pattern.

Criterion criterion_8() {
  Criterion c;
  std::map<std::string, NamedRun> by_split;
  for (const char* split : {"iso", "voldev", "spectral", "notension"}) {
    pff::RunSpec s = pff::preset_spec("tpb-desk");
    s.strategy = "mn+cla";
    s.n_cla = 5;
    s.split = split;
    NamedRun run = do_run(std::string("tpb-desk/") + split, s);
    c.require(run.result.converged, std::string(split) + " run did not converge");
    c.require(run.result.state_monotonicity_violations == 0,
              std::string(split) + " run violated state monotonicity");
    by_split.emplace(split, std::move(run));
  }
  const int elems = by_split.at("iso").problem.mesh.num_elements();
  c.require(elems >= 10000 && elems <= 25000,
            "element count " + std::to_string(elems) + " outside 10000..25000");

  const double dphi = (by_split.at("iso").result.phi - by_split.at("notension").result.phi)
                          .lpNorm<Eigen::Infinity>();
  c.require(dphi > 0.5, "iso vs no-tension |dphi|_inf " + num(dphi) + " <= 0.5");
  c.note("all four splits converged on " + std::to_string(elems) +
         " elements, iso vs no-tension |dphi|_inf " + num(dphi, "%.3f"));
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 9: global invariants on every run, plus a bit-identical rerun.

Criterion criterion_9() {
  Criterion c;
  // Guarantee at least the shared runs exist even when run standalone.
  ensure_sent_runs();

  for (const RunRecord& rec : g_records) {
    c.require(rec.mono_violations == 0,
              rec.label + ": " + std::to_string(rec.mono_violations) +
                  " state monotonicity violations");
    c.require(rec.phi_min >= 0.0, rec.label + ": phi min " + num(rec.phi_min) + " < 0");
    c.require(rec.phi_max <= 1.0 + 1e-6,
              rec.label + ": phi max " + num(rec.phi_max, "%.9g") + " > 1+1e-6");
    c.require(rec.crack_set_size >= rec.initial_crack_nodes,
              rec.label + ": crack set shrank (" + std::to_string(rec.crack_set_size) + " < " +
                  std::to_string(rec.initial_crack_nodes) + ")");
  }

  const SentRuns& runs = ensure_sent_runs();
  const NamedRun repeat = do_run("sent-desk/mn+cla-repeat", sent_desk("mn+cla", 1));
  const auto& h1 = runs.mn_cla.result.extension_history;
  const auto& h2 = repeat.result.extension_history;
  bool identical = h1.size() == h2.size();
  for (size_t i = 0; identical && i < h1.size(); ++i)
    identical = h1[i].first == h2[i].first && h1[i].second == h2[i].second;
  c.require(identical, "rerun crack-extension history is not bit-identical");

  c.note(std::to_string(g_records.size()) + " runs audited (monotone states, 0 <= phi <= 1+1e-6, "
         "grow-only crack set), rerun bit-identical");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  struct Entry {
    int id;
    const char* title;
    std::function<Criterion()> fn;
  };
  const std::vector<Entry> table = {
      {1, "constitutive property suite", criterion_1},
      {2, "discrete verification", criterion_2},
      {3, "factorization-reuse transparency", criterion_3},
      {4, "single-cycle lumping equivalence", criterion_4},
      {5, "multi-cycle lumping error", criterion_5},
      {6, "factorization counting", criterion_6},
      {7, "wall-clock ordering", criterion_7},
      {8, "split-dependent crack paths", criterion_8},
      {9, "global invariants and determinism", criterion_9},
  };

  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > 9) {
      std::fprintf(stderr, "usage: %s [criterion numbers 1..9]\n", argv[0]);
      return 2;
    }
    wanted.insert(id);
  }

  bool all_pass = true;
  for (const Entry& entry : table) {
    if (!wanted.empty() && !wanted.count(entry.id)) continue;
    Criterion result;
    try {
      result = entry.fn();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s — %s\n", result.pass ? "PASS" : "FAIL", entry.id,
                entry.title, result.detail.c_str());
    std::fflush(stdout);
    all_pass &= result.pass;
  }
  return all_pass ? 0 : 1;
}
