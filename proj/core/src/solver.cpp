#include "pff/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pff/errors.hpp"
#include "pff/postprocess.hpp"

namespace pff {

namespace {

long field_value(long specific, long shared) { return specific > 0 ? specific : shared; }

}  // namespace

FatigueSolver::FatigueSolver(const Mesh& mesh, const MaterialParams& mat, SplitKind split,
                             const BoundaryConditions& bcs, const SolverConfig& cfg)
    : mesh_(mesh),
      mat_(mat),
      cfg_(cfg),
      asm_(mesh_, mat_, split),
      bcs_(bcs),
      fac_u_(Subproblem::Displacement, &counters_.factors),
      fac_phi_(Subproblem::PhaseField, &counters_.factors) {
  if (cfg_.tol_in <= 0.0 || cfg_.tol_out <= 0.0 || cfg_.tol_in > cfg_.tol_out)
    throw ConfigError("tolerances must satisfy 0 < tol_in <= tol_out");
  if (cfg_.crack_threshold <= 0.0 || cfg_.crack_threshold >= 1.0)
    throw ConfigError("crack threshold must lie in (0, 1)");
  if (cfg_.use_cla && cfg_.cla_cycles < 1)
    throw ConfigError("cycles per increment must be at least 1");

  Ku_ = asm_.create_u_matrix();
  Kphi_ = asm_.create_phi_matrix();
  fac_u_.analyze_pattern(Ku_);
  fac_phi_.analyze_pattern(Kphi_);

  u_ = Vec::Zero(asm_.n_u_dofs());
  phi_ = Vec::Zero(asm_.n_phi_dofs());
  states_.assign(asm_.n_quad_points(), QuadPointState{});
  hist_run_.assign(asm_.n_quad_points(), 0.0);
  psi_now_.assign(asm_.n_quad_points(), 0.0);
  in_crack_set_.assign(mesh_.num_nodes(), 0);

  for (const auto& [node, comp] : bcs_.fixed) asm_.u_map().constrain(2 * node + comp, 0.0);
  for (const auto& d : bcs_.driven)
    asm_.u_map().constrain(2 * static_cast<int>(d[0]) + static_cast<int>(d[1]), 0.0);
  initial_crack_ = bcs_.crack_nodes;
  for (int n : initial_crack_) {
    asm_.phi_map().constrain(n, 1.0);
    phi_[n] = 1.0;
    in_crack_set_[n] = 1;
  }
}

void FatigueSolver::apply_load(double load_value) {
  for (const auto& d : bcs_.driven) {
    const int dof = 2 * static_cast<int>(d[0]) + static_cast<int>(d[1]);
    asm_.u_map().prescribed[dof] = d[2] * load_value;
    u_[dof] = d[2] * load_value;
  }
}

void FatigueSolver::pin_zero_stiffness_dofs() {
  // Fully broken neighborhoods produce exactly singular displacement rows that
  // no boundary condition covers; freeze those dofs at their current value.
  double max_diag = 0.0;
  std::vector<double> diag(asm_.n_u_dofs());
  for (int d = 0; d < asm_.n_u_dofs(); ++d) {
    diag[d] = Ku_.coeff(d, d);
    if (!asm_.u_map().constrained[d]) max_diag = std::max(max_diag, diag[d]);
  }
  bool pinned_any = false;
  for (int d = 0; d < asm_.n_u_dofs(); ++d) {
    if (asm_.u_map().constrained[d]) continue;
    if (diag[d] <= 1e-12 * max_diag) {
      asm_.u_map().constrain(d, u_[d]);
      pinned_any = true;
    }
  }
  if (pinned_any) asm_.displacement_system(u_, phi_, &Ku_, r_u_);
}

void FatigueSolver::refactorize(Subproblem which, long increment_index) {
  if (which == Subproblem::Displacement) {
    asm_.displacement_system(u_, phi_, &Ku_, r_u_);
    pin_zero_stiffness_dofs();
    fac_u_.factorize(Ku_, increment_index);
    incs_since_fac_u_ = 0;
  } else {
    asm_.phasefield_system(phi_, states_, hist_run_, &Kphi_, r_phi_);
    fac_phi_.factorize(Kphi_, increment_index);
    incs_since_fac_phi_ = 0;
  }
}

void FatigueSolver::solve_phasefield(long increment_index) {
  const long n_i = field_value(cfg_.n_i_phi, cfg_.n_i);
  const long n_c = field_value(cfg_.n_c_phi, cfg_.n_c);
  bool refactor = !cfg_.use_mn || mn_should_refactorize(!fac_phi_.has_factorization(), 0,
                                                        incs_since_fac_phi_, n_i, n_c);
  asm_.phasefield_system(phi_, states_, hist_run_, nullptr, r_phi_);
  long iters_this = 0;
  long failures_this = 0;
  while (true) {
    if (refactor) {
      refactorize(Subproblem::PhaseField, increment_index);
      refactor = false;
    }
    const Vec dphi = fac_phi_.current().solve(r_phi_);
    phi_ -= dphi;
    for (int n = 0; n < mesh_.num_nodes(); ++n)
      if (asm_.phi_map().constrained[n]) phi_[n] = asm_.phi_map().prescribed[n];
    ++iters_this;
    ++counters_.iters_phi;

    asm_.phasefield_system(phi_, states_, hist_run_, nullptr, r_phi_);
    if (free_inf_norm(r_phi_) <= cfg_.tol_in) return;

    if (!cfg_.use_mn) {
      if (iters_this >= n_i)
        throw NonConvergenceError("phase-field Newton stalled with a fresh tangent",
                                  increment_index, free_inf_norm(r_phi_));
      refactor = true;
    } else if (iters_this >= n_i) {
      if (++failures_this > 1)
        throw NonConvergenceError("phase-field solve stalled after refactorization",
                                  increment_index, free_inf_norm(r_phi_));
      ++counters_.inner_failures;
      refactorize(Subproblem::PhaseField, increment_index);
      refactorize(Subproblem::Displacement, increment_index);
      iters_this = 0;
    }
  }
}

void FatigueSolver::solve_displacement(long increment_index) {
  const long n_i = field_value(cfg_.n_i_u, cfg_.n_i);
  const long n_c = field_value(cfg_.n_c_u, cfg_.n_c);
  bool refactor = !cfg_.use_mn || mn_should_refactorize(!fac_u_.has_factorization(), 0,
                                                        incs_since_fac_u_, n_i, n_c);
  asm_.displacement_system(u_, phi_, nullptr, r_u_);
  long iters_this = 0;
  long failures_this = 0;
  while (true) {
    if (refactor) {
      refactorize(Subproblem::Displacement, increment_index);
      refactor = false;
    }
    const Vec du = fac_u_.current().solve(r_u_);
    u_ -= du;
    for (int d = 0; d < asm_.n_u_dofs(); ++d)
      if (asm_.u_map().constrained[d]) u_[d] = asm_.u_map().prescribed[d];
    ++iters_this;
    ++counters_.iters_u;

    asm_.displacement_system(u_, phi_, nullptr, r_u_);
    if (free_inf_norm(r_u_) <= cfg_.tol_in) return;

    if (!cfg_.use_mn) {
      if (iters_this >= n_i)
        throw NonConvergenceError("displacement Newton stalled with a fresh tangent",
                                  increment_index, free_inf_norm(r_u_));
      refactor = true;
    } else if (iters_this >= n_i) {
      if (++failures_this > 1)
        throw NonConvergenceError("displacement solve stalled after refactorization",
                                  increment_index, free_inf_norm(r_u_));
      ++counters_.inner_failures;
      refactorize(Subproblem::Displacement, increment_index);
      refactorize(Subproblem::PhaseField, increment_index);
      iters_this = 0;
    }
  }
}

void FatigueSolver::refresh_running_history() {
  asm_.tensile_energy(u_, psi_now_);
  for (size_t q = 0; q < hist_run_.size(); ++q)
    hist_run_[q] = std::max(states_[q].history, psi_now_[q]);
}

FatigueSolver::IncrementStats FatigueSolver::staggered_increment(double load_value,
                                                                 double cycles_this,
                                                                 LoadMode mode, double R) {
  ++increment_index_;
  ++counters_.increments;
  ++incs_since_fac_u_;
  ++incs_since_fac_phi_;
  apply_load(load_value);
  for (size_t q = 0; q < hist_run_.size(); ++q) hist_run_[q] = states_[q].history;

  IncrementStats stats;
  while (true) {
    solve_phasefield(increment_index_);
    solve_displacement(increment_index_);
    refresh_running_history();
    asm_.phasefield_system(phi_, states_, hist_run_, nullptr, r_phi_);
    stats.outer_residual = free_inf_norm(r_phi_);
    ++stats.passes;
    ++counters_.outer_passes;
    if (stats.outer_residual <= cfg_.tol_out) break;
    if (stats.passes >= cfg_.max_outer)
      throw NonConvergenceError("staggered scheme exceeded max_outer passes", increment_index_,
                                stats.outer_residual);
  }

  commit_states(cycles_this, mode, R);
  update_crack_set();
  phi_min_seen_ = std::min(phi_min_seen_, phi_.minCoeff());
  phi_max_seen_ = std::max(phi_max_seen_, phi_.maxCoeff());
  return stats;
}

void FatigueSolver::commit_states(double cycles_this, LoadMode mode, double R) {
  for (size_t q = 0; q < states_.size(); ++q) {
    QuadPointState& s = states_[q];
    const double psi = psi_now_[q];
    const double abar_old = s.abar;
    const double hist_old = s.history;
    if (mode == LoadMode::CLA) {
      s.abar = accumulate_cla(s.abar, psi, cycles_this, R);
    } else {
      s.abar = accumulate_resolved(s.abar, s.psi_prev, psi);
    }
    s.psi_prev = psi;
    s.history = hist_run_[q];
    if (s.abar < abar_old || s.history < hist_old) ++mono_violations_;
  }
}

int FatigueSolver::update_crack_set() {
  int added = 0;
  for (int n = 0; n < mesh_.num_nodes(); ++n) {
    if (in_crack_set_[n]) continue;
    if (phi_[n] > cfg_.crack_threshold) {
      in_crack_set_[n] = 1;
      asm_.phi_map().constrain(n, 1.0);
      phi_[n] = 1.0;
      ++added;
    }
  }
  return added;
}

double FatigueSolver::crack_extension_now() const {
  if (!bcs_.has_crack) return 0.0;
  return crack_extension(phi_, mesh_, bcs_.crack_tip, initial_crack_, cfg_.crack_threshold);
}

RunResult FatigueSolver::run(const LoadProgram& program, const ProgressObserver& observer) {
  if (program.u_max == 0.0) throw ConfigError("load amplitude must be nonzero");
  if (program.total_cycles < 1) throw ConfigError("cycle count must be at least 1");
  if (program.R >= 1.0) throw ConfigError("load ratio must be below 1");
  if (program.mode == LoadMode::ResolvedRneg && program.R >= 0.0)
    throw ConfigError("alternating-load mode requires R < 0");
  if (program.mode == LoadMode::ResolvedR0 && program.R < 0.0)
    throw ConfigError("pulsating-load mode requires R >= 0");
  if (program.mode == LoadMode::CLA && !cfg_.use_cla)
    throw ConfigError("constant-load program requires the accumulation strategy");

  std::vector<double> stops;
  switch (program.mode) {
    case LoadMode::ResolvedR0:
      stops = {1.0, program.R};
      break;
    case LoadMode::ResolvedRneg:
      stops = {1.0, 0.0, program.R, 0.0};
      break;
    case LoadMode::CLA:
      stops = {1.0};
      break;
  }

  RunResult result;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (program.mode == LoadMode::CLA) {
      const long N = cfg_.cla_cycles;
      const long n_inc = (program.total_cycles + N - 1) / N;
      long cycles_done = 0;
      for (long i = 0; i < n_inc; ++i) {
        const long this_cycles = std::min<long>(N, program.total_cycles - cycles_done);
        const auto stats =
            staggered_increment(program.u_max, static_cast<double>(this_cycles),
                                LoadMode::CLA, program.R);
        cycles_done += this_cycles;
        const double ext = crack_extension_now();
        result.extension_history.emplace_back(static_cast<double>(cycles_done), ext);
        result.last_converged_cycle = static_cast<double>(cycles_done);
        if (observer)
          observer({increment_index_, static_cast<double>(cycles_done), stats.passes,
                    stats.outer_residual, ext, &counters_});
      }
    } else {
      const int per_cycle = static_cast<int>(stops.size());
      for (long c = 0; c < program.total_cycles; ++c) {
        for (int s = 0; s < per_cycle; ++s) {
          const auto stats =
              staggered_increment(stops[s] * program.u_max, 0.0, program.mode, program.R);
          const double cycles_done = c + static_cast<double>(s + 1) / per_cycle;
          const double ext = crack_extension_now();
          result.extension_history.emplace_back(cycles_done, ext);
          result.last_converged_cycle = cycles_done;
          if (observer)
            observer({increment_index_, cycles_done, stats.passes, stats.outer_residual, ext,
                      &counters_});
        }
      }
    }
  } catch (const NonConvergenceError& err) {
    result.converged = false;
    result.abort_reason = err.what();
  }
  const auto t1 = std::chrono::steady_clock::now();
  counters_.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

  result.u = u_;
  result.phi = phi_;
  result.states = states_;
  result.counters = counters_;
  result.final_extension =
      result.extension_history.empty() ? 0.0 : result.extension_history.back().second;
  result.phi_min_seen = phi_min_seen_;
  result.phi_max_seen = phi_max_seen_;
  result.state_monotonicity_violations = mono_violations_;
  result.crack_set_size =
      std::count(in_crack_set_.begin(), in_crack_set_.end(), static_cast<uint8_t>(1));
  return result;
}

RunResult run_fatigue(const Mesh& mesh, const MaterialParams& mat, SplitKind split,
                      const BoundaryConditions& bcs, const LoadProgram& program,
                      const SolverConfig& cfg, const ProgressObserver& observer) {
  FatigueSolver solver(mesh, mat, split, bcs, cfg);
  return solver.run(program, observer);
}

}  // namespace pff
