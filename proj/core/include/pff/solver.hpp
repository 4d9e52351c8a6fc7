#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pff/assembly.hpp"
#include "pff/constitutive.hpp"
#include "pff/linsolve.hpp"
#include "pff/mesh.hpp"

namespace pff {

enum class LoadMode {
  ResolvedR0,    // two increments per cycle: u_max, R*u_max (R >= 0)
  ResolvedRneg,  // four increments per cycle: u_max, 0, R*u_max, 0 (R < 0)
  CLA,           // constant load, one increment lumping n_cla cycles
};

struct LoadProgram {
  double u_max = 0.0;      // mm
  double R = 0.0;          // load ratio u_min / u_max
  long total_cycles = 0;
  LoadMode mode = LoadMode::ResolvedR0;
};

struct SolverConfig {
  double tol_in = 1e-5;   // inner Newton residual (infinity norm)
  double tol_out = 1e-4;  // staggered residual on the phase-field equation
  long n_i = 25;          // inner iterations before a forced refactorization
  long n_c = 100;         // increments between scheduled refactorizations
  long n_i_u = -1, n_i_phi = -1;  // per-field overrides, -1 = use n_i
  long n_c_u = -1, n_c_phi = -1;
  long max_outer = 500;
  bool use_mn = false;   // reuse factorizations between iterations/increments
  bool use_cla = false;  // constant-load accumulation
  long cla_cycles = 1;   // cycles lumped per increment when use_cla
  double crack_threshold = 0.95;
};

struct BoundaryConditions {
  std::vector<std::pair<int, int>> fixed;                 // (node, component)
  std::vector<std::array<double, 3>> driven;              // (node, component, factor)
  std::vector<int> crack_nodes;                           // phi = 1 for the whole run
  std::array<double, 2> crack_tip{0.0, 0.0};
  bool has_crack = false;
};

struct PerformanceCounters {
  FactorCounter factors;
  long iters_u = 0;
  long iters_phi = 0;
  long increments = 0;
  long outer_passes = 0;
  long inner_failures = 0;  // forced refactorizations after n_i iterations
  double wall_seconds = 0.0;
};

struct ProgressRecord {
  long increment = 0;
  double cycles_done = 0.0;
  int passes = 0;
  double outer_residual = 0.0;
  double crack_extension = 0.0;
  const PerformanceCounters* counters = nullptr;
};

struct RunResult {
  Vec u;
  Vec phi;
  std::vector<QuadPointState> states;
  std::vector<std::pair<double, double>> extension_history;  // (cycles, mm)
  PerformanceCounters counters;
  double final_extension = 0.0;
  bool converged = true;
  std::string abort_reason;
  double last_converged_cycle = 0.0;
  // Run-wide invariant monitors.
  double phi_min_seen = 0.0;
  double phi_max_seen = 0.0;
  long state_monotonicity_violations = 0;
  long crack_set_size = 0;
};

using ProgressObserver = std::function<void(const ProgressRecord&)>;

// Alternating minimization driver for one fatigue analysis. Both subproblems
// are solved by undamped Newton iterations against an (optionally reused)
// factorization; internal states commit only when an increment converges.
class FatigueSolver {
 public:
  FatigueSolver(const Mesh& mesh, const MaterialParams& mat, SplitKind split,
                const BoundaryConditions& bcs, const SolverConfig& cfg);

  RunResult run(const LoadProgram& program, const ProgressObserver& observer = {});

  // One load increment at the given boundary amplitude, lumping cycles_this
  // cycles into the state commit. Exposed for stepwise tests.
  struct IncrementStats {
    int passes = 0;
    double outer_residual = 0.0;
  };
  IncrementStats staggered_increment(double load_value, double cycles_this, LoadMode mode,
                                     double R);

  // Pin every node whose phi exceeds the threshold; returns how many joined.
  int update_crack_set();

  const Vec& u() const { return u_; }
  const Vec& phi() const { return phi_; }
  const std::vector<QuadPointState>& states() const { return states_; }
  const PerformanceCounters& counters() const { return counters_; }
  const Assembler& assembler() const { return asm_; }
  double crack_extension_now() const;

 private:
  void solve_phasefield(long increment_index);
  void solve_displacement(long increment_index);
  void refactorize(Subproblem which, long increment_index);
  void refresh_running_history();
  void commit_states(double cycles_this, LoadMode mode, double R);
  void apply_load(double load_value);
  void pin_zero_stiffness_dofs();

  const Mesh mesh_;
  MaterialParams mat_;
  SolverConfig cfg_;
  Assembler asm_;
  BoundaryConditions bcs_;

  PerformanceCounters counters_;
  SubproblemSolver fac_u_, fac_phi_;
  SpMat Ku_, Kphi_;
  Vec u_, phi_, r_u_, r_phi_, du_;
  std::vector<QuadPointState> states_;
  std::vector<double> hist_run_, psi_now_;
  std::vector<uint8_t> in_crack_set_;
  std::vector<int> initial_crack_;
  long incs_since_fac_u_ = 0, incs_since_fac_phi_ = 0;
  long increment_index_ = 0;
  double phi_min_seen_ = 0.0, phi_max_seen_ = 0.0;
  long mono_violations_ = 0;
};

// Convenience single-call driver.
RunResult run_fatigue(const Mesh& mesh, const MaterialParams& mat, SplitKind split,
                      const BoundaryConditions& bcs, const LoadProgram& program,
                      const SolverConfig& cfg, const ProgressObserver& observer = {});

}  // namespace pff
