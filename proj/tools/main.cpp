// Command-line front end: run one fatigue analysis from a spec file or a
// built-in preset, or compare acceleration strategies on the same problem.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pff/config.hpp"
#include "pff/errors.hpp"
#include "pff/postprocess.hpp"
#include "pff/solver.hpp"

namespace fs = std::filesystem;

namespace {

pff::RunSpec resolve_spec(const std::string& arg) {
  if (fs::exists(arg)) return pff::load_run_spec(arg);
  const auto names = pff::preset_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) return pff::preset_spec(arg);
  throw pff::ConfigError("'" + arg +
                         "' is neither a spec file nor a preset (sent, sent-desk, tpb, tpb-desk)");
}

struct Overrides {
  long cycles = 0;
  std::string strategy;
  std::string split;
  long ncycles = 0;
  std::string out;
};

void apply_overrides(pff::RunSpec& spec, const Overrides& o) {
  if (o.cycles > 0) spec.cycles = o.cycles;
  if (!o.strategy.empty()) spec.strategy = o.strategy;
  if (!o.split.empty()) spec.split = o.split;
  if (o.ncycles > 0) spec.n_cla = o.ncycles;
  if (!o.out.empty()) spec.out_dir = o.out;
}

std::vector<double> point_field_u_mag(const pff::Vec& u, int n_nodes) {
  std::vector<double> mag(n_nodes);
  for (int n = 0; n < n_nodes; ++n) mag[n] = std::hypot(u[2 * n], u[2 * n + 1]);
  return mag;
}

std::vector<double> cell_field_abar(const std::vector<pff::QuadPointState>& states,
                                    int n_elements) {
  std::vector<double> abar(n_elements);
  for (int e = 0; e < n_elements; ++e) {
    double sum = 0.0;
    for (int q = 0; q < 4; ++q) sum += states[4 * e + q].abar;
    abar[e] = 0.25 * sum;
  }
  return abar;
}

void write_snapshot(const pff::Mesh& mesh, const pff::FatigueSolver& solver, double cycles,
                    const std::string& dir) {
  char name[64];
  std::snprintf(name, sizeof(name), "fields_c%08ld.vtk", std::lround(cycles));
  std::map<std::string, std::vector<double>> point_fields;
  point_fields["phi"] = std::vector<double>(solver.phi().data(),
                                            solver.phi().data() + solver.phi().size());
  point_fields["u_mag"] = point_field_u_mag(solver.u(), mesh.num_nodes());
  std::map<std::string, std::vector<double>> cell_fields;
  cell_fields["abar"] = cell_field_abar(solver.states(), mesh.num_elements());
  pff::write_vtk(mesh, point_fields, cell_fields, dir + "/" + name);
}

// Runs one strategy, writing snapshots and per-run CSVs into out_dir.
pff::RunResult execute(const pff::RunSpec& spec, bool write_outputs) {
  pff::Problem prob = pff::build_problem(spec);
  if (write_outputs) {
    fs::create_directories(spec.out_dir);
    std::ofstream resolved(spec.out_dir + "/spec.ini");
    resolved << pff::serialize_run_spec(spec);
    pff::write_vtk(prob.mesh, {}, {}, spec.out_dir + "/mesh.vtk");
  }

  pff::FatigueSolver solver(prob.mesh, prob.mat, prob.split, prob.bcs, prob.solver);
  const double snap_cycles =
      std::max(1.0, prob.program.total_cycles * spec.vtk_every_percent / 100.0);
  double next_snap = snap_cycles;
  const auto observer = [&](const pff::ProgressRecord& rec) {
    if (rec.cycles_done + 1e-9 < next_snap) return;
    while (next_snap <= rec.cycles_done + 1e-9) next_snap += snap_cycles;
    std::printf("inc=%ld cycles=%.6g passes=%d r_out=%.3e da=%.6g facts=%ld iters_u=%ld "
                "iters_phi=%ld\n",
                rec.increment, rec.cycles_done, rec.passes, rec.outer_residual,
                rec.crack_extension, rec.counters->factors.paired(), rec.counters->iters_u,
                rec.counters->iters_phi);
    if (write_outputs) write_snapshot(prob.mesh, solver, rec.cycles_done, spec.out_dir);
  };

  pff::RunResult result = solver.run(prob.program, observer);

  if (write_outputs) {
    write_snapshot(prob.mesh, solver, result.last_converged_cycle, spec.out_dir);
    pff::MetricsRow row{spec.strategy,
                        result.counters.wall_seconds,
                        result.counters.factors.paired(),
                        result.counters.iters_phi,
                        result.counters.iters_u,
                        result.final_extension};
    pff::write_metrics({row}, spec.out_dir + "/metrics.csv");
    pff::write_extension_history({{spec.strategy, result.extension_history}},
                                 spec.out_dir + "/history.csv");
  }

  std::printf("strategy=%s cycles=%.6g da=%.6g mm wall=%.3f s facts=%ld iters_u=%ld "
              "iters_phi=%ld converged=%d\n",
              spec.strategy.c_str(), result.last_converged_cycle, result.final_extension,
              result.counters.wall_seconds, result.counters.factors.paired(),
              result.counters.iters_u, result.counters.iters_phi, result.converged ? 1 : 0);
  if (!result.converged)
    std::fprintf(stderr, "run aborted: %s (last converged cycle %.6g)\n",
                 result.abort_reason.c_str(), result.last_converged_cycle);
  return result;
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D plane-strain phase-field fatigue solver"};
  app.require_subcommand(1);

  std::string spec_arg;
  Overrides ovr;

  auto* run_cmd = app.add_subcommand("run", "Run one analysis from a spec file or preset");
  run_cmd->add_option("spec", spec_arg, "Spec file path or preset name")->required();
  run_cmd->add_option("--cycles", ovr.cycles, "Override total cycle count");
  run_cmd->add_option("--strategy", ovr.strategy, "baseline|mn|cla|mn+cla");
  run_cmd->add_option("--split", ovr.split, "iso|voldev|spectral|notension");
  run_cmd->add_option("--ncycles", ovr.ncycles, "Cycles lumped per increment (cla strategies)");
  run_cmd->add_option("--out", ovr.out, "Output directory");

  std::string strategies_arg = "baseline,mn,cla,mn+cla";
  auto* cmp_cmd = app.add_subcommand("compare", "Run several strategies on the same problem");
  cmp_cmd->add_option("spec", spec_arg, "Spec file path or preset name")->required();
  cmp_cmd->add_option("--strategies", strategies_arg, "Comma-separated strategy list");
  cmp_cmd->add_option("--cycles", ovr.cycles, "Override total cycle count");
  cmp_cmd->add_option("--split", ovr.split, "iso|voldev|spectral|notension");
  cmp_cmd->add_option("--ncycles", ovr.ncycles, "Cycles lumped per increment (cla strategies)");
  cmp_cmd->add_option("--out", ovr.out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      pff::RunSpec spec = resolve_spec(spec_arg);
      apply_overrides(spec, ovr);
      const pff::RunResult result = execute(spec, true);
      return result.converged ? 0 : 2;
    }

    // compare
    pff::RunSpec base = resolve_spec(spec_arg);
    apply_overrides(base, ovr);
    const auto strategies = split_csv_list(strategies_arg);
    if (strategies.empty()) throw pff::ConfigError("--strategies: empty list");
    for (const auto& s : strategies) (void)pff::parse_strategy(s);

    fs::create_directories(base.out_dir);
    std::vector<pff::MetricsRow> rows;
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> histories;
    bool all_converged = true;
    for (const auto& s : strategies) {
      pff::RunSpec spec = base;
      spec.strategy = s;
      spec.out_dir = base.out_dir + "/" + s;
      const pff::RunResult result = execute(spec, true);
      all_converged = all_converged && result.converged;
      rows.push_back({s, result.counters.wall_seconds, result.counters.factors.paired(),
                      result.counters.iters_phi, result.counters.iters_u,
                      result.final_extension});
      histories.emplace_back(s, result.extension_history);
    }
    pff::write_metrics(rows, base.out_dir + "/compare_metrics.csv");
    pff::write_extension_history(histories, base.out_dir + "/compare_history.csv");
    std::printf("wrote %s/compare_metrics.csv (%zu strategies)\n", base.out_dir.c_str(),
                rows.size());
    return all_converged ? 0 : 2;
  } catch (const pff::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const pff::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
