#pragma once

#include <array>
#include <string>
#include <vector>

#include "pff/constitutive.hpp"
#include "pff/mesh.hpp"
#include "pff/solver.hpp"

namespace pff {

// A complete, serializable description of one analysis. The text format is
// INI-style: [section] headers, one `key = value` per line, full-line comments
// starting with '#'. Unknown sections or keys are hard errors. A `preset` key
// in [problem] seeds every field; explicit keys then override it, so a parsed
// file, its serialization, and the re-parsed result all describe the same
// problem.
//
// Units: lengths mm, moduli GPa, toughness kJ/m^2 in the file (stored
// internally as GPa*mm), energy densities GPa (= J/mm^3).
struct RunSpec {
  // [problem]
  std::string preset;                // empty for free-form problems
  std::string split = "notension";   // iso | voldev | spectral | notension
  std::string strategy = "baseline"; // baseline | mn | cla | mn+cla

  // [mesh]
  double width = 0.0, height = 0.0;
  double h_coarse = 0.0;
  bool has_refine = false;
  std::array<double, 4> refine_box{0, 0, 0, 0}; // x0 y0 x1 y1
  double h_fine = 0.0;
  bool has_crack = false;
  std::array<double, 4> crack_line{0, 0, 0, 0}; // mouth x,y then tip x,y
  std::vector<std::array<double, 3>> holes;     // cx cy r, removed as staircase voids
  struct NodeSetBox {
    std::string name;
    std::array<double, 4> box{0, 0, 0, 0}; // xmin xmax ymin ymax
  };
  std::vector<NodeSetBox> node_sets; // extra sets besides left/right/bottom/top

  // [bc]
  struct Fix {
    std::string set;
    std::string comps; // "x" | "y" | "both"
  };
  struct Drive {
    std::string set;
    std::string comp; // "x" | "y"
    double factor = 1.0;
  };
  std::vector<Fix> fixes;
  std::vector<Drive> drives;

  // [material]
  double E = 0.0;       // GPa
  double nu = 0.0;
  double Gc = 0.0;      // kJ/m^2
  double ell = 0.0;     // mm
  double alpha_T = 0.0; // J/mm^3; 0 means Gc/(12 ell)

  // [load]
  double u_max = 0.0; // mm
  double R = 0.0;
  long cycles = 0;
  long n_cla = 1; // cycles lumped per increment for cla strategies

  // [solver]
  double tol_in = 1e-5;
  double tol_out = 1e-4;
  long n_i = 25;
  long n_c = 100;
  long max_outer = 500;
  double crack_threshold = 0.95;

  // [output]
  std::string out_dir = "out";
  double vtk_every_percent = 10.0; // snapshot cadence in percent of total cycles
};

// Built-in problem definitions: "sent" and "tpb" at full scale,
// "sent-desk" and "tpb-desk" reduced for minutes-scale runs.
RunSpec preset_spec(const std::string& name);
std::vector<std::string> preset_names();

RunSpec parse_run_spec(const std::string& text);
RunSpec load_run_spec(const std::string& path);
std::string serialize_run_spec(const RunSpec& spec);

// Throws ConfigError listing every violation with its field path.
void validate_run_spec(const RunSpec& spec);

SplitKind parse_split(const std::string& name);
const char* split_name(SplitKind kind);

struct StrategyFlags {
  bool use_mn = false;
  bool use_cla = false;
};
StrategyFlags parse_strategy(const std::string& name);

// Everything the solver needs, realized from a validated spec.
struct Problem {
  Mesh mesh;
  MaterialParams mat;
  SplitKind split = SplitKind::NoTension;
  BoundaryConditions bcs;
  LoadProgram program;
  SolverConfig solver;
};

Problem build_problem(const RunSpec& spec);

}  // namespace pff
