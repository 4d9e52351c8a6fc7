#include "pff/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pff/errors.hpp"

namespace pff {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& path, const std::string& v) {
  std::istringstream in(v);
  double x = 0.0;
  if (!(in >> x) || !(in >> std::ws).eof())
    throw ConfigError(path + ": expected a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& path, const std::string& v) {
  std::istringstream in(v);
  long x = 0;
  if (!(in >> x) || !(in >> std::ws).eof())
    throw ConfigError(path + ": expected an integer, got '" + v + "'");
  return x;
}

std::vector<std::string> tokens(const std::string& v) {
  std::istringstream in(v);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::array<double, 4> to_box(const std::string& path, const std::string& v) {
  const auto t = tokens(v);
  if (t.size() != 4) throw ConfigError(path + ": expected 4 numbers, got '" + v + "'");
  return {to_double(path, t[0]), to_double(path, t[1]), to_double(path, t[2]),
          to_double(path, t[3])};
}

struct Record {
  std::string section, key, value;
  int line = 0;
};

std::vector<Record> scan(const std::string& text) {
  static const std::vector<std::string> known_sections = {"problem", "mesh",   "bc",
                                                          "material", "load",  "solver",
                                                          "output"};
  std::vector<Record> records;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(known_sections.begin(), known_sections.end(), section) ==
          known_sections.end())
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    records.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no});
  }
  return records;
}

struct ListClears {
  bool holes = false, node_sets = false, fixes = false, drives = false;
};

void apply_record(RunSpec& s, const Record& r, ListClears& cleared) {
  const std::string path = r.section + "." + r.key;
  if (r.section == "problem") {
    if (r.key == "preset") s.preset = r.value;
    else if (r.key == "split") s.split = r.value;
    else if (r.key == "strategy") s.strategy = r.value;
    else throw ConfigError("unknown key " + path);
  } else if (r.section == "mesh") {
    if (r.key == "width") s.width = to_double(path, r.value);
    else if (r.key == "height") s.height = to_double(path, r.value);
    else if (r.key == "h_coarse") s.h_coarse = to_double(path, r.value);
    else if (r.key == "h_fine") s.h_fine = to_double(path, r.value);
    else if (r.key == "refine_box") {
      s.refine_box = to_box(path, r.value);
      s.has_refine = true;
    } else if (r.key == "crack") {
      s.crack_line = to_box(path, r.value);
      s.has_crack = true;
    } else if (r.key == "hole") {
      if (!cleared.holes) { s.holes.clear(); cleared.holes = true; }
      const auto t = tokens(r.value);
      if (t.size() != 3) throw ConfigError(path + ": expected 'cx cy r'");
      s.holes.push_back({to_double(path, t[0]), to_double(path, t[1]), to_double(path, t[2])});
    } else if (r.key == "nodeset") {
      if (!cleared.node_sets) { s.node_sets.clear(); cleared.node_sets = true; }
      const auto t = tokens(r.value);
      if (t.size() != 5) throw ConfigError(path + ": expected 'name xmin xmax ymin ymax'");
      s.node_sets.push_back({t[0],
                             {to_double(path, t[1]), to_double(path, t[2]),
                              to_double(path, t[3]), to_double(path, t[4])}});
    } else throw ConfigError("unknown key " + path);
  } else if (r.section == "bc") {
    if (r.key == "fix") {
      if (!cleared.fixes) { s.fixes.clear(); cleared.fixes = true; }
      const auto t = tokens(r.value);
      if (t.size() != 2) throw ConfigError(path + ": expected 'set x|y|both'");
      s.fixes.push_back({t[0], t[1]});
    } else if (r.key == "drive") {
      if (!cleared.drives) { s.drives.clear(); cleared.drives = true; }
      const auto t = tokens(r.value);
      if (t.size() != 3) throw ConfigError(path + ": expected 'set x|y factor'");
      s.drives.push_back({t[0], t[1], to_double(path, t[2])});
    } else throw ConfigError("unknown key " + path);
  } else if (r.section == "material") {
    if (r.key == "E") s.E = to_double(path, r.value);
    else if (r.key == "nu") s.nu = to_double(path, r.value);
    else if (r.key == "Gc") s.Gc = to_double(path, r.value);
    else if (r.key == "ell") s.ell = to_double(path, r.value);
    else if (r.key == "alpha_T") s.alpha_T = to_double(path, r.value);
    else throw ConfigError("unknown key " + path);
  } else if (r.section == "load") {
    if (r.key == "u_max") s.u_max = to_double(path, r.value);
    else if (r.key == "R") s.R = to_double(path, r.value);
    else if (r.key == "cycles") s.cycles = to_long(path, r.value);
    else if (r.key == "n_cla") s.n_cla = to_long(path, r.value);
    else throw ConfigError("unknown key " + path);
  } else if (r.section == "solver") {
    if (r.key == "tol_in") s.tol_in = to_double(path, r.value);
    else if (r.key == "tol_out") s.tol_out = to_double(path, r.value);
    else if (r.key == "n_i") s.n_i = to_long(path, r.value);
    else if (r.key == "n_c") s.n_c = to_long(path, r.value);
    else if (r.key == "max_outer") s.max_outer = to_long(path, r.value);
    else if (r.key == "crack_threshold") s.crack_threshold = to_double(path, r.value);
    else throw ConfigError("unknown key " + path);
  } else if (r.section == "output") {
    if (r.key == "directory") s.out_dir = r.value;
    else if (r.key == "vtk_every_percent") s.vtk_every_percent = to_double(path, r.value);
    else throw ConfigError("unknown key " + path);
  } else {
    throw ConfigError("unknown section [" + r.section + "]");
  }
}

}  // namespace

std::vector<std::string> preset_names() { return {"sent", "sent-desk", "tpb", "tpb-desk"}; }

RunSpec preset_spec(const std::string& name) {
  RunSpec s;
  s.preset = name;
  if (name == "sent" || name == "sent-desk") {
    // Single-edge-notched 1 mm square: half-width mid-height crack, bottom
    // clamped, top sheared-constrained and driven in y.
    s.width = 1.0;
    s.height = 1.0;
    s.has_refine = true;
    s.refine_box = {0.0, 0.45, 1.0, 0.55};
    s.has_crack = true;
    s.crack_line = {0.0, 0.5, 0.5, 0.5};
    s.fixes = {{"bottom", "both"}, {"top", "x"}};
    s.drives = {{"top", "y", 1.0}};
    s.E = 210.0;
    s.nu = 0.3;
    s.Gc = 2.7;
    s.R = 0.0;
    if (name == "sent") {
      s.h_coarse = 0.015;
      s.h_fine = 0.003;
      s.ell = 0.016;
      s.u_max = 2e-4;
      s.cycles = 120000;
    } else {
      s.h_coarse = 0.025;
      s.h_fine = 0.0125;
      s.ell = 0.05;
      s.u_max = 8e-4;
      s.cycles = 500;
      s.tol_in = 1e-10;
    }
    return s;
  }
  if (name == "tpb" || name == "tpb-desk") {
    // Asymmetric three-point bending beam with a vertical edge notch and a
    // staircase of three holes deflecting the crack path.
    s.width = 8.0;
    s.height = 2.0;
    s.has_refine = true;
    s.has_crack = true;
    s.crack_line = {5.0, 0.0, 5.0, 0.4};
    s.holes = {{4.5, 0.55, 0.2}, {4.35, 1.05, 0.2}, {4.2, 1.55, 0.2}};
    s.node_sets = {{"support_left", {0.2, 0.3, 0.0, 0.0}},
                   {"support_right", {7.7, 7.8, 0.0, 0.0}},
                   {"platen", {3.94, 4.06, 2.0, 2.0}}};
    s.fixes = {{"support_left", "both"}, {"support_right", "y"}};
    s.drives = {{"platen", "y", -1.0}};
    s.E = 210.0;
    s.nu = 0.3;
    s.Gc = 2.7;
    s.R = 0.0;
    if (name == "tpb") {
      s.refine_box = {2.8, 0.0, 5.6, 2.0};
      s.h_coarse = 0.04;
      s.h_fine = 0.01;
      s.ell = 0.05;
      s.u_max = 0.003;
      s.cycles = 90000;
    } else {
      s.refine_box = {3.6, 0.0, 5.6, 2.0};
      s.h_coarse = 0.08;
      s.h_fine = 0.02;
      s.ell = 0.1;
      s.u_max = 3e-3;
      s.cycles = 2000;
    }
    return s;
  }
  throw ConfigError("unknown preset '" + name + "' (available: sent, sent-desk, tpb, tpb-desk)");
}

RunSpec parse_run_spec(const std::string& text) {
  const auto records = scan(text);
  RunSpec spec;
  for (const auto& r : records)
    if (r.section == "problem" && r.key == "preset") spec = preset_spec(r.value);
  ListClears cleared;
  for (const auto& r : records) apply_record(spec, r, cleared);
  return spec;
}

RunSpec load_run_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_spec(buf.str());
}

std::string serialize_run_spec(const RunSpec& s) {
  std::ostringstream out;
  out << "[problem]\n";
  if (!s.preset.empty()) out << "preset = " << s.preset << "\n";
  out << "split = " << s.split << "\n";
  out << "strategy = " << s.strategy << "\n";
  out << "\n[mesh]\n";
  out << "width = " << fmt(s.width) << "\n";
  out << "height = " << fmt(s.height) << "\n";
  out << "h_coarse = " << fmt(s.h_coarse) << "\n";
  if (s.has_refine) {
    out << "refine_box = " << fmt(s.refine_box[0]) << " " << fmt(s.refine_box[1]) << " "
        << fmt(s.refine_box[2]) << " " << fmt(s.refine_box[3]) << "\n";
    out << "h_fine = " << fmt(s.h_fine) << "\n";
  }
  if (s.has_crack)
    out << "crack = " << fmt(s.crack_line[0]) << " " << fmt(s.crack_line[1]) << " "
        << fmt(s.crack_line[2]) << " " << fmt(s.crack_line[3]) << "\n";
  for (const auto& h : s.holes)
    out << "hole = " << fmt(h[0]) << " " << fmt(h[1]) << " " << fmt(h[2]) << "\n";
  for (const auto& ns : s.node_sets)
    out << "nodeset = " << ns.name << " " << fmt(ns.box[0]) << " " << fmt(ns.box[1]) << " "
        << fmt(ns.box[2]) << " " << fmt(ns.box[3]) << "\n";
  out << "\n[bc]\n";
  for (const auto& f : s.fixes) out << "fix = " << f.set << " " << f.comps << "\n";
  for (const auto& d : s.drives)
    out << "drive = " << d.set << " " << d.comp << " " << fmt(d.factor) << "\n";
  out << "\n[material]\n";
  out << "E = " << fmt(s.E) << "\n";
  out << "nu = " << fmt(s.nu) << "\n";
  out << "Gc = " << fmt(s.Gc) << "\n";
  out << "ell = " << fmt(s.ell) << "\n";
  out << "alpha_T = " << fmt(s.alpha_T) << "\n";
  out << "\n[load]\n";
  out << "u_max = " << fmt(s.u_max) << "\n";
  out << "R = " << fmt(s.R) << "\n";
  out << "cycles = " << s.cycles << "\n";
  out << "n_cla = " << s.n_cla << "\n";
  out << "\n[solver]\n";
  out << "tol_in = " << fmt(s.tol_in) << "\n";
  out << "tol_out = " << fmt(s.tol_out) << "\n";
  out << "n_i = " << s.n_i << "\n";
  out << "n_c = " << s.n_c << "\n";
  out << "max_outer = " << s.max_outer << "\n";
  out << "crack_threshold = " << fmt(s.crack_threshold) << "\n";
  out << "\n[output]\n";
  out << "directory = " << s.out_dir << "\n";
  out << "vtk_every_percent = " << fmt(s.vtk_every_percent) << "\n";
  return out.str();
}

SplitKind parse_split(const std::string& name) {
  if (name == "iso") return SplitKind::Isotropic;
  if (name == "voldev") return SplitKind::VolDev;
  if (name == "spectral") return SplitKind::Spectral;
  if (name == "notension") return SplitKind::NoTension;
  throw ConfigError("unknown split '" + name + "' (expected iso|voldev|spectral|notension)");
}

const char* split_name(SplitKind kind) {
  switch (kind) {
    case SplitKind::Isotropic: return "iso";
    case SplitKind::VolDev: return "voldev";
    case SplitKind::Spectral: return "spectral";
    case SplitKind::NoTension: return "notension";
  }
  return "?";
}

StrategyFlags parse_strategy(const std::string& name) {
  if (name == "baseline") return {false, false};
  if (name == "mn") return {true, false};
  if (name == "cla") return {false, true};
  if (name == "mn+cla") return {true, true};
  throw ConfigError("unknown strategy '" + name + "' (expected baseline|mn|cla|mn+cla)");
}

void validate_run_spec(const RunSpec& s) {
  std::vector<std::string> errs;
  const auto check = [&](bool ok, const std::string& msg) {
    if (!ok) errs.push_back(msg);
  };
  try {
    (void)parse_split(s.split);
  } catch (const ConfigError& e) {
    errs.push_back(std::string("problem.split: ") + e.what());
  }
  try {
    (void)parse_strategy(s.strategy);
  } catch (const ConfigError& e) {
    errs.push_back(std::string("problem.strategy: ") + e.what());
  }
  check(s.width > 0.0, "mesh.width: must be positive");
  check(s.height > 0.0, "mesh.height: must be positive");
  check(s.h_coarse > 0.0, "mesh.h_coarse: must be positive");
  if (s.has_refine) {
    check(s.h_fine > 0.0, "mesh.h_fine: must be positive");
    check(s.h_fine <= s.h_coarse || s.h_coarse <= 0.0,
          "mesh.h_fine: must not exceed h_coarse");
    const auto& b = s.refine_box;
    check(b[0] < b[2] && b[1] < b[3], "mesh.refine_box: needs x0 < x1 and y0 < y1");
    check(b[0] >= 0.0 && b[1] >= 0.0 && b[2] <= s.width && b[3] <= s.height,
          "mesh.refine_box: lies outside the domain");
  } else {
    check(s.h_fine == 0.0, "mesh.h_fine: set without refine_box");
  }
  for (size_t i = 0; i < s.holes.size(); ++i)
    check(s.holes[i][2] > 0.0, "mesh.hole[" + std::to_string(i) + "]: radius must be positive");
  for (const auto& ns : s.node_sets) {
    check(!ns.name.empty(), "mesh.nodeset: empty name");
    check(ns.box[0] <= ns.box[1] && ns.box[2] <= ns.box[3],
          "mesh.nodeset '" + ns.name + "': needs xmin <= xmax and ymin <= ymax");
  }
  for (const auto& f : s.fixes)
    check(f.comps == "x" || f.comps == "y" || f.comps == "both",
          "bc.fix '" + f.set + "': component must be x, y, or both");
  for (const auto& d : s.drives)
    check(d.comp == "x" || d.comp == "y",
          "bc.drive '" + d.set + "': component must be x or y");
  check(!s.drives.empty(), "bc: at least one driven boundary is required");
  check(s.E > 0.0, "material.E: must be positive");
  check(s.nu > -1.0 && s.nu < 0.5, "material.nu: must lie in (-1, 0.5)");
  check(s.Gc > 0.0, "material.Gc: must be positive");
  check(s.ell > 0.0, "material.ell: must be positive");
  check(s.alpha_T >= 0.0, "material.alpha_T: must be non-negative (0 selects the default)");
  check(s.u_max > 0.0, "load.u_max: must be positive");
  check(s.R < 1.0, "load.R: must be below 1");
  check(s.cycles >= 1, "load.cycles: must be at least 1");
  check(s.n_cla >= 1, "load.n_cla: must be at least 1");
  check(s.tol_in > 0.0 && s.tol_in <= s.tol_out, "solver.tol_in: needs 0 < tol_in <= tol_out");
  check(s.tol_out > 0.0, "solver.tol_out: must be positive");
  check(s.n_i >= 1, "solver.n_i: must be at least 1");
  check(s.n_c >= 1, "solver.n_c: must be at least 1");
  check(s.max_outer >= 1, "solver.max_outer: must be at least 1");
  check(s.crack_threshold > 0.0 && s.crack_threshold < 1.0,
        "solver.crack_threshold: must lie in (0, 1)");
  check(!s.out_dir.empty(), "output.directory: must not be empty");
  check(s.vtk_every_percent > 0.0 && s.vtk_every_percent <= 100.0,
        "output.vtk_every_percent: must lie in (0, 100]");
  if (!errs.empty()) {
    std::string all = errs[0];
    for (size_t i = 1; i < errs.size(); ++i) all += "; " + errs[i];
    throw ConfigError(all);
  }
}

Problem build_problem(const RunSpec& s) {
  validate_run_spec(s);
  Problem p;

  std::optional<RefinementSpec> refine;
  if (s.has_refine)
    refine = RefinementSpec{s.refine_box[0], s.refine_box[1], s.refine_box[2], s.refine_box[3],
                            s.h_fine};
  p.mesh = generate_rect_mesh(s.width, s.height, s.h_coarse, refine);
  for (const auto& h : s.holes)
    remove_elements(p.mesh, [&](double x, double y) {
      return (x - h[0]) * (x - h[0]) + (y - h[1]) * (y - h[1]) <= h[2] * h[2];
    });

  const double tol = 1e-9 * std::max({s.width, s.height, 1.0});
  for (const auto& ns : s.node_sets) {
    auto nodes = select_nodes(p.mesh, [&](double x, double y) {
      return x >= ns.box[0] - tol && x <= ns.box[1] + tol && y >= ns.box[2] - tol &&
             y <= ns.box[3] + tol;
    });
    if (nodes.empty())
      throw ConfigError("mesh.nodeset '" + ns.name + "' selected no nodes");
    p.mesh.node_sets[ns.name] = std::move(nodes);
  }

  if (s.has_crack) {
    CrackSpec crack{{s.crack_line[0], s.crack_line[1]}, {s.crack_line[2], s.crack_line[3]}};
    p.bcs.crack_nodes = initial_crack_nodes(p.mesh, crack);
    p.bcs.crack_tip = crack.tip;
    p.bcs.has_crack = true;
  }

  const auto lookup = [&](const std::string& ctx,
                          const std::string& name) -> const std::vector<int>& {
    const auto it = p.mesh.node_sets.find(name);
    if (it == p.mesh.node_sets.end())
      throw ConfigError(ctx + " references unknown node set '" + name + "'");
    return it->second;
  };
  for (const auto& f : s.fixes)
    for (int n : lookup("bc.fix", f.set)) {
      if (f.comps == "x" || f.comps == "both") p.bcs.fixed.emplace_back(n, 0);
      if (f.comps == "y" || f.comps == "both") p.bcs.fixed.emplace_back(n, 1);
    }
  for (const auto& d : s.drives)
    for (int n : lookup("bc.drive", d.set))
      p.bcs.driven.push_back({static_cast<double>(n), d.comp == "x" ? 0.0 : 1.0, d.factor});

  p.mat = make_material(s.E, s.nu, s.Gc * 1e-3, s.ell, s.alpha_T);
  p.split = parse_split(s.split);

  const auto flags = parse_strategy(s.strategy);
  p.program.u_max = s.u_max;
  p.program.R = s.R;
  p.program.total_cycles = s.cycles;
  p.program.mode = flags.use_cla ? LoadMode::CLA
                                 : (s.R < 0.0 ? LoadMode::ResolvedRneg : LoadMode::ResolvedR0);

  p.solver.tol_in = s.tol_in;
  p.solver.tol_out = s.tol_out;
  p.solver.n_i = s.n_i;
  p.solver.n_c = s.n_c;
  p.solver.max_outer = s.max_outer;
  p.solver.crack_threshold = s.crack_threshold;
  p.solver.use_mn = flags.use_mn;
  p.solver.use_cla = flags.use_cla;
  p.solver.cla_cycles = s.n_cla;
  return p;
}

}  // namespace pff
