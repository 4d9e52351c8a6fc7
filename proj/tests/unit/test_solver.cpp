#include <cmath>

#include <doctest.h>

#include "pff/assembly.hpp"
#include "pff/errors.hpp"
#include "pff/mesh.hpp"
#include "pff/solver.hpp"

using namespace pff;

namespace {

// 0.2 x 0.1 mm strip, 8x4 elements: bottom clamped, top pulled in y.
struct Strip {
  Mesh mesh;
  MaterialParams mat;
  BoundaryConditions bcs;
  SolverConfig cfg;

  Strip() {
    mesh = generate_rect_mesh(0.2, 0.1, 0.025);
    mat = make_material(210.0, 0.3, 2.7e-3, 0.1);
    for (int n : mesh.node_sets.at("bottom")) {
      bcs.fixed.emplace_back(n, 0);
      bcs.fixed.emplace_back(n, 1);
    }
    for (int n : mesh.node_sets.at("top"))
      bcs.driven.push_back({static_cast<double>(n), 1.0, 1.0});
  }
};

LoadProgram pulsating(double u_max, long cycles) {
  LoadProgram p;
  p.u_max = u_max;
  p.R = 0.0;
  p.total_cycles = cycles;
  p.mode = LoadMode::ResolvedR0;
  return p;
}

}  // namespace

TEST_CASE("zero-load increment converges trivially") {
  Strip s;
  FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
  const auto stats = solver.staggered_increment(0.0, 0.0, LoadMode::ResolvedR0, 0.0);
  CHECK(stats.passes == 1);
  CHECK(solver.u().lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(solver.phi().lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("increment counts per load mode") {
  SUBCASE("pulsating: two per cycle") {
    Strip s;
    FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
    const auto result = solver.run(pulsating(1e-6, 10));
    CHECK(result.converged);
    CHECK(result.counters.increments == 20);
    CHECK(result.extension_history.size() == 20);
    CHECK(result.extension_history.front().first == doctest::Approx(0.5));
    CHECK(result.extension_history.back().first == doctest::Approx(10.0));
  }
  SUBCASE("alternating: four per cycle") {
    Strip s;
    FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
    LoadProgram p;
    p.u_max = 1e-6;
    p.R = -0.5;
    p.total_cycles = 2;
    p.mode = LoadMode::ResolvedRneg;
    const auto result = solver.run(p);
    CHECK(result.converged);
    CHECK(result.counters.increments == 8);
  }
  SUBCASE("lumped cycles with remainder") {
    Strip s;
    s.cfg.use_cla = true;
    s.cfg.cla_cycles = 4;
    FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
    LoadProgram p = pulsating(1e-6, 10);
    p.mode = LoadMode::CLA;
    const auto result = solver.run(p);
    CHECK(result.converged);
    CHECK(result.counters.increments == 3);
    REQUIRE(result.extension_history.size() == 3);
    CHECK(result.extension_history[0].first == doctest::Approx(4.0));
    CHECK(result.extension_history[1].first == doctest::Approx(8.0));
    CHECK(result.extension_history[2].first == doctest::Approx(10.0));
  }
}

TEST_CASE("elastic increment matches a one-shot linear solve") {
  Strip s;
  FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
  const double u_top = 1e-6;
  solver.staggered_increment(u_top, 0.0, LoadMode::ResolvedR0, 0.0);

  Assembler assembler(s.mesh, s.mat, SplitKind::NoTension);
  Vec u_ref = Vec::Zero(assembler.n_u_dofs());
  for (const auto& [node, comp] : s.bcs.fixed) assembler.u_map().constrain(2 * node + comp, 0.0);
  for (const auto& d : s.bcs.driven) {
    const int dof = 2 * static_cast<int>(d[0]) + static_cast<int>(d[1]);
    assembler.u_map().constrain(dof, d[2] * u_top);
    u_ref[dof] = d[2] * u_top;
  }
  const Vec phi0 = Vec::Zero(assembler.n_phi_dofs());
  SpMat K = assembler.create_u_matrix();
  Vec r;
  assembler.displacement_system(u_ref, phi0, &K, r);
  Eigen::SimplicialLDLT<SpMat> ldlt(K);
  REQUIRE(ldlt.info() == Eigen::Success);
  u_ref -= Vec(ldlt.solve(r));

  CHECK((solver.u() - u_ref).lpNorm<Eigen::Infinity>() <= 1e-12 * u_top + 1e-18);
  CHECK(solver.phi().lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("factorization accounting across strategies") {
  SUBCASE("stale tangents are refreshed on schedule") {
    Strip s;
    s.cfg.use_mn = true;
    s.cfg.use_cla = true;
    s.cfg.cla_cycles = 1;
    s.cfg.n_c = 100;
    FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
    LoadProgram p = pulsating(1e-6, 250);
    p.mode = LoadMode::CLA;
    const auto result = solver.run(p);
    CHECK(result.converged);
    CHECK(result.counters.increments == 250);
    CHECK(result.counters.inner_failures == 0);
    CHECK(result.counters.factors.paired() == 3);  // increments 1, 101, 201
    CHECK(result.counters.factors.phasefield == 3);
  }
  SUBCASE("baseline refactorizes every iteration") {
    Strip s;
    FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
    const auto result = solver.run(pulsating(1e-6, 25));
    CHECK(result.converged);
    CHECK(result.counters.increments == 50);
    CHECK(result.counters.factors.displacement == result.counters.iters_u);
    CHECK(result.counters.factors.phasefield == result.counters.iters_phi);
    CHECK(result.counters.iters_u >= 50);
    CHECK(result.counters.outer_passes >= 50);
  }
}

TEST_CASE("repeat runs are bit-identical") {
  const auto once = [] {
    Strip s;
    FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
    auto result = solver.run(pulsating(4e-4, 5));
    return result;
  };
  const auto a = once();
  const auto b = once();
  CHECK(a.converged);
  CHECK(a.extension_history == b.extension_history);
  CHECK((a.u - b.u).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((a.phi - b.phi).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("staggered scheme demands the cross residual") {
  Strip s;
  s.cfg.tol_in = 1e-8;
  s.cfg.tol_out = 1e-7;
  FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
  // Large enough to raise a meaningful driving force in the first increment:
  // the first phase-field solve still sees zero history, so one pass cannot
  // satisfy the outer residual.
  const auto stats = solver.staggered_increment(5e-4, 0.0, LoadMode::ResolvedR0, 0.0);
  CHECK(stats.passes >= 2);
  CHECK(stats.outer_residual <= 1e-7);
}

TEST_CASE("outer cap aborts the run but keeps partial results") {
  Strip s;
  s.cfg.tol_in = 1e-8;
  s.cfg.tol_out = 1e-7;
  s.cfg.max_outer = 1;
  FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
  const auto result = solver.run(pulsating(5e-4, 3));
  CHECK_FALSE(result.converged);
  CHECK(result.abort_reason.find("max_outer") != std::string::npos);
  CHECK(result.last_converged_cycle == 0.0);
  CHECK(result.extension_history.empty());
}

TEST_CASE("program validation") {
  Strip s;
  FatigueSolver solver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg);
  CHECK_THROWS_AS(solver.run(pulsating(0.0, 10)), ConfigError);
  CHECK_THROWS_AS(solver.run(pulsating(1e-6, 0)), ConfigError);
  LoadProgram bad_r = pulsating(1e-6, 10);
  bad_r.R = 1.5;
  CHECK_THROWS_AS(solver.run(bad_r), ConfigError);
  LoadProgram rneg = pulsating(1e-6, 10);
  rneg.mode = LoadMode::ResolvedRneg;  // R = 0 is inconsistent with this mode
  CHECK_THROWS_AS(solver.run(rneg), ConfigError);
  LoadProgram cla = pulsating(1e-6, 10);
  cla.mode = LoadMode::CLA;  // solver was not configured for lumped cycles
  CHECK_THROWS_AS(solver.run(cla), ConfigError);
}

TEST_CASE("solver configuration validation") {
  Strip s;
  SUBCASE("inverted tolerances") {
    s.cfg.tol_in = 1e-3;
    s.cfg.tol_out = 1e-5;
    CHECK_THROWS_AS(FatigueSolver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg),
                    ConfigError);
  }
  SUBCASE("threshold out of range") {
    s.cfg.crack_threshold = 1.5;
    CHECK_THROWS_AS(FatigueSolver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg),
                    ConfigError);
  }
  SUBCASE("lumping needs at least one cycle") {
    s.cfg.use_cla = true;
    s.cfg.cla_cycles = 0;
    CHECK_THROWS_AS(FatigueSolver(s.mesh, s.mat, SplitKind::NoTension, s.bcs, s.cfg),
                    ConfigError);
  }
}

TEST_CASE("initial crack nodes stay fully broken") {
  Mesh mesh = generate_rect_mesh(0.4, 0.4, 0.05);
  const auto mat = make_material(210.0, 0.3, 2.7e-3, 0.1);
  BoundaryConditions bcs;
  for (int n : mesh.node_sets.at("bottom")) {
    bcs.fixed.emplace_back(n, 0);
    bcs.fixed.emplace_back(n, 1);
  }
  for (int n : mesh.node_sets.at("top"))
    bcs.driven.push_back({static_cast<double>(n), 1.0, 1.0});
  bcs.crack_nodes = initial_crack_nodes(mesh, CrackSpec{{0.0, 0.2}, {0.2, 0.2}});
  bcs.crack_tip = {0.2, 0.2};
  bcs.has_crack = true;
  REQUIRE_FALSE(bcs.crack_nodes.empty());

  SolverConfig cfg;
  FatigueSolver solver(mesh, mat, SplitKind::NoTension, bcs, cfg);
  for (int n : bcs.crack_nodes) CHECK(solver.phi()[n] == 1.0);
  const auto result = solver.run(pulsating(2e-4, 3));
  CHECK(result.converged);
  for (int n : bcs.crack_nodes) CHECK(result.phi[n] == 1.0);
  CHECK(result.phi_min_seen >= -1e-6);
  CHECK(result.phi_max_seen <= 1.0 + 1e-6);
  CHECK(result.state_monotonicity_violations == 0);
  CHECK(result.crack_set_size >= static_cast<long>(bcs.crack_nodes.size()));
  CHECK(result.final_extension >= 0.0);
}
