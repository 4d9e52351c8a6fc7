// Microbenchmarks for the kernels that dominate a fatigue run: element
// assembly (with and without the tangent) and the factorize/backsolve pair
// whose cost ratio motivates reusing factorizations across iterations.
#include <benchmark/benchmark.h>

#include "pff/assembly.hpp"
#include "pff/linsolve.hpp"
#include "pff/mesh.hpp"

namespace {

struct Fixture {
  pff::Mesh mesh;
  pff::MaterialParams mat;
  pff::Assembler assembler;
  pff::Vec u, phi;

  Fixture()
      : mesh(pff::generate_rect_mesh(1.0, 1.0, 0.025,
                                     pff::RefinementSpec{0.0, 0.45, 1.0, 0.55, 0.0125})),
        mat(pff::make_material(210.0, 0.3, 2.7e-3, 0.05)),
        assembler(mesh, mat, pff::SplitKind::NoTension),
        u(pff::Vec::Zero(assembler.n_u_dofs())),
        phi(pff::Vec::Zero(assembler.n_phi_dofs())) {
    for (int n : mesh.node_sets.at("bottom")) {
      assembler.u_map().constrain(2 * n, 0.0);
      assembler.u_map().constrain(2 * n + 1, 0.0);
    }
    for (int n : mesh.node_sets.at("top")) {
      assembler.u_map().constrain(2 * n, 0.0);
      assembler.u_map().constrain(2 * n + 1, 1e-3);
      u[2 * n + 1] = 1e-3;
    }
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_DisplacementResidual(benchmark::State& state) {
  auto& f = fixture();
  pff::Vec r;
  for (auto _ : state) {
    f.assembler.displacement_system(f.u, f.phi, nullptr, r);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.num_elements());
}
BENCHMARK(BM_DisplacementResidual)->Unit(benchmark::kMillisecond);

void BM_DisplacementFullSystem(benchmark::State& state) {
  auto& f = fixture();
  pff::SpMat K = f.assembler.create_u_matrix();
  pff::Vec r;
  for (auto _ : state) {
    f.assembler.displacement_system(f.u, f.phi, &K, r);
    benchmark::DoNotOptimize(K.valuePtr());
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.num_elements());
}
BENCHMARK(BM_DisplacementFullSystem)->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
  auto& f = fixture();
  pff::SpMat K = f.assembler.create_u_matrix();
  pff::Vec r;
  f.assembler.displacement_system(f.u, f.phi, &K, r);
  pff::FactorCounter counter;
  pff::SubproblemSolver solver(pff::Subproblem::Displacement, &counter);
  solver.analyze_pattern(K);
  for (auto _ : state) {
    solver.factorize(K, 0);
    benchmark::DoNotOptimize(solver.current());
  }
}
BENCHMARK(BM_Factorize)->Unit(benchmark::kMillisecond);

void BM_Backsolve(benchmark::State& state) {
  auto& f = fixture();
  pff::SpMat K = f.assembler.create_u_matrix();
  pff::Vec r;
  f.assembler.displacement_system(f.u, f.phi, &K, r);
  pff::FactorCounter counter;
  pff::SubproblemSolver solver(pff::Subproblem::Displacement, &counter);
  solver.analyze_pattern(K);
  solver.factorize(K, 0);
  pff::Vec x;
  for (auto _ : state) {
    x = solver.current().solve(r);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_Backsolve)->Unit(benchmark::kMillisecond);

void BM_PhaseFieldFullSystem(benchmark::State& state) {
  auto& f = fixture();
  pff::SpMat K = f.assembler.create_phi_matrix();
  pff::Vec r;
  std::vector<pff::QuadPointState> states(f.assembler.n_quad_points());
  std::vector<double> history(f.assembler.n_quad_points(), 1e-4);
  for (auto _ : state) {
    f.assembler.phasefield_system(f.phi, states, history, &K, r);
    benchmark::DoNotOptimize(K.valuePtr());
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.num_elements());
}
BENCHMARK(BM_PhaseFieldFullSystem)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
