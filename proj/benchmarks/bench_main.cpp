#include "plate/assembly.hpp"
#include "plate/estimate.hpp"
#include "plate/manufactured.hpp"
#include "plate/solve.hpp"
#include "plate/transfer.hpp"

#include <benchmark/benchmark.h>

using namespace plate;

namespace {

std::shared_ptr<const Mesh> square(int refinements) {
  return std::make_shared<const Mesh>(refine_uniform(unit_square_mesh(2), refinements));
}

SchemeConfig config_of(int s) {
  SchemeConfig c;
  c.scheme = static_cast<Scheme>(s);
  return c;
}

void BM_AssembleMatrix(benchmark::State& state) {
  const auto m = square(static_cast<int>(state.range(0)));
  const SchemeConfig c = config_of(static_cast<int>(state.range(1)));
  const DofMap d(m, space_of(c.scheme));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_matrix(d, c));
  state.counters["dofs"] = d.size();
  state.SetLabel(to_string(c.scheme));
}

void BM_Solve(benchmark::State& state) {
  const auto m = square(static_cast<int>(state.range(0)));
  const SchemeConfig c = config_of(static_cast<int>(state.range(1)));
  const DofMap d(m, space_of(c.scheme));
  const LinearSystem sys = assemble(d, c, manufactured_square().source());
  for (auto _ : state) benchmark::DoNotOptimize(solve_linear(sys));
  state.counters["dofs"] = d.size();
  state.SetLabel(to_string(c.scheme));
}

void BM_Estimate(benchmark::State& state) {
  const auto m = square(static_cast<int>(state.range(0)));
  const SchemeConfig c = config_of(static_cast<int>(state.range(1)));
  const SourceSpec src = manufactured_square().source();
  const Solution sol = solve_problem(m, c, src);
  for (auto _ : state) benchmark::DoNotOptimize(scheme_estimate(sol.field, c, src));
  state.counters["triangles"] = m->num_triangles();
  state.SetLabel(to_string(c.scheme));
}

void BM_Companion(benchmark::State& state) {
  const auto m = square(static_cast<int>(state.range(0)));
  const DofMap morley(m, SpaceKind::Morley), hct(m, SpaceKind::HCT);
  for (auto _ : state) benchmark::DoNotOptimize(companion_matrix(morley, hct));
  state.counters["dofs"] = morley.size();
}

void BM_RefineBisect(benchmark::State& state) {
  const Mesh m = refine_uniform(unit_square_mesh(4), static_cast<int>(state.range(0)));
  std::vector<int> marked;
  for (int t = 0; t < m.num_triangles(); t += 7) marked.push_back(t);
  for (auto _ : state) benchmark::DoNotOptimize(refine_bisect(m, marked));
  state.counters["triangles"] = m.num_triangles();
}

}  // namespace

BENCHMARK(BM_AssembleMatrix)->ArgsProduct({{3, 5}, {0, 1, 3, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->ArgsProduct({{3, 5}, {0, 1, 3, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Estimate)->ArgsProduct({{3, 5}, {0, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Companion)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RefineBisect)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
