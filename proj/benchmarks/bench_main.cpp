#include "pvmk/cuntz.hpp"
#include "pvmk/fixed_point.hpp"
#include "pvmk/ifs.hpp"
#include "pvmk/ovm.hpp"
#include "pvmk/rho.hpp"
#include "pvmk/rng.hpp"
#include "pvmk/transport.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace pvmk;

CylinderTower dyadic(std::size_t depth) { return build_tower(IfsSystem::uniform(2), depth); }

void BM_Kantorovich(benchmark::State& state) {
  const auto tower = dyadic(static_cast<std::size_t>(state.range(0)));
  const auto& space = *tower.space_ptr(tower.depth());
  SplitMix64 rng(11);
  const auto mu = random_prob_measure(space.size(), rng);
  const auto nu = random_prob_measure(space.size(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(kantorovich(space, mu, nu));
  state.SetLabel(std::to_string(space.size()) + " points");
}
BENCHMARK(BM_Kantorovich)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_Lip1Vertices(benchmark::State& state) {
  const auto tower = dyadic(static_cast<std::size_t>(state.range(0)));
  const auto& space = *tower.space_ptr(tower.depth());
  std::size_t count = 0;
  for (auto _ : state) {
    const auto v = lip1_vertices(space, 0, 10);
    count = v.size();
    benchmark::DoNotOptimize(count);
  }
  state.counters["vertices"] = static_cast<double>(count);
}
BENCHMARK(BM_Lip1Vertices)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_RhoExact(benchmark::State& state) {
  const auto tower = dyadic(3);
  const auto space = tower.space_ptr(3);
  SplitMix64 rng(5);
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  const auto e = random_povm(space, dim, rng);
  const auto f = random_povm(space, dim, rng);
  const auto vertices = lip1_vertices(*space, 0, 8);
  for (auto _ : state) benchmark::DoNotOptimize(rho_exact(e, f, vertices));
}
BENCHMARK(BM_RhoExact)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_PhiStep(benchmark::State& state) {
  const auto level = static_cast<std::size_t>(state.range(0));
  const CuntzTower ct(dyadic(level + 1));
  const auto seed = make_seed(ct, level, SeedKind::RandomPovm, 3);
  for (auto _ : state) benchmark::DoNotOptimize(phi_step(ct, level + 1, seed));
}
BENCHMARK(BM_PhiStep)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_CuntzVerify(benchmark::State& state) {
  const auto level = static_cast<std::size_t>(state.range(0));
  const CuntzTower ct(dyadic(level));
  for (auto _ : state) benchmark::DoNotOptimize(cuntz_verify(ct, level));
}
BENCHMARK(BM_CuntzVerify)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
