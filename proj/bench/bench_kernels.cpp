// Serial reference kernels against their OpenMP counterparts.

#include <random>

#include <benchmark/benchmark.h>

#include "graft/kernels.hpp"
#include "graft/synthbench.hpp"

using namespace graft;
namespace ks = graft::kernels::serial;
namespace kp = graft::kernels::parallel;

namespace {

HeteroGraph source_graph(int n) {
  SynthSpec spec;
  spec.n_source = n;
  spec.n_target = n / 2;
  spec.seed = 1;
  return generate(spec).gs;
}

kernels::Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  kernels::Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = d(rng);
  return m;
}

kernels::Matrix binary(Eigen::Index n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  kernels::Matrix a = kernels::Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (coin(rng)) a(i, j) = a(j, i) = 1.0;
  return a;
}

template <auto Kernel>
void hop_distances(benchmark::State& state) {
  const HeteroGraph g = source_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(g));
}

template <auto Kernel>
void squared_row_distances(benchmark::State& state) {
  const kernels::Matrix u = gaussian(state.range(0), 16, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(u));
}

template <auto Kernel>
void upper_gram(benchmark::State& state) {
  std::vector<kernels::Matrix> owned;
  for (std::uint64_t k = 0; k < 8; ++k) owned.push_back(gaussian(state.range(0), state.range(0), 10 + k));
  kernels::MatrixList mats;
  for (const auto& m : owned) mats.push_back(&m);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(mats));
}

template <auto Kernel>
void pair_loss(benchmark::State& state) {
  const kernels::Matrix a = gaussian(state.range(0), state.range(0), 3);
  const kernels::Matrix b = gaussian(state.range(0), state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b, 2.0));
}

template <auto Kernel>
void residual_times(benchmark::State& state) {
  const auto op = kernels::SymmetricOperand::from_dense(binary(state.range(0), 0.01, 5));
  const kernels::Matrix u = gaussian(state.range(0), 16, 6);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(u, op));
}

template <auto Kernel>
void restart_walk(benchmark::State& state) {
  const HeteroGraph g = source_graph(static_cast<int>(state.range(0)));
  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < g.entity_count(); i += 3) seeds.push_back(i);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(g, seeds, kernels::RestartWalk{}));
}

}  // namespace

BENCHMARK(hop_distances<ks::hop_distances>)->Name("serial/hop_distances")->Arg(300)->Arg(1200);
BENCHMARK(hop_distances<kp::hop_distances>)->Name("parallel/hop_distances")->Arg(300)->Arg(1200);
BENCHMARK(squared_row_distances<ks::squared_row_distances>)->Name("serial/squared_row_distances")->Arg(1200);
BENCHMARK(squared_row_distances<kp::squared_row_distances>)->Name("parallel/squared_row_distances")->Arg(1200);
BENCHMARK(upper_gram<ks::upper_gram>)->Name("serial/upper_gram")->Arg(600);
BENCHMARK(upper_gram<kp::upper_gram>)->Name("parallel/upper_gram")->Arg(600);
BENCHMARK(pair_loss<ks::pair_loss>)->Name("serial/pair_loss")->Arg(1200);
BENCHMARK(pair_loss<kp::pair_loss>)->Name("parallel/pair_loss")->Arg(1200);
BENCHMARK(residual_times<ks::residual_times>)->Name("serial/residual_times")->Arg(900);
BENCHMARK(residual_times<kp::residual_times>)->Name("parallel/residual_times")->Arg(900);
BENCHMARK(restart_walk<ks::restart_walk>)->Name("serial/restart_walk")->Arg(1200);
BENCHMARK(restart_walk<kp::restart_walk>)->Name("parallel/restart_walk")->Arg(1200);

BENCHMARK_MAIN();
