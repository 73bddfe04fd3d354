// Lateral-interaction convolution: serial reference, OpenMP and FFT paths.
//
//   ./build/dnf_bench --benchmark_min_time=0.2
//   OMP_NUM_THREADS=4 ./build/dnf_bench --benchmark_filter=parallel

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dnf/convolution.hpp"
#include "dnf/grid.hpp"
#include "dnf/model.hpp"
#include "dnf/scenario.hpp"

namespace {

const dnf::KernelParams kKernel{6.0, 0.7, 6.0, 2.5, 0.05};

void convolve(benchmark::State& state, dnf::ConvolutionMethod method) {
  const auto n = state.range(0);
  const auto grid = dnf::build_grid(-10, 10, n);
  const dnf::LateralConvolver conv(grid, kKernel, method);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> activity(grid.size()), out(grid.size());
  for (auto& a : activity) a = d(rng);
  for (auto _ : state) {
    conv.convolve(activity, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_reference(benchmark::State& s) { convolve(s, dnf::ConvolutionMethod::reference); }
void BM_parallel(benchmark::State& s) { convolve(s, dnf::ConvolutionMethod::parallel); }
void BM_fft(benchmark::State& s) { convolve(s, dnf::ConvolutionMethod::fft); }

BENCHMARK(BM_reference)->RangeMultiplier(4)->Range(101, 6401);
BENCHMARK(BM_parallel)->RangeMultiplier(4)->Range(101, 6401);
BENCHMARK(BM_fft)->RangeMultiplier(4)->Range(101, 6401);

// One full model step of the bundled scenario (three layers, N = 401).
void BM_model_step(benchmark::State& state) {
  const auto sc = dnf::parse_scenario(dnf::bundled_scenario("shadowing"));
  const dnf::Model model(sc.model, static_cast<dnf::ConvolutionMethod>(state.range(0)));
  auto s = model.initial_state();
  const auto& inputs = sc.schedule[1].inputs;
  std::size_t n = 1000;  // response window, gate open
  for (auto _ : state) {
    model.step(s, inputs, n, sc.run.dt, nullptr);
    if (++n == 2000) n = 1000;
  }
}
BENCHMARK(BM_model_step)
    ->Arg(static_cast<int>(dnf::ConvolutionMethod::reference))
    ->Arg(static_cast<int>(dnf::ConvolutionMethod::fft));

}  // namespace

BENCHMARK_MAIN();
