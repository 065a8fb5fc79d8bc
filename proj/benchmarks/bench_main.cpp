#include <benchmark/benchmark.h>

#include "bdris/circuit.hpp"
#include "bdris/dsca_engine.hpp"
#include "bdris/linkalg.hpp"
#include "bdris/rng.hpp"
#include "bdris/scenario.hpp"
#include "bdris/switch_opt.hpp"

namespace {

using namespace bdris;

Scenario desk(int m, int k) {
  Scenario s;
  s.users = 2;
  s.bs_antennas = 4;
  s.ris_elements = m;
  s.subcarriers = k;
  s.delay_taps = 4;
  s.power_w = dbm_to_watt(30.0);
  s.noise_w = dbm_to_watt(-90.0);
  s.geometry = default_geometry(s.users, 60.0);
  return s;
}

void ReflectionEval(benchmark::State& state) {
  const CircuitParams p{};
  double c = 1e-12;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reflection(3.5e9, c, p));
    c = c >= 2.3e-12 ? 0.5e-12 : c + 1e-15;
  }
}
BENCHMARK(ReflectionEval);

void ConjGradEval(benchmark::State& state) {
  const CircuitParams p{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(reflection_conj_grad(3.5e9, 1e-12, p));
  }
}
BENCHMARK(ConjGradEval);

void CompositeChannel(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(1);
  Eigen::VectorXcd h(4), g(m), phi(m);
  Eigen::MatrixXcd hh(m, 4);
  for (int i = 0; i < 4; ++i) h[i] = rng.complex_gaussian(1.0);
  for (int i = 0; i < m; ++i) {
    g[i] = rng.complex_gaussian(1.0);
    phi[i] = rng.complex_gaussian(1.0);
    for (int j = 0; j < 4; ++j) hh(i, j) = rng.complex_gaussian(1.0);
  }
  const Eigen::MatrixXd s = Eigen::MatrixXd::Identity(m, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(composite_channel(h, g, s, phi, hh));
  }
}
BENCHMARK(CompositeChannel)->Arg(32)->Arg(100);

void LsapSolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(2);
  Eigen::MatrixXd score(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) score(i, j) = rng.uniform(-1.0, 1.0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lsap_max(score));
  }
}
BENCHMARK(LsapSolve)->Arg(16)->Arg(32)->Arg(100);

void LinkTableBuild(benchmark::State& state) {
  const Scenario s = desk(static_cast<int>(state.range(0)), 16);
  const ChannelSet ch = synthesize_channels(s);
  const auto states = initialize(s, ch);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_link_tables(ch, states, s));
  }
}
BENCHMARK(LinkTableBuild)->Arg(16)->Arg(64);

void EngineStep(benchmark::State& state) {
  const Scenario s = desk(static_cast<int>(state.range(0)), 16);
  for (auto _ : state) {
    state.PauseTiming();
    DscaEngine engine(s);
    state.ResumeTiming();
    engine.step();
  }
}
BENCHMARK(EngineStep)->Arg(16)->Arg(32)->Arg(100);

void FullDeskRun(benchmark::State& state) {
  Scenario s = desk(32, 16);
  for (auto _ : state) {
    s.seed += 1;  // fresh channels each repetition
    benchmark::DoNotOptimize(run(s));
  }
}
BENCHMARK(FullDeskRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
