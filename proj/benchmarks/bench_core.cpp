#include <benchmark/benchmark.h>

#include "qct/channel_algebra.hpp"
#include "qct/circuit.hpp"
#include "qct/di_protocol.hpp"

using namespace qct;

namespace {

// Channel on n qubits acting on a state with n reference qubits.
void BM_ApplyChoi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto c = depolarizing(n, n);
  const Matrix rho = random_density(dim_of(2 * n), dim_of(2 * n), 1).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(c.apply(rho, n));
}
BENCHMARK(BM_ApplyChoi)->DenseRange(1, 4);

void BM_DiamondAscent(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto id = QuantumChannel::identity(n);
  const auto dep = depolarizing(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(diamond_distance(id, dep, 4, 7).lower_bound);
}
BENCHMARK(BM_DiamondAscent)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_CircuitToChannel(benchmark::State& state) {
  CircuitBuilder b(3);
  b.h(0).cnot(0, 1).cnot(1, 2).trace_out({2});
  const auto circuit = b.build();
  for (auto _ : state) benchmark::DoNotOptimize(to_channel(circuit).choi());
}
BENCHMARK(BM_CircuitToChannel);

void BM_ProtocolExact(benchmark::State& state) {
  const auto inst = build_secure_instance(static_cast<int>(state.range(0)), 0.01);
  const auto proof = doubled_proof(PureState::maximally_entangled(inst.message_qubits()));
  for (auto _ : state) benchmark::DoNotOptimize(exact_accept_probability(inst, proof).probability);
}
BENCHMARK(BM_ProtocolExact)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_ProtocolSampled(benchmark::State& state) {
  const auto inst = build_secure_instance(1, 0.01);
  const auto proof = doubled_proof(PureState::maximally_entangled(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(run_protocol_sampled(inst, proof, static_cast<std::uint64_t>(state.range(0)), 3).accepts);
}
BENCHMARK(BM_ProtocolSampled)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
