#include <benchmark/benchmark.h>

#include <algorithm>

#include "qcompact/convex_roof.hpp"
#include "qcompact/measures.hpp"
#include "qcompact/random.hpp"
#include "qcompact/schmidt_tree.hpp"

using namespace qcompact;

static void BM_CompactDecomposition(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SubsystemLayout layout(std::vector<std::size_t>(n, 2));
    const PureState psi = haar_random_state(layout, std::uint64_t{1});
    const Ordering o = Ordering::identity(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compact_decomposition(psi, o));
    }
}
BENCHMARK(BM_CompactDecomposition)->DenseRange(3, 10)->Unit(benchmark::kMicrosecond);

static void BM_EcAllOrderings(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SubsystemLayout layout(std::vector<std::size_t>(n, 2));
    const PureState psi = haar_random_state(layout, std::uint64_t{2});
    for (auto _ : state) {
        benchmark::DoNotOptimize(entanglement_value(psi));
    }
}
BENCHMARK(BM_EcAllOrderings)->DenseRange(3, 6)->Unit(benchmark::kMicrosecond);

static void BM_EcTenQubitsSampledOrderings(benchmark::State& state) {
    const SubsystemLayout layout(std::vector<std::size_t>(10, 2));
    const PureState psi = haar_random_state(layout, std::uint64_t{3});
    Rng rng(3);
    std::vector<Ordering> sample;
    for (std::size_t k = 0; k < 24; ++k) {
        Ordering o = Ordering::identity(10);
        std::shuffle(o.parties.begin(), o.parties.end(), rng);
        sample.push_back(o.canonical(layout));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(entanglement_pure(psi, sample));
    }
}
BENCHMARK(BM_EcTenQubitsSampledOrderings)->Unit(benchmark::kMillisecond);

static void BM_Membership(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SubsystemLayout layout(std::vector<std::size_t>(n, 2));
    const PureState psi = haar_random_state(layout, std::uint64_t{4});
    const auto sigma = decohere(compact_decomposition(psi, Ordering::identity(n)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_membership(psi, sigma));
    }
}
BENCHMARK(BM_Membership)->DenseRange(3, 5)->Unit(benchmark::kMicrosecond);

static void BM_RoofTwoQubits(benchmark::State& state) {
    const DensityMatrix rho = haar_random_density(SubsystemLayout({2, 2}), 2, std::uint64_t{5});
    RoofConfig cfg;
    cfg.ensemble_size = 4;
    cfg.restarts = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(roof_minimize(rho, cfg));
    }
}
BENCHMARK(BM_RoofTwoQubits)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
