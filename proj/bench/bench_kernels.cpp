// Serial reference kernels against their OpenMP versions.
#include "cphase/kernels.hpp"
#include "cphase/overlaps.hpp"
#include "cphase/scattering.hpp"
#include "cphase/sweep.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace cphase;
using cplx = std::complex<double>;

namespace {

kernels::ExecPolicy policy(const benchmark::State& state) { return kernels::ExecPolicy{static_cast<int>(state.range(0))}; }

// One level of the sum-momentum convolution g(K) = sum_i w_i xi(k_i) s(k_i) xi(K - k_i).
void BM_PairConvolution(benchmark::State& state) {
    const auto profile = make_profile(Shape::gaussian, 1.72);
    const EmitterParams emitter;
    const auto quad = resolve(QuadratureSpec{}, profile);
    const NodeSet k = make_nodes(quad, 1025);
    const NodeSet sums = make_nodes(quad, 2049, 2.0);
    std::vector<cplx> left(k.size());
    for (std::size_t i = 0; i < k.size(); ++i)
        left[i] = k.weights[i] * profile.amplitude(k.points[i]) * s_pole(k.points[i], emitter);
    std::vector<cplx> out(sums.size());
    const auto xi = [&](double q) { return profile.amplitude(q); };
    for (auto _ : state) {
        kernels::pair_convolution(sums.points, k.points, left, xi, out, policy(state));
        benchmark::DoNotOptimize(out.data());
    }
}

// Two-photon amplitude on a 513 x 513 grid.
void BM_TwoPhotonFill(benchmark::State& state) {
    const auto profile = make_profile(Shape::gaussian, 1.72);
    QuadratureSpec quad;
    quad.nodes = 513;
    TwoPhotonOptions options;
    options.exec = policy(state);
    for (auto _ : state) {
        auto beta = two_photon_scatter(profile, EmitterParams{}, quad, options);
        benchmark::DoNotOptimize(beta.values.data());
    }
}

// A small gate-fidelity sweep: rows are independent tasks.
void BM_SweepRows(benchmark::State& state) {
    SweepSpec spec;
    spec.sigma = {1.0, 3.0, 8};
    spec.L = {0.0, 1.5, 8};
    for (auto _ : state) {
        auto r = run_sweep(spec, policy(state));
        benchmark::DoNotOptimize(r.cells.data());
    }
}

} // namespace

// Argument: worker count (1 = serial reference, 0 = OpenMP default team).
BENCHMARK(BM_PairConvolution)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwoPhotonFill)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepRows)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
