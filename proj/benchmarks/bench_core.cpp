// Microbenchmarks for the numeric hot paths: quad-precision primitives, the
// window-table build, weighted averaging, map iteration, and spectrum mode
// extraction. These timings drove the engine layout (incremental phase
// rotation instead of per-sample sin/cos, chunked mode batches), so keeping
// them runnable guards against regressions in the expensive kernels.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <span>
#include <vector>

#include "qpo/maps.hpp"
#include "qpo/projection.hpp"
#include "qpo/spectrum.hpp"
#include "qpo/weights.hpp"
#include "qpo/xreal.hpp"

using qpo::ProjectionSpec;
using qpo::SiegelMapParams;
using qpo::Spectrum;
using qpo::SpectrumOptions;
using qpo::Trajectory;
using qpo::WeightKind;
using qpo::WeightTable;
using qpo::XComplex;
using qpo::XReal;

namespace {

constexpr std::size_t kCacheSize = 1 << 17;

// One bounded orbit, built once and sliced by the benchmarks below.
const Trajectory& cached_orbit() {
    static const Trajectory t = iterate(SiegelMapParams(qpo::constants::golden_mean()),
                                        XComplex(XReal::parse("0.2")), kCacheSize);
    return t;
}

Trajectory orbit_prefix(std::size_t n) {
    const Trajectory& full = cached_orbit();
    Trajectory t;
    t.meta = full.meta;
    t.meta.n_requested = n;
    t.x.assign(full.x.begin(), full.x.begin() + static_cast<std::ptrdiff_t>(n));
    return t;
}

}  // namespace

static void BM_complex_multiply_accumulate(benchmark::State& state) {
    const XComplex w = qpo::exp_i2pi(qpo::constants::golden_mean());
    XComplex acc(XReal(0));
    XComplex z(XReal(1));
    for (auto _ : state) {
        z = z * w;
        acc = acc + z;
    }
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_complex_multiply_accumulate);

static void BM_exp_i2pi(benchmark::State& state) {
    const XReal rho = qpo::constants::golden_mean();
    XReal t(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qpo::exp_i2pi(t));
        t = frac(t + rho);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_exp_i2pi);

static void BM_atan2_turns(benchmark::State& state) {
    const XComplex w = qpo::exp_i2pi(qpo::constants::golden_mean());
    XComplex p(XReal(1), XReal::parse("0.25"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qpo::atan2_turns(p.im, p.re));
        p = p * w;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_atan2_turns);

static void BM_weight_table(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const WeightTable table(WeightKind::bump(2), n);
        benchmark::DoNotOptimize(table);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_weight_table)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_weighted_average(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::span<const XComplex> samples(cached_orbit().x.data(), n);
    const WeightTable table(WeightKind::bump(2), n);
    for (auto _ : state) benchmark::DoNotOptimize(wb_average(samples, table));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_weighted_average)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_siegel_iterate(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const SiegelMapParams p(qpo::constants::golden_mean());
    const XComplex z0(XReal::parse("0.2"));
    for (auto _ : state) {
        const Trajectory t = iterate(p, z0, n);
        benchmark::DoNotOptimize(t.x.back());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_siegel_iterate)->Arg(4096);

static void BM_henon_iterate(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const qpo::HenonParams p(XReal::parse("0.664"), XReal::parse("2.032"));
    const XComplex x0(XReal::parse("-0.500"), XReal::parse("0.126"));
    const XComplex y0(XReal::parse("-0.387"), XReal::parse("-0.163"));
    for (auto _ : state) {
        const Trajectory t = iterate(p, x0, y0, n);
        benchmark::DoNotOptimize(t.x.back());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_henon_iterate)->Arg(4096);

static void BM_rotation_rate(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Trajectory t = orbit_prefix(n);
    ProjectionSpec spec;
    spec.kind = qpo::PlanarProjection{0};
    spec.ref_u = XReal(0);
    spec.ref_v = XReal(0);
    for (auto _ : state) {
        const qpo::RotationEstimate est = rotation_rate(t, spec, WeightKind::bump(2));
        benchmark::DoNotOptimize(est.rate);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_rotation_rate)->Arg(4096)->Arg(16384);

static void BM_spectrum_modes(benchmark::State& state) {
    const std::size_t k_max = static_cast<std::size_t>(state.range(0));
    constexpr std::size_t n = 16384;
    const std::span<const XComplex> samples(cached_orbit().x.data(), n);
    SpectrumOptions keep_all;
    keep_all.early_stop = false;
    for (auto _ : state) {
        const Spectrum s = build_spectrum(samples, qpo::constants::golden_mean(), k_max, keep_all);
        benchmark::DoNotOptimize(s.coeffs.back());
    }
    // Throughput in mode-samples: each of the k_max+1 modes scans all n points.
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>((k_max + 1) * n));
}
BENCHMARK(BM_spectrum_modes)->Arg(8)->Arg(32);

static void BM_reconstruct(benchmark::State& state) {
    const std::size_t k_max = static_cast<std::size_t>(state.range(0));
    constexpr std::size_t n = 16384;
    const std::span<const XComplex> samples(cached_orbit().x.data(), n);
    SpectrumOptions keep_all;
    keep_all.early_stop = false;
    const Spectrum s = build_spectrum(samples, qpo::constants::golden_mean(), k_max, keep_all);
    for (auto _ : state) {
        const std::vector<XComplex> z = reconstruct_trajectory(s, n);
        benchmark::DoNotOptimize(z.back());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>((k_max + 1) * n));
}
BENCHMARK(BM_reconstruct)->Arg(32);

BENCHMARK_MAIN();
