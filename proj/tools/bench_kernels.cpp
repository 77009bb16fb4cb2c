// Serial reference vs OpenMP kernels on solver-sized grids.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "omcf/field_core.hpp"
#include "omcf/grid.hpp"
#include "omcf/kernels.hpp"

using namespace omcf;

namespace {

ScalarField random_field(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarField f(g);
    for (double& v : f.values) v = dist(rng);
    return f;
}

Grid bench_grid(const benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    return make_grid(n, n, -1, 1, -1, 1);
}

void bm_curvature_serial(benchmark::State& state) {
    const Grid g = bench_grid(state);
    const ScalarField u = random_field(g, 1);
    std::vector<double> out(g.count());
    for (auto _ : state) {
        kernels::curvature_rhs_serial(g, u.values.data(), 1e-6, out.data());
        benchmark::ClobberMemory();
    }
}

void bm_curvature_omp(benchmark::State& state) {
    const Grid g = bench_grid(state);
    const ScalarField u = random_field(g, 1);
    std::vector<double> out(g.count());
    for (auto _ : state) {
        kernels::curvature_rhs_omp(g, u.values.data(), 1e-6, out.data());
        benchmark::ClobberMemory();
    }
}

void bm_forcing_serial(benchmark::State& state) {
    const Grid g = bench_grid(state);
    const ScalarField u = random_field(g, 1), k = random_field(g, 2);
    std::vector<double> out(g.count());
    for (auto _ : state) {
        kernels::forcing_rhs_serial(g, u.values.data(), k.values.data(), out.data());
        benchmark::ClobberMemory();
    }
}

void bm_forcing_omp(benchmark::State& state) {
    const Grid g = bench_grid(state);
    const ScalarField u = random_field(g, 1), k = random_field(g, 2);
    std::vector<double> out(g.count());
    for (auto _ : state) {
        kernels::forcing_rhs_omp(g, u.values.data(), k.values.data(), out.data());
        benchmark::ClobberMemory();
    }
}

void bm_tv_iter_serial(benchmark::State& state) {
    const Grid g = bench_grid(state);
    const ScalarField w = random_field(g, 3);
    std::vector<double> v(g.count(), 0.5), vbar(g.count(), 0.5), vn(g.count());
    std::vector<double> px(g.count(), 0.0), py(g.count(), 0.0);
    std::vector<std::uint8_t> mask(g.count(), 0);
    for (auto _ : state) {
        kernels::tv_dual_step_serial(g, vbar.data(), 0.01, px.data(), py.data());
        kernels::tv_primal_step_serial(g, px.data(), py.data(), w.values.data(), mask.data(),
                                       0.01, v.data(), vn.data(), vbar.data());
        v.swap(vn);
        benchmark::ClobberMemory();
    }
}

void bm_tv_iter_omp(benchmark::State& state) {
    const Grid g = bench_grid(state);
    const ScalarField w = random_field(g, 3);
    std::vector<double> v(g.count(), 0.5), vbar(g.count(), 0.5), vn(g.count());
    std::vector<double> px(g.count(), 0.0), py(g.count(), 0.0);
    std::vector<std::uint8_t> mask(g.count(), 0);
    for (auto _ : state) {
        kernels::tv_dual_step_omp(g, vbar.data(), 0.01, px.data(), py.data());
        kernels::tv_primal_step_omp(g, px.data(), py.data(), w.values.data(), mask.data(), 0.01,
                                    v.data(), vn.data(), vbar.data());
        v.swap(vn);
        benchmark::ClobberMemory();
    }
}

void bm_edt_serial(benchmark::State& state) {
    const Grid g = bench_grid(state);
    const BinarySet e = threshold_sublevel(signed_distance_disks(g, {Disk{0, 0, 0.5}}), 0.0);
    std::vector<double> d2(g.count());
    for (auto _ : state) {
        kernels::edt_pass_serial(g, e.inside.data(), d2.data());
        benchmark::ClobberMemory();
    }
}

void bm_edt_omp(benchmark::State& state) {
    const Grid g = bench_grid(state);
    const BinarySet e = threshold_sublevel(signed_distance_disks(g, {Disk{0, 0, 0.5}}), 0.0);
    std::vector<double> d2(g.count());
    for (auto _ : state) {
        kernels::edt_pass_omp(g, e.inside.data(), d2.data());
        benchmark::ClobberMemory();
    }
}

}  // namespace

BENCHMARK(bm_curvature_serial)->Arg(256)->Arg(512);
BENCHMARK(bm_curvature_omp)->Arg(256)->Arg(512);
BENCHMARK(bm_forcing_serial)->Arg(256)->Arg(512);
BENCHMARK(bm_forcing_omp)->Arg(256)->Arg(512);
BENCHMARK(bm_tv_iter_serial)->Arg(256)->Arg(512);
BENCHMARK(bm_tv_iter_omp)->Arg(256)->Arg(512);
BENCHMARK(bm_edt_serial)->Arg(256)->Arg(512);
BENCHMARK(bm_edt_omp)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
