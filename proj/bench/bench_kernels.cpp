// Serial reference vs OpenMP for the data-parallel kernels.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "glscov/clt.hpp"
#include "glscov/finite_oracle.hpp"
#include "glscov/optimize.hpp"
#include "glscov/psi.hpp"

using namespace glscov;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) == 0 ? "serial" : "openmp"); }

void BM_GridScan2D(benchmark::State& state) {
    const auto psi = PsiFunction::power(1.0);
    const auto nu = PsiFunction::finite_support(6.0, 1.0);
    const double la = std::log(1e-3);
    const auto f = [&](double u, double w) { return u * la + w * la - psi.log_eval_u(u) - nu.log_eval_u(w); };
    const Interval r{1e-6, 1.0};
    const int n = static_cast<int>(state.range(1));
    for (auto _ : state) {
        const Max2D m = exec_of(state) == Exec::serial ? grid_scan_2d_serial(f, r, r, Region::triangle, n, 1e-9)
                                                       : grid_scan_2d_parallel(f, r, r, Region::triangle, n, 1e-9);
        benchmark::DoNotOptimize(m);
    }
    label(state);
}
BENCHMARK(BM_GridScan2D)->Args({0, 512})->Args({1, 512})->Args({0, 2048})->Args({1, 2048})->Unit(benchmark::kMillisecond);

void BM_Campaign(benchmark::State& state) {
    CampaignConfig c;
    c.instances = static_cast<std::uint64_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(verify_campaign(c, exec_of(state)));
    label(state);
}
BENCHMARK(BM_Campaign)->Args({0, 500})->Args({1, 500})->Unit(benchmark::kMillisecond);

void BM_SigmaN(benchmark::State& state) {
    SequenceModel m;
    m.coeffs = {1.0, 0.5};
    const std::vector<std::uint64_t> ns{1000};
    for (auto _ : state) benchmark::DoNotOptimize(sigma_n_estimate(m, ns, 2000, 7, exec_of(state)));
    label(state);
}
BENCHMARK(BM_SigmaN)->Args({0, 0})->Args({1, 0})->Unit(benchmark::kMillisecond);

void BM_YSequence(benchmark::State& state) {
    const auto prof = profile_from_functions([](int k) { return 0.25 * std::pow(0.95, k); }, [](int k) { return std::pow(0.95, k); },
                                             PsiFunction::power(2.0), static_cast<int>(state.range(1)));
    OptimizerOptions opt;
    opt.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(y_sequence(prof, opt));
    label(state);
}
BENCHMARK(BM_YSequence)->Args({0, 2000})->Args({1, 2000})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
