#include <benchmark/benchmark.h>

#include "modloc/flap.hpp"
#include "modloc/localization.hpp"

using namespace modloc;

namespace {

GridPtr grid(int n) { return std::make_shared<const MassShellGrid>(1.0, -16.0, 16.0, n); }

void BM_SupportFunction(benchmark::State& state) {
    const PolyRegion k = slab_family(2.0).region;
    Eigen::VectorXd xi(4);
    xi << 1.0, 0.2, -0.3, 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(support_function(k, xi));
}
BENCHMARK(BM_SupportFunction);

void BM_IntersectWedges(benchmark::State& state) {
    const std::vector<PolyRegion> w{make_wedge(PoincareElement::identity()).region,
                                    make_wedge(PoincareElement({0, 0, 0, 2.0}, rotation_x_pi())).region};
    for (auto _ : state) benchmark::DoNotOptimize(intersect_regions(w));
}
BENCHMARK(BM_IntersectWedges);

void BM_SpectralContinuation(benchmark::State& state) {
    const GridPtr g = grid(static_cast<int>(state.range(0)));
    const WaveFunction phi = strip_family(gaussian_battery(g)[0]);
    for (auto _ : state)
        benchmark::DoNotOptimize(continue_boost(phi, PoincareElement::identity(), {0.0, M_PI}, Backend::spectral));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralContinuation)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_ClosedFormContinuation(benchmark::State& state) {
    const WaveFunction phi = gaussian_battery(grid(1024))[0];
    for (auto _ : state)
        benchmark::DoNotOptimize(continue_boost(phi, PoincareElement::identity(), {0.0, M_PI}, Backend::closed_form));
}
BENCHMARK(BM_ClosedFormContinuation);

void BM_OrthogonalProjector(benchmark::State& state) {
    const WaveFunction phi = gaussian_battery(grid(1024))[0];
    const PoincareElement frame({0, 0, 0, 2.0}, rotation_x_pi());
    for (auto _ : state) benchmark::DoNotOptimize(orthogonal_projector(frame, Sign::plus, phi));
}
BENCHMARK(BM_OrthogonalProjector);

void BM_FlTransformInterval(benchmark::State& state) {
    const auto u = interval_indicator(-1.0, 1.0);
    ComplexVector z(1);
    z(0) = {0.4, 3.0};
    for (auto _ : state) benchmark::DoNotOptimize(fl_transform(u, z));
}
BENCHMARK(BM_FlTransformInterval);

void BM_PwsCheckInterval(benchmark::State& state) {
    const auto u = interval_indicator(-1.0, 1.0);
    const TubeGrid g = default_tube_grid(1);
    for (auto _ : state) benchmark::DoNotOptimize(pws_check(u, g));
}
BENCHMARK(BM_PwsCheckInterval)->Unit(benchmark::kMillisecond);

void BM_CauchyReconstruct(benchmark::State& state) {
    const TubeFunction f = [](const ComplexVector& z) { return 1.0 / (z(0) + std::complex<double>(0, 2)); };
    ComplexVector t(1);
    t(0) = {0.3, 1.0};
    CauchyOptions o;
    o.n_points = static_cast<int>(state.range(0));
    o.throw_on_insufficient = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(cauchy_tube_reconstruct(f, Eigen::VectorXd::Constant(1, 0.5),
                                                         Eigen::VectorXd::Constant(1, 1.5), t, o));
}
BENCHMARK(BM_CauchyReconstruct)->Arg(81)->Arg(161)->Arg(321);

}  // namespace

BENCHMARK_MAIN();
