#include <benchmark/benchmark.h>

#include "quattrack/sim_engine.hpp"

using namespace quattrack;

namespace {

const Inertia body_inertia = Inertia::diagonal(4.250, 4.337, 3.664);

void BM_quat_mul(benchmark::State& state) {
    Quat p{0.3, {0.1, -0.2, 0.5}};
    Quat q{0.7, {0.25, 0.4, -0.1}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(p = mul(p, q));
    }
}
BENCHMARK(BM_quat_mul);

void BM_embedded_field(benchmark::State& state) {
    const BodyState st{{0.9, {0.3, -0.2, 0.1}}, {1.0, -0.5, 0.25}};
    const Vec3 tau{0.1, 0.2, 0.3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(embedded_field(st, tau, body_inertia, 1.0));
    }
}
BENCHMARK(BM_embedded_field);

void BM_control_torque(benchmark::State& state) {
    const ReferenceSample ref = analytic_reference().sample(1.2);
    const BodyState st{{0.9, {0.3, -0.2, 0.1}}, {1.0, -0.5, 0.25}};
    const Gains g{1.0, 3.0, 3.0, 3.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(control_torque(st, ref, g, body_inertia));
    }
}
BENCHMARK(BM_control_torque);

void BM_closed_loop_derivative(benchmark::State& state) {
    const Scenario cfg = case_study(1);
    const AugState y{{0.9, {0.3, -0.2, 0.1}}, {1.0, -0.5, 0.25}, {0.5, 0.5, 0.5}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(closed_loop_derivative(y, 1.2, cfg));
    }
}
BENCHMARK(BM_closed_loop_derivative);

void BM_rk4_step(benchmark::State& state) {
    const Scenario cfg = case_study(1);
    AugState y{cfg.initial_q, cfg.initial_omega, Vec3::zero()};
    double t = 0.0;
    for (auto _ : state) {
        y = rk4_step(y, t, cfg.dt, cfg);
        t += cfg.dt;
        benchmark::DoNotOptimize(y);
    }
}
BENCHMARK(BM_rk4_step);

void BM_simulate_one_second(benchmark::State& state) {
    Scenario cfg = case_study(1);
    cfg.t_end = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(cfg));
    }
}
BENCHMARK(BM_simulate_one_second);

}  // namespace

BENCHMARK_MAIN();
