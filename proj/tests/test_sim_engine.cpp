#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quattrack/sim_engine.hpp"
#include "test_util.hpp"

using namespace quattrack;
using test::close;

namespace {

Scenario perturbed_scenario() {
    Scenario cfg;
    cfg.inertia = Inertia::diagonal(4.250, 4.337, 3.664);
    cfg.gains.base = Gains{1.0, 3.0, 3.0, 3.0};
    cfg.mode = ControllerMode::non_robust;
    cfg.reference = analytic_reference();
    const Quat p{0.875, {std::sqrt(1.0 - 0.875 * 0.875), 0.0, 0.0}};
    cfg.initial_q = mul(cfg.reference.attitude(0.0), p);
    cfg.initial_omega = cfg.reference.rate(0.0);
    return cfg;
}

AugState final_state(Scenario cfg, double dt) {
    cfg.dt = dt;
    cfg.record_stride = 1;
    AugState y{cfg.initial_q, cfg.initial_omega, Vec3::zero()};
    const long n = std::lround(cfg.t_end / dt);
    for (long k = 0; k < n; ++k) y = rk4_step(y, static_cast<double>(k) * dt, dt, cfg);
    return y;
}

double state_distance(const AugState& a, const AugState& b) {
    return norm(a.q - b.q) + norm(a.omega - b.omega) + norm(a.delta_hat - b.delta_hat);
}

}  // namespace

TEST_SUITE_BEGIN("sim_engine");

TEST_CASE("scalar norm ODE integrated by the stepper matches its separable solution") {
    const double alpha = 1.0, dt = 1e-3;
    for (const double v0 : {4.0, 0.25}) {
        double v = v0;
        double worst = 0.0;
        for (long k = 0; k < 10000; ++k) {
            v = rk4_step(v, static_cast<double>(k) * dt, dt,
                         [alpha](double, double x) { return -2.0 * alpha * (x - 1.0) * x; });
            const double t = static_cast<double>(k + 1) * dt;
            const double exact = v0 / (v0 - (v0 - 1.0) * std::exp(-2.0 * alpha * t));
            worst = std::max(worst, std::abs(v - exact));
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("stepper leaves the state unchanged under a zero field") {
    const AugState y{{0.3, {0.1, -0.2, 0.5}}, {1.0, 2.0, 3.0}, {0.5, 0.5, 0.5}};
    const AugState next =
        rk4_step(y, 0.0, 0.1, [](double, const AugState&) {
            return AugState{Quat::zero(), Vec3::zero(), Vec3::zero()};
        });
    CHECK(close(next.q, y.q));
    CHECK(close(next.omega, y.omega));
    CHECK(close(next.delta_hat, y.delta_hat));
}

TEST_CASE("closed loop derivative on the reference follows the reference") {
    Scenario cfg = perturbed_scenario();
    const double t = 0.9;
    const ReferenceSample ref = cfg.reference.sample(t);
    const AugState y{ref.q0, ref.omega0, Vec3::zero()};
    const AugState d = closed_loop_derivative(y, t, cfg);
    // zero tracking error: attitude follows q0 w0 / 2, rate follows the
    // feedforward acceleration, the estimator stays parked
    CHECK(close(d.q, 0.5 * mul(ref.q0, pure(ref.omega0)), 1e-12, 1e-12));
    CHECK(close(d.omega, ref.omega0_dot, 1e-12, 1e-12));
    CHECK(close(d.delta_hat, Vec3::zero()));
}

TEST_CASE("closed loop derivative is bit-deterministic") {
    const Scenario cfg = case_study(1);
    const AugState y{{0.4, {0.3, -0.1, 0.2}}, {1.0, -0.5, 0.25}, {0.1, 0.2, 0.3}};
    const AugState a = closed_loop_derivative(y, 1.5, cfg);
    const AugState b = closed_loop_derivative(y, 1.5, cfg);
    CHECK(a.q.s == b.q.s);
    CHECK(a.q.v.x == b.q.v.x);
    CHECK(a.q.v.y == b.q.v.y);
    CHECK(a.q.v.z == b.q.v.z);
    CHECK(a.omega.x == b.omega.x);
    CHECK(a.omega.y == b.omega.y);
    CHECK(a.omega.z == b.omega.z);
    CHECK(a.delta_hat.x == b.delta_hat.x);
}

TEST_CASE("simulate: t_end = 0 produces a single record of the initial condition") {
    Scenario cfg = perturbed_scenario();
    cfg.t_end = 0.0;
    const auto [trace, metrics] = simulate(cfg);
    REQUIRE(trace.records.size() == 1);
    CHECK(trace.records[0].t == 0.0);
    CHECK(close(trace.records[0].q, cfg.initial_q));
    CHECK(close(trace.records[0].omega, cfg.initial_omega));
    CHECK(close(trace.records[0].delta_hat, Vec3::zero()));
}

TEST_CASE("simulate: record count matches floor(t_end / (dt stride)) + 1") {
    Scenario cfg = perturbed_scenario();
    const struct {
        double dt, t_end;
        int stride;
        size_t expect;
    } cases[] = {
        {1e-3, 0.01, 1, 11},
        {1e-3, 0.01, 3, 4},
        {2e-3, 0.011, 2, 3},
        {1e-3, 40.0 / 1000.0, 10, 5},
    };
    for (const auto& c : cases) {
        cfg.dt = c.dt;
        cfg.t_end = c.t_end;
        cfg.record_stride = c.stride;
        const auto [trace, metrics] = simulate(cfg);
        CHECK(trace.records.size() == c.expect);
        for (size_t i = 1; i < trace.records.size(); ++i)
            CHECK(trace.records[i].t > trace.records[i - 1].t);
    }
}

TEST_CASE("simulate rejects invalid configs") {
    Scenario cfg = perturbed_scenario();
    cfg.dt = 0.0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg.dt = 1e-3;
    cfg.record_stride = 0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg.record_stride = 1;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
}

TEST_CASE("simulate aborts on numerical blowup") {
    Scenario cfg = case_study(1);
    // estimator loop at ~100 rad/s with a 0.5 s step: far outside the
    // stability region, overflows within a handful of steps
    cfg.gains.k_delta = 1e6;
    cfg.dt = 0.5;
    cfg.t_end = 50.0;
    CHECK_THROWS_AS(simulate(cfg), NumericalAbort);
}

TEST_CASE("identical configs produce identical traces") {
    Scenario cfg = case_study(1);
    cfg.t_end = 2.0;
    const auto [a, ma] = simulate(cfg);
    const auto [b, mb] = simulate(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].t == b.records[i].t);
        CHECK(a.records[i].q.s == b.records[i].q.s);
        CHECK(a.records[i].q.v.x == b.records[i].q.v.x);
        CHECK(a.records[i].omega.y == b.records[i].omega.y);
        CHECK(a.records[i].delta_hat.z == b.records[i].delta_hat.z);
        CHECK(a.records[i].tau.x == b.records[i].tau.x);
        CHECK(a.records[i].v_k1 == b.records[i].v_k1);
    }
}

TEST_CASE("halving the step changes the short-horizon final state below 1e-8") {
    Scenario cfg = case_study(1);
    cfg.t_end = 2.0;
    const AugState coarse = final_state(cfg, 1e-3);
    const AugState fine = final_state(cfg, 5e-4);
    CHECK(std::abs(coarse.q.s - fine.q.s) < 1e-8);
    CHECK(std::abs(coarse.q.v.x - fine.q.v.x) < 1e-8);
    CHECK(std::abs(coarse.q.v.y - fine.q.v.y) < 1e-8);
    CHECK(std::abs(coarse.q.v.z - fine.q.v.z) < 1e-8);
    CHECK(std::abs(coarse.omega.x - fine.omega.x) < 1e-8);
    CHECK(std::abs(coarse.omega.y - fine.omega.y) < 1e-8);
    CHECK(std::abs(coarse.omega.z - fine.omega.z) < 1e-8);
    CHECK(std::abs(coarse.delta_hat.x - fine.delta_hat.x) < 1e-8);
}

TEST_CASE("observed convergence order is four") {
    Scenario cfg = perturbed_scenario();
    cfg.t_end = 1.0;
    const AugState y1 = final_state(cfg, 4e-3);
    const AugState y2 = final_state(cfg, 2e-3);
    const AugState y3 = final_state(cfg, 1e-3);
    const double ratio = state_distance(y1, y2) / state_distance(y2, y3);
    CHECK(ratio > 12.0);  // 2^4 = 16 up to higher-order terms
    CHECK(ratio < 20.0);
}

TEST_CASE("presets: shared setup") {
    for (int n = 1; n <= 3; ++n) {
        const Scenario cfg = case_study(n);
        CHECK(close(cfg.inertia.matrix()(0, 0), 4.250));
        CHECK(close(cfg.inertia.matrix()(1, 1), 4.337));
        CHECK(close(cfg.inertia.matrix()(2, 2), 3.664));
        CHECK(cfg.gains.base.alpha == 1.0);
        CHECK(cfg.gains.base.k1 == 3.0);
        CHECK(cfg.gains.base.k_omega == 3.0);
        CHECK(cfg.gains.base.k_q == 3.0);
        CHECK(close(cfg.initial_q, Quat{-1.0, {0.0, 0.0, 0.0}}));
        const Vec3 expect{3.0 * std::sqrt(3.0) / 4.0, 7.0 / 4.0, -0.5};
        CHECK(close(cfg.initial_omega, expect));
        CHECK(cfg.dt == 1e-3);
        CHECK(cfg.t_end == 40.0);
        CHECK(cfg.record_stride == 10);
    }
    CHECK_THROWS_AS(case_study(0), std::invalid_argument);
    CHECK_THROWS_AS(case_study(4), std::invalid_argument);
}

TEST_CASE("presets: per-case disturbance and mode") {
    const Scenario one = case_study(1);
    CHECK(one.mode == ControllerMode::robust);
    CHECK(one.gains.k_delta == 1000.0);
    CHECK(close(one.disturbance.at(0.0), Vec3{1.0, 1.0, 1.0}));
    CHECK(close(one.disturbance.at(17.3), Vec3{1.0, 1.0, 1.0}));

    const Scenario two = case_study(2);
    CHECK(two.mode == ControllerMode::robust);
    CHECK(close(two.disturbance.at(0.0), Vec3{1.0, 1.0, 1.0}));
    CHECK(close(two.disturbance.at(std::numbers::pi), Vec3::zero()));

    const Scenario three = case_study(3);
    CHECK(three.mode == ControllerMode::non_robust);
    CHECK(close(three.disturbance.at(0.0), Vec3{1.0, 1.0, 1.0}));
}

TEST_CASE("presets: unit sphere drift stays below 1e-9 over the full horizon") {
    for (int n = 1; n <= 3; ++n) {
        const auto [trace, metrics] = simulate(case_study(n));
        double worst = 0.0;
        for (const TraceRecord& r : trace.records)
            worst = std::max(worst, std::abs(norm(r.q) - 1.0));
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("sphere drift stays bounded for any positive embedding rate") {
    for (const double alpha : {0.5, 1.0, 2.0}) {
        Scenario cfg = case_study(1);
        cfg.gains.base.alpha = alpha;
        cfg.t_end = 5.0;
        const auto [trace, metrics] = simulate(cfg);
        double worst = 0.0;
        for (const TraceRecord& r : trace.records)
            worst = std::max(worst, std::abs(norm(r.q) - 1.0));
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("metrics on a synthetic trace") {
    Trace trace;
    const double eq[] = {1.0, 0.5, 0.005, 0.001, 0.0001};
    const double ew[] = {0.0, 0.0, 3.0, 4.0, 0.0};
    const double vk1[] = {1.0, 2.0, 3.0, 0.5, 0.2};
    for (int i = 0; i < 5; ++i) {
        TraceRecord r;
        r.t = 10.0 * i;
        r.e_q = Quat{eq[i], {0.0, 0.0, 0.0}};
        r.e_omega = Vec3{ew[i], 0.0, 0.0};
        r.v_k1 = vk1[i];
        r.delta_hat = Vec3{1.0, 0.0, 0.0};
        trace.records.push_back(r);
    }
    Scenario cfg;  // no region, no disturbance
    const Metrics m = compute_metrics(trace, cfg);
    CHECK(m.final_eq_norm == 0.0001);
    CHECK(m.final_ew_norm == 0.0);
    CHECK(m.final_delta_err_norm == 1.0);  // disturbance none, estimate (1,0,0)
    CHECK(m.rms_ew_20_40 == doctest::Approx(std::sqrt(25.0 / 3.0)));
    CHECK(m.settle_time_eq == 20.0);
    CHECK(m.vk1_monotonicity_violations == 2);
}

TEST_CASE("zero initial attitude is flagged, not rejected") {
    Scenario cfg = perturbed_scenario();
    cfg.initial_q = Quat::zero();
    cfg.t_end = 0.1;
    const auto [trace, metrics] = simulate(cfg);
    REQUIRE(!trace.warnings.empty());
    CHECK(trace.warnings.front().find("zero") != std::string::npos);
}

TEST_SUITE_END();
