#include "quattrack/sim_engine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace quattrack {

namespace {

bool is_finite(const AugState& y) {
    return is_finite(y.q) && is_finite(y.omega) && is_finite(y.delta_hat);
}

TraceRecord make_record(double t, const AugState& y, const Scenario& cfg) {
    const ReferenceSample ref = cfg.reference.sample(t);
    const BodyState state{y.q, y.omega};
    const TrackingError e = compute_error(state, ref);
    const double qn2 = norm_sq(y.q);

    TraceRecord rec;
    rec.t = t;
    rec.q = y.q;
    rec.omega = y.omega;
    rec.e_q = e.e_q;
    rec.e_omega = e.e_omega;
    rec.delta_hat = y.delta_hat;
    rec.tau = (cfg.mode == ControllerMode::robust)
                  ? robust_control_torque(state, ref, cfg.gains, EstimatorState{y.delta_hat},
                                          cfg.inertia)
                  : control_torque(state, ref, cfg.gains.base, cfg.inertia);
    rec.v_k1 = lyapunov_vk1(e, qn2, cfg.gains.base);
    rec.v_aux = v_aux(y.q);
    if (cfg.region) {
        rec.in_m_eps = in_m_epsilon(y.q, cfg.region->epsilon);
        if (cfg.mode == ControllerMode::robust) {
            // The monitor knows the configured disturbance, so the estimator
            // error is available here even though the controller never sees it.
            const Vec3 e_delta = cfg.disturbance.at(t) - y.delta_hat;
            rec.in_s = in_region_s_robust(state, e, e_delta, *cfg.region, cfg.gains);
        } else {
            rec.in_s = in_region_s(state, e, *cfg.region, cfg.gains.base);
        }
    }
    return rec;
}

long step_count(double t_end, double dt) {
    const double steps = t_end / dt;
    return static_cast<long>(std::floor(steps * (1.0 + 4e-12) + 1e-9));
}

}  // namespace

AugState closed_loop_derivative(const AugState& y, double t, const Scenario& cfg) {
    const ReferenceSample ref = cfg.reference.sample(t);
    const BodyState state{y.q, y.omega};

    Vec3 tau;
    Vec3 estimator_rate = Vec3::zero();
    if (cfg.mode == ControllerMode::robust) {
        tau = robust_control_torque(state, ref, cfg.gains, EstimatorState{y.delta_hat},
                                    cfg.inertia);
        const TrackingError e = compute_error(state, ref);
        const Vec3 eta_val = eta(e, norm_sq(y.q), cfg.gains.base);
        estimator_rate = estimator_derivative(e, eta_val, cfg.gains, cfg.inertia);
    } else {
        tau = control_torque(state, ref, cfg.gains.base, cfg.inertia);
    }

    const StateDerivative d = disturbed_embedded_field(state, tau, cfg.inertia,
                                                       cfg.gains.base.alpha, cfg.disturbance, t);
    return {d.q_dot, d.omega_dot, estimator_rate};
}

AugState rk4_step(const AugState& y, double t, double dt, const Scenario& cfg) {
    return rk4_step(y, t, dt,
                    [&cfg](double tt, const AugState& yy) {
                        return closed_loop_derivative(yy, tt, cfg);
                    });
}

std::pair<Trace, Metrics> simulate(const Scenario& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(cfg.t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    if (cfg.record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
    validate(cfg.gains.base);
    if (cfg.mode == ControllerMode::robust) validate(cfg.gains);
    if (cfg.region) validate(*cfg.region);

    Trace trace;
    if (norm_sq(cfg.initial_q) == 0.0)
        trace.warnings.push_back(
            "initial attitude quaternion is zero: outside the region of convergence of the "
            "embedding (|q| stays 0)");

    const long n_steps = step_count(cfg.t_end, cfg.dt);
    trace.records.reserve(static_cast<size_t>(n_steps / cfg.record_stride) + 1);

    AugState y{cfg.initial_q, cfg.initial_omega, Vec3::zero()};
    for (long k = 0;; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        if (k % cfg.record_stride == 0) trace.records.push_back(make_record(t, y, cfg));
        if (k == n_steps) break;
        y = rk4_step(y, t, cfg.dt, cfg);
        if (!is_finite(y))
            throw NumericalAbort("non-finite state component after step at t = " +
                                 std::to_string(t + cfg.dt));
    }

    if (cfg.region && !trace.records.empty() && !trace.records.front().in_s)
        trace.warnings.push_back("initial state outside certified region S");

    Metrics metrics = compute_metrics(trace, cfg);
    return {std::move(trace), metrics};
}

Metrics compute_metrics(const Trace& trace, const Scenario& cfg) {
    Metrics m;
    if (trace.records.empty()) return m;

    const TraceRecord& last = trace.records.back();
    m.final_eq_norm = norm(last.e_q);
    m.final_ew_norm = norm(last.e_omega);
    m.final_delta_err_norm = norm(cfg.disturbance.at(last.t) - last.delta_hat);

    double sum_sq = 0.0;
    long count = 0;
    for (const TraceRecord& r : trace.records) {
        if (r.t >= 20.0 && r.t <= 40.0) {
            sum_sq += norm_sq(r.e_omega);
            ++count;
        }
    }
    m.rms_ew_20_40 = count > 0 ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0;

    // First logged time after which |e_q| stays below the threshold.
    m.settle_time_eq = -1.0;
    for (auto it = trace.records.rbegin(); it != trace.records.rend(); ++it) {
        if (norm(it->e_q) >= settle_threshold_eq) break;
        m.settle_time_eq = it->t;
    }

    // Count V_k1 increases between consecutive records, starting from the
    // first record inside S when region monitoring is on.
    size_t start = 0;
    if (cfg.region) {
        while (start < trace.records.size() && !trace.records[start].in_s) ++start;
    }
    for (size_t i = start; i + 1 < trace.records.size(); ++i) {
        if (trace.records[i + 1].v_k1 > trace.records[i].v_k1 + 1e-12)
            ++m.vk1_monotonicity_violations;
    }
    return m;
}

Scenario case_study(int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("case study index must be 1, 2, or 3");

    Scenario cfg;
    cfg.inertia = Inertia::diagonal(4.250, 4.337, 3.664);
    cfg.gains.base = Gains{1.0, 3.0, 3.0, 3.0};
    cfg.gains.k_delta = 1000.0;
    cfg.gains.delta_bound = 2.0;
    cfg.mode = (n == 3) ? ControllerMode::non_robust : ControllerMode::robust;
    cfg.reference = analytic_reference();
    cfg.initial_q = -cfg.reference.attitude(0.0);  // antipodal start, |e_q(0)| = 2
    cfg.initial_omega = cfg.reference.rate(std::numbers::pi / 6.0);
    cfg.disturbance = (n == 1) ? Disturbance::constant({1.0, 1.0, 1.0})
                               : Disturbance::sinusoidal({1.0, 1.0, 1.0}, 0.5);
    cfg.region = RegionSpec{1.0, 0.1};
    cfg.dt = 1e-3;
    cfg.t_end = 40.0;
    cfg.record_stride = 10;
    return cfg;
}

}  // namespace quattrack
