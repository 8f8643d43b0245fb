#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quattrack/rk4.hpp"
#include "quattrack/tracking.hpp"

namespace quattrack {

enum class ControllerMode { non_robust, robust };

// Everything a single closed-loop run needs.  Deterministic: the same
// scenario always produces the same trace, bit for bit.
struct Scenario {
    Inertia inertia{};
    RobustGains gains{};
    ControllerMode mode = ControllerMode::non_robust;
    Disturbance disturbance{};
    ReferenceTrajectory reference{};
    Quat initial_q = Quat::identity();
    Vec3 initial_omega{};
    std::optional<RegionSpec> region;  // enables region monitoring when set
    double dt = 1e-3;       // s
    double t_end = 40.0;    // s
    int record_stride = 10; // log every N-th step
};

// Augmented integration state: plant plus disturbance estimate.  The
// estimate is advanced by the same RK4 stages as the plant so the
// estimator cancellation stays exact to integrator order.
struct AugState {
    Quat q;
    Vec3 omega;
    Vec3 delta_hat;
};

inline AugState operator+(const AugState& a, const AugState& b) {
    return {a.q + b.q, a.omega + b.omega, a.delta_hat + b.delta_hat};
}
inline AugState operator*(double s, const AugState& a) {
    return {s * a.q, s * a.omega, s * a.delta_hat};
}

struct TraceRecord {
    double t = 0.0;
    Quat q;
    Vec3 omega;
    Quat e_q;
    Vec3 e_omega;
    Vec3 delta_hat;
    Vec3 tau;
    double v_k1 = 0.0;
    double v_aux = 0.0;
    // Region-membership flags; false when the scenario has no RegionSpec.
    bool in_m_eps = false;
    bool in_s = false;
};

struct Trace {
    std::vector<TraceRecord> records;
    std::vector<std::string> warnings;
};

// Summary metrics over one trace.  rms_ew_20_40 averages |e_omega| over
// t in [20, 40]; settle_time_eq is the first logged time after which
// |e_q| stays below 1e-2 (-1 when it never settles);
// vk1_monotonicity_violations counts increases of V_k1 between consecutive
// records, starting from the first record inside the certified region when
// region monitoring is on.
struct Metrics {
    double final_eq_norm = 0.0;
    double final_ew_norm = 0.0;
    double final_delta_err_norm = 0.0;
    double rms_ew_20_40 = 0.0;
    double settle_time_eq = -1.0;
    long vk1_monotonicity_violations = 0;
};

inline constexpr double settle_threshold_eq = 1e-2;

// Thrown when any state component stops being finite during integration.
struct NumericalAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One evaluation of the full closed loop at time t: reference sample,
// tracking error, torque per controller mode, plant field with the
// configured disturbance, estimator rate (zero in non-robust mode).
AugState closed_loop_derivative(const AugState& y, double t, const Scenario& cfg);

// RK4 step of the closed loop; stage times t, t + dt/2, t + dt, so
// time-varying disturbances are sampled per stage, not frozen per step.
AugState rk4_step(const AugState& y, double t, double dt, const Scenario& cfg);

// Integrate from t = 0 to t_end, recording every record_stride steps
// (records = floor(t_end / (dt * record_stride)) + 1).  No quaternion
// renormalization anywhere: the embedding term is the only mechanism
// keeping |q| near 1, and masking it would defeat the point.
// Throws NumericalAbort if the state leaves the finite range.
std::pair<Trace, Metrics> simulate(const Scenario& cfg);

Metrics compute_metrics(const Trace& trace, const Scenario& cfg);

// Presets sharing the inertia diag(4.250, 4.337, 3.664), gains alpha = 1,
// k_q = k1 = k_omega = 3, the analytic reference, and the antipodal start
// q(0) = -q0(0) with omega(0) = Omega0(pi/6):
//   1: constant disturbance (1,1,1), adaptive law, k_delta = 1000
//   2: disturbance cos(0.5 t)*(1,1,1), adaptive law, k_delta = 1000
//   3: disturbance cos(0.5 t)*(1,1,1), non-robust law
// Throws std::invalid_argument for any other index.
Scenario case_study(int n);

}  // namespace quattrack
