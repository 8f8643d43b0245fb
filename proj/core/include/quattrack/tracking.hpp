#pragma once

#include <optional>

#include "quattrack/dynamics.hpp"
#include "quattrack/reference.hpp"

namespace quattrack {

// Tracking error relative to a reference: e_q = q0* q - 1 (a genuine
// quaternion difference, taken in the ambient space), e_omega = omega -
// omega0.  For unit q and q0, |e_q| <= 2 with equality exactly at the
// antipode q = -q0.
struct TrackingError {
    Quat e_q;
    Vec3 e_omega;  // rad/s
};

// Controller gains, all strictly positive.  k_q scales the attitude term
// inside eta; k1 scales the attitude term in the torque and weights the
// rate error in the tracking energy.  They are independent knobs; the
// defaults tie them together, the usual backstepping choice.
struct Gains {
    double alpha = 1.0;    // 1/s, norm-restoring rate of the embedding
    double k_q = 3.0;
    double k1 = 3.0;
    double k_omega = 3.0;
};

struct RobustGains {
    Gains base{};
    double k_delta = 1000.0;  // estimator gain
    double delta_bound = 0.0; // known bound on the disturbance norm, N*m
};

// Certified-region parameters: 0 < c < 2 and
// 0 <= epsilon < min(2 - sqrt(2c), 1).
struct RegionSpec {
    double c = 1.0;
    double epsilon = 0.1;
};

void validate(const Gains& g);        // throws std::invalid_argument
void validate(const RobustGains& rg);
void validate(const RegionSpec& spec);

// Running disturbance estimate, integrated alongside the plant state with
// the same stepper.  Starts at zero: the controller has no prior.
struct EstimatorState {
    Vec3 delta_hat{};  // N*m
};

TrackingError compute_error(const BodyState& state, const ReferenceSample& ref);

// Error-attitude field (all products quaternionic, rates as pure quaternions):
//   e_q_dot = (e_q W0 - W0 e_q)/2 + (1 + e_q) e_w / 2 - alpha (|q|^2 - 1)(1 + e_q)
// |q|^2 is passed in as measured rather than reconstructed from e_q.
Quat error_field(const TrackingError& e, const Vec3& omega0, double q_norm_sq, const Gains& g);

// eta = -k_q e_qv + 2 alpha (e_qs + |q|^2 - 1) e_qv.  The quantity
// e_omega - eta is the rate-error coordinate the controller damps.
Vec3 eta(const TrackingError& e, double q_norm_sq, const Gains& g);

// Analytic d/dt of eta, causal: the attitude-error rate comes from
// error_field and d|q|^2/dt from the norm drift law, so no numerical
// differentiation is involved.
Vec3 eta_dot(const TrackingError& e, const Vec3& omega0, double q_norm_sq, const Gains& g);

// Tracking torque (N*m):
//   tau = -(I Omega) x Omega + I(-k1 e_qv - k_omega (e_w - eta) + eta_dot + omega0_dot)
Vec3 control_torque(const BodyState& state, const ReferenceSample& ref, const Gains& g,
                    const Inertia& inertia);

// Tracking torque with the disturbance estimate subtracted:
//   tau = control_torque - delta_hat.
// With delta_hat equal to the true disturbance, the closed-loop rate error
// dynamics match the undisturbed case exactly.
Vec3 robust_control_torque(const BodyState& state, const ReferenceSample& ref,
                           const RobustGains& rg, const EstimatorState& est,
                           const Inertia& inertia);

// d/dt delta_hat = (k_delta / (2 k1)) I^-1 (e_w - eta)
Vec3 estimator_derivative(const TrackingError& e, const Vec3& eta_val, const RobustGains& rg,
                          const Inertia& inertia);

// Energy functions used as runtime diagnostics and test oracles.
double lyapunov_v0(const TrackingError& e);                                  // |e_q|^2 / 2
double lyapunov_vk1(const TrackingError& e, double q_norm_sq, const Gains& g);
// Full energy including the disturbance error.  e_delta is the true
// disturbance minus the estimate, which only a test harness knows; the
// deployed controller never sees it.
double lyapunov_v(const TrackingError& e, double q_norm_sq, const RobustGains& rg,
                  const Vec3& e_delta);
double v_aux(const Quat& q);  // (|q|^2 - 1)^2 / 4

bool in_m_epsilon(const Quat& q, double epsilon);
bool in_region_s(const BodyState& state, const TrackingError& e, const RegionSpec& spec,
                 const Gains& g);
bool in_region_s_robust(const BodyState& state, const TrackingError& e, const Vec3& e_delta,
                        const RegionSpec& spec, const RobustGains& rg);

// Constructive gain selection for a given initial error and disturbance
// bound: picks c midway between |e_q(0)|^2/2 and 2, then k1 and k_delta
// large enough that
//   |e_omega(0) - eta(0)|^2 / (4 k1) + delta_bound^2 / (2 k_delta)
//     < c - |e_q(0)|^2 / 2
// holds with margin, with k_delta kept above delta_bound^2 / (2c).
// Returns nothing when |e_q(0)| >= 2 (antipodal or non-unit attitude): no
// admissible c exists there.
struct FeasibleGains {
    double c;
    double k1;
    double k_delta;
};
std::optional<FeasibleGains> feasible_gains(const TrackingError& e0, double delta_bound,
                                            const Gains& g0);

}  // namespace quattrack
