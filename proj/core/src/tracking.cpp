#include "quattrack/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quattrack {

void validate(const Gains& g) {
    if (!(g.alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (!(g.k_q > 0.0)) throw std::invalid_argument("k_q must be > 0");
    if (!(g.k1 > 0.0)) throw std::invalid_argument("k1 must be > 0");
    if (!(g.k_omega > 0.0)) throw std::invalid_argument("k_omega must be > 0");
}

void validate(const RobustGains& rg) {
    validate(rg.base);
    if (!(rg.k_delta > 0.0)) throw std::invalid_argument("k_delta must be > 0");
    if (!(rg.delta_bound >= 0.0)) throw std::invalid_argument("delta_bound must be >= 0");
}

void validate(const RegionSpec& spec) {
    if (!(spec.c > 0.0 && spec.c < 2.0)) throw std::invalid_argument("region c must be in (0, 2)");
    const double eps_max = std::min(2.0 - std::sqrt(2.0 * spec.c), 1.0);
    if (!(spec.epsilon >= 0.0 && spec.epsilon < eps_max))
        throw std::invalid_argument("region epsilon must be in [0, min(2 - sqrt(2c), 1))");
}

TrackingError compute_error(const BodyState& state, const ReferenceSample& ref) {
    return {mul(conj(ref.q0), state.q) - Quat::identity(), state.omega - ref.omega0};
}

Quat error_field(const TrackingError& e, const Vec3& omega0, double q_norm_sq, const Gains& g) {
    const Quat w0 = pure(omega0);
    const Quat one_plus_eq = Quat::identity() + e.e_q;
    return 0.5 * (mul(e.e_q, w0) - mul(w0, e.e_q)) + 0.5 * mul(one_plus_eq, pure(e.e_omega)) -
           g.alpha * (q_norm_sq - 1.0) * one_plus_eq;
}

Vec3 eta(const TrackingError& e, double q_norm_sq, const Gains& g) {
    return (-g.k_q + 2.0 * g.alpha * (e.e_q.s + q_norm_sq - 1.0)) * e.e_q.v;
}

Vec3 eta_dot(const TrackingError& e, const Vec3& omega0, double q_norm_sq, const Gains& g) {
    const Quat eq_dot = error_field(e, omega0, q_norm_sq, g);
    // d|q|^2/dt is substituted from the norm drift law, keeping the
    // expression a function of measured quantities only.
    const double drift = -2.0 * g.alpha * (q_norm_sq - 1.0) * q_norm_sq;
    return (-g.k_q + 2.0 * g.alpha * (e.e_q.s + q_norm_sq - 1.0)) * eq_dot.v +
           2.0 * g.alpha * (eq_dot.s + drift) * e.e_q.v;
}

Vec3 control_torque(const BodyState& state, const ReferenceSample& ref, const Gains& g,
                    const Inertia& inertia) {
    const TrackingError e = compute_error(state, ref);
    const double qn2 = norm_sq(state.q);
    const Vec3 eta_val = eta(e, qn2, g);
    const Vec3 eta_rate = eta_dot(e, ref.omega0, qn2, g);
    const Vec3 u =
        -g.k1 * e.e_q.v - g.k_omega * (e.e_omega - eta_val) + eta_rate + ref.omega0_dot;
    return -cross(inertia.apply(state.omega), state.omega) + inertia.apply(u);
}

Vec3 robust_control_torque(const BodyState& state, const ReferenceSample& ref,
                           const RobustGains& rg, const EstimatorState& est,
                           const Inertia& inertia) {
    return control_torque(state, ref, rg.base, inertia) - est.delta_hat;
}

Vec3 estimator_derivative(const TrackingError& e, const Vec3& eta_val, const RobustGains& rg,
                          const Inertia& inertia) {
    return (rg.k_delta / (2.0 * rg.base.k1)) * inertia.solve(e.e_omega - eta_val);
}

double lyapunov_v0(const TrackingError& e) { return 0.5 * norm_sq(e.e_q); }

double lyapunov_vk1(const TrackingError& e, double q_norm_sq, const Gains& g) {
    const Vec3 d = e.e_omega - eta(e, q_norm_sq, g);
    return 0.5 * norm_sq(e.e_q) + norm_sq(d) / (4.0 * g.k1);
}

double lyapunov_v(const TrackingError& e, double q_norm_sq, const RobustGains& rg,
                  const Vec3& e_delta) {
    return lyapunov_vk1(e, q_norm_sq, rg.base) + norm_sq(e_delta) / (2.0 * rg.k_delta);
}

double v_aux(const Quat& q) {
    const double d = norm_sq(q) - 1.0;
    return 0.25 * d * d;
}

bool in_m_epsilon(const Quat& q, double epsilon) {
    return std::abs(norm_sq(q) - 1.0) <= epsilon;
}

bool in_region_s(const BodyState& state, const TrackingError& e, const RegionSpec& spec,
                 const Gains& g) {
    return in_m_epsilon(state.q, spec.epsilon) &&
           lyapunov_vk1(e, norm_sq(state.q), g) <= spec.c;
}

bool in_region_s_robust(const BodyState& state, const TrackingError& e, const Vec3& e_delta,
                        const RegionSpec& spec, const RobustGains& rg) {
    return in_m_epsilon(state.q, spec.epsilon) &&
           lyapunov_v(e, norm_sq(state.q), rg, e_delta) <= spec.c;
}

std::optional<FeasibleGains> feasible_gains(const TrackingError& e0, double delta_bound,
                                            const Gains& g0) {
    const double eq2 = norm_sq(e0.e_q);
    if (std::sqrt(eq2) >= 2.0) return std::nullopt;

    // With a unit reference, |q|^2 = |1 + e_q|^2 regardless of where q sits.
    const double qn2 = norm_sq(Quat::identity() + e0.e_q);
    const double r = norm_sq(e0.e_omega - eta(e0, qn2, g0));

    const double c = 0.5 * (0.5 * eq2 + 2.0);  // midpoint of (|e_q|^2/2, 2)
    const double headroom = c - 0.5 * eq2;     // > 0 by choice of c
    // Fixed margin, shrunk only when the headroom itself is smaller (initial
    // error close to antipodal), so the rule stays well defined everywhere.
    const double m = std::min(1e-3, 0.5 * headroom);

    const double k1 = (r > 0.0) ? std::max(g0.k1, r / (2.0 * headroom - 2.0 * m)) : g0.k1;
    const double remaining = headroom - r / (4.0 * k1);  // >= (headroom + m)/2
    double k_delta = delta_bound * delta_bound / (2.0 * remaining - m);
    k_delta = std::max(k_delta, delta_bound * delta_bound / (2.0 * c) + 1e-9);
    return FeasibleGains{c, k1, k_delta};
}

}  // namespace quattrack
