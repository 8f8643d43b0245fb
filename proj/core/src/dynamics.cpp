#include "quattrack/dynamics.hpp"

#include <cmath>
#include <utility>

namespace quattrack {

Disturbance Disturbance::constant(const Vec3& v) {
    Disturbance d;
    d.kind_ = Kind::constant;
    d.value_ = v;
    return d;
}

Disturbance Disturbance::sinusoidal(const Vec3& amplitude, double frequency) {
    Disturbance d;
    d.kind_ = Kind::varying;
    d.fn_ = [amplitude, frequency](double t) { return std::cos(frequency * t) * amplitude; };
    return d;
}

Disturbance Disturbance::varying(std::function<Vec3(double)> f) {
    Disturbance d;
    d.kind_ = Kind::varying;
    d.fn_ = std::move(f);
    return d;
}

Vec3 Disturbance::at(double t) const {
    switch (kind_) {
        case Kind::none: return Vec3::zero();
        case Kind::constant: return value_;
        case Kind::varying: return fn_(t);
    }
    return Vec3::zero();
}

StateDerivative rigid_field(const BodyState& state, const Vec3& tau, const Inertia& inertia) {
    const Quat q_dot = 0.5 * mul(state.q, pure(state.omega));
    const Vec3 gyro = cross(inertia.apply(state.omega), state.omega);
    return {q_dot, inertia.solve(gyro) + inertia.solve(tau)};
}

StateDerivative embedded_field(const BodyState& state, const Vec3& tau, const Inertia& inertia,
                               double alpha) {
    StateDerivative d = rigid_field(state, tau, inertia);
    d.q_dot = d.q_dot - alpha * (norm_sq(state.q) - 1.0) * state.q;
    return d;
}

StateDerivative disturbed_embedded_field(const BodyState& state, const Vec3& tau,
                                         const Inertia& inertia, double alpha,
                                         const Disturbance& dist, double t) {
    StateDerivative d = embedded_field(state, tau, inertia, alpha);
    if (dist.active()) d.omega_dot += inertia.solve(dist.at(t));
    return d;
}

double norm_sq_drift(const Quat& q, double alpha) {
    const double v = norm_sq(q);
    return -2.0 * alpha * (v - 1.0) * v;
}

}  // namespace quattrack
