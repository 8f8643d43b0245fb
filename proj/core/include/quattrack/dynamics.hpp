#pragma once

#include <functional>

#include "quattrack/inertia.hpp"
#include "quattrack/quat.hpp"

namespace quattrack {

// Attitude in the ambient quaternion space plus body-fixed angular velocity.
// q is not constrained to unit norm; the embedded field makes the unit
// sphere attracting instead of enforcing it.
struct BodyState {
    Quat q;
    Vec3 omega;  // rad/s
};

struct StateDerivative {
    Quat q_dot;
    Vec3 omega_dot;
};

// Torque bias acting on the body, in N*m.  `at(t)` evaluates the total
// disturbance at time t; the `none` model is identically zero.
class Disturbance {
public:
    Disturbance() = default;

    static Disturbance none() { return {}; }
    static Disturbance constant(const Vec3& v);
    // amplitude * cos(frequency * t)
    static Disturbance sinusoidal(const Vec3& amplitude, double frequency);
    static Disturbance varying(std::function<Vec3(double)> f);

    Vec3 at(double t) const;
    bool active() const { return kind_ != Kind::none; }

private:
    enum class Kind { none, constant, varying };
    Kind kind_ = Kind::none;
    Vec3 value_{};
    std::function<Vec3(double)> fn_;
};

// Rotational motion of a rigid body:
//   q_dot     = q * Omega / 2          (Omega as a pure quaternion)
//   omega_dot = I^-1 ((I Omega) x Omega) + I^-1 tau
StateDerivative rigid_field(const BodyState& state, const Vec3& tau, const Inertia& inertia);

// Extension of rigid_field from the unit sphere to all of quaternion space:
//   q_dot = q * Omega / 2 - alpha (|q|^2 - 1) q,   alpha > 0.
// On |q| = 1 this coincides with rigid_field; off the sphere the extra term
// drives |q| back to 1 exponentially for any q != 0.
StateDerivative embedded_field(const BodyState& state, const Vec3& tau, const Inertia& inertia,
                               double alpha);

// embedded_field with an additional I^-1 * d(t) acceleration term.
StateDerivative disturbed_embedded_field(const BodyState& state, const Vec3& tau,
                                         const Inertia& inertia, double alpha,
                                         const Disturbance& d, double t);

// d/dt |q|^2 along any embedded_field trajectory: -2 alpha (|q|^2 - 1) |q|^2.
// The rate term q*Omega/2 contributes nothing to the norm, so this holds for
// every torque program; used as an integration oracle.
double norm_sq_drift(const Quat& q, double alpha);

}  // namespace quattrack
