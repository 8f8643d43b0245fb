#pragma once

#include <functional>

#include "quattrack/quat.hpp"

namespace quattrack {

struct ReferenceSample {
    Quat q0;          // unit reference attitude
    Vec3 omega0;      // rad/s
    Vec3 omega0_dot;  // rad/s^2, consumed by the feedforward term
};

// Deterministic mapping t -> (q0, Omega0, dOmega0/dt).  The attitude and
// rate must be kinematically consistent, q0_dot = q0 * Omega0 / 2, which
// consistency_residual checks numerically.  The rate derivative is optional;
// when absent, sampling falls back to a central difference of the rate.
class ReferenceTrajectory {
public:
    using AttitudeFn = std::function<Quat(double)>;
    using RateFn = std::function<Vec3(double)>;

    // Default: hold the identity attitude at zero rate.
    ReferenceTrajectory();
    ReferenceTrajectory(AttitudeFn attitude, RateFn rate, RateFn rate_derivative = nullptr);

    ReferenceSample sample(double t) const;
    Quat attitude(double t) const { return attitude_(t); }
    Vec3 rate(double t) const { return rate_(t); }
    bool has_rate_derivative() const { return static_cast<bool>(rate_derivative_); }

private:
    AttitudeFn attitude_;
    RateFn rate_;
    RateFn rate_derivative_;
};

// Built-in analytic reference used by the case-study presets:
//   q0(t)     = (cos t, (cos t sin t, sin^2 t, 0))           (unit for all t)
//   Omega0(t) = (2 cos^3 t, (2 + 2 cos^2 t) sin t, -2 sin^2 t)
// with the matching closed-form rate derivative.
ReferenceTrajectory analytic_reference();

// Kinematic-consistency residual of a reference at time t (t >= 1e-6 so the
// central difference stays in the domain):
//   |vec(2 q0* q0_dot_fd) - Omega0| + |scalar(2 q0* q0_dot_fd)|
// Zero (up to differencing noise) iff q0_dot = q0 * Omega0 / 2 with unit q0.
double consistency_residual(const ReferenceTrajectory& ref, double t);

// Central-difference rate derivative, h = 1e-6, error O(h^2).
Vec3 omega_dot_fallback(const ReferenceTrajectory& ref, double t);

}  // namespace quattrack
