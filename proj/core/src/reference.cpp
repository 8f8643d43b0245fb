#include "quattrack/reference.hpp"

#include <cmath>
#include <utility>

namespace quattrack {

namespace {
constexpr double fd_step = 1e-6;
}

ReferenceTrajectory::ReferenceTrajectory()
    : attitude_([](double) { return Quat::identity(); }),
      rate_([](double) { return Vec3::zero(); }),
      rate_derivative_([](double) { return Vec3::zero(); }) {}

ReferenceTrajectory::ReferenceTrajectory(AttitudeFn attitude, RateFn rate, RateFn rate_derivative)
    : attitude_(std::move(attitude)),
      rate_(std::move(rate)),
      rate_derivative_(std::move(rate_derivative)) {}

ReferenceSample ReferenceTrajectory::sample(double t) const {
    return {attitude_(t), rate_(t),
            rate_derivative_ ? rate_derivative_(t) : omega_dot_fallback(*this, t)};
}

ReferenceTrajectory analytic_reference() {
    auto attitude = [](double t) {
        const double c = std::cos(t);
        const double s = std::sin(t);
        return Quat{c, {c * s, s * s, 0.0}};
    };
    auto rate = [](double t) {
        const double c = std::cos(t);
        const double s = std::sin(t);
        return Vec3{2.0 * c * c * c, (2.0 + 2.0 * c * c) * s, -2.0 * s * s};
    };
    auto rate_dot = [](double t) {
        const double c = std::cos(t);
        const double s = std::sin(t);
        return Vec3{-6.0 * c * c * s, (-2.0 + 6.0 * c * c) * c, -4.0 * s * c};
    };
    return {attitude, rate, rate_dot};
}

double consistency_residual(const ReferenceTrajectory& ref, double t) {
    const Quat q_dot_fd = (1.0 / (2.0 * fd_step)) * (ref.attitude(t + fd_step) - ref.attitude(t - fd_step));
    // 2 q0* q0_dot equals the rate as a pure quaternion when the reference
    // is consistent and unit norm.
    const Quat body_rate = 2.0 * mul(conj(ref.attitude(t)), q_dot_fd);
    return norm(vec(body_rate) - ref.rate(t)) + std::abs(scalar_part(body_rate));
}

Vec3 omega_dot_fallback(const ReferenceTrajectory& ref, double t) {
    return (1.0 / (2.0 * fd_step)) * (ref.rate(t + fd_step) - ref.rate(t - fd_step));
}

}  // namespace quattrack
