#pragma once

#include <type_traits>

namespace quattrack {

// Classical fixed-step 4-stage Runge-Kutta.  State needs
// operator+(State, State) and operator*(double, State); f maps
// (t, state) -> derivative.  Works for the augmented closed-loop state as
// well as for plain scalars in test oracles.
template <class State, class F>
    requires std::is_invocable_r_v<State, F&, double, const State&>
State rk4_step(const State& y, double t, double dt, F&& f) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * dt, y + (0.5 * dt) * k1);
    const State k3 = f(t + 0.5 * dt, y + (0.5 * dt) * k2);
    const State k4 = f(t + dt, y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace quattrack
