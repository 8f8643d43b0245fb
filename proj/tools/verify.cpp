#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include "quattrack/scenario_io.hpp"

namespace quattrack::cli {

namespace {

struct CheckResult {
    bool ok = false;
    double residual = 0.0;  // measured worst-case residual / violation
};

struct Check {
    const char* suite;
    const char* name;
    std::function<CheckResult()> fn;
};

constexpr double atol = 1e-12;
constexpr double rtol = 1e-9;

double rel_diff(const Quat& a, const Quat& b) {
    return norm(a - b) / std::max(1.0, norm(b));
}

struct Rng {
    std::mt19937_64 gen{0x5eedULL};
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    Vec3 vec(double lo = -2.0, double hi = 2.0) {
        return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
    }
    Quat quat(double lo = -2.0, double hi = 2.0) { return {uniform(lo, hi), vec(lo, hi)}; }
    Quat unit_quat() {
        std::normal_distribution<double> n(0.0, 1.0);
        Quat q{n(gen), {n(gen), n(gen), n(gen)}};
        return (1.0 / norm(q)) * q;
    }
};

// Plant-only state for open-loop integration checks.
struct PlantState {
    Quat q;
    Vec3 omega;
};
PlantState operator+(const PlantState& a, const PlantState& b) {
    return {a.q + b.q, a.omega + b.omega};
}
PlantState operator*(double s, const PlantState& a) { return {s * a.q, s * a.omega}; }

// ---------------------------------------------------------------- algebra

CheckResult check_associativity() {
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Quat p = rng.quat(), q = rng.quat(), r = rng.quat();
        const Quat lhs = mul(mul(p, q), r);
        const Quat rhs = mul(p, mul(q, r));
        worst = std::max(worst, norm(lhs - rhs) / std::max(1.0, norm(p) * norm(q) * norm(r)));
    }
    return {worst <= 1e-12, worst};
}

CheckResult check_conj_antihomomorphism() {
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Quat p = rng.quat(), q = rng.quat();
        worst = std::max(worst, rel_diff(conj(mul(p, q)), mul(conj(q), conj(p))));
    }
    return {worst <= atol + rtol, worst};
}

CheckResult check_norm_multiplicative() {
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Quat p = rng.quat(), q = rng.quat();
        const double lhs = norm(mul(p, q)), rhs = norm(p) * norm(q);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-300, rhs));
    }
    return {worst <= 1e-12, worst};
}

CheckResult check_normsq_via_conjugation() {
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Quat q = rng.quat();
        const double n2 = norm_sq(q);
        const double left = std::abs(scalar_part(mul(conj(q), q)) - n2);
        const double right = std::abs(scalar_part(mul(q, conj(q))) - n2);
        worst = std::max(worst, std::max(left, right) / std::max(1.0, n2));
    }
    return {worst <= atol + rtol, worst};
}

CheckResult check_pure_sandwich() {
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Quat q = rng.unit_quat();
        const Quat s = mul(mul(conj(q), pure(rng.vec())), q);
        worst = std::max(worst, std::abs(scalar_part(s)));
    }
    return {worst <= 1e-12, worst};
}

CheckResult check_basis_relations() {
    const Quat i = pure({1, 0, 0}), j = pure({0, 1, 0}), k = pure({0, 0, 1});
    const double r1 = norm(mul(i, j) - k);
    const double r2 = norm(mul(i, j) + mul(j, i));  // ij = -ji
    const double worst = std::max(r1, r2);
    return {worst == 0.0, worst};
}

// --------------------------------------------------------------- dynamics

CheckResult check_reduction_on_sphere() {
    Rng rng;
    const Inertia inertia = Inertia::diagonal(4.250, 4.337, 3.664);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BodyState st{rng.unit_quat(), rng.vec()};
        const Vec3 tau = rng.vec();
        const StateDerivative a = rigid_field(st, tau, inertia);
        const StateDerivative b = embedded_field(st, tau, inertia, 1.0);
        worst = std::max(worst, norm(a.q_dot - b.q_dot) + norm(a.omega_dot - b.omega_dot));
    }
    return {worst <= atol + rtol, worst};
}

CheckResult check_norm_drift_oracle() {
    Rng rng;
    const Inertia inertia = Inertia::diagonal(4.250, 4.337, 3.664);
    const double alpha = 1.0, h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const PlantState y{rng.quat(-1.5, 1.5), rng.vec()};
        const Vec3 tau = rng.vec();
        auto f = [&](double, const PlantState& s) -> PlantState {
            const StateDerivative d = embedded_field({s.q, s.omega}, tau, inertia, alpha);
            return {d.q_dot, d.omega_dot};
        };
        const PlantState fwd = rk4_step(y, 0.0, h, f);
        const PlantState bwd = rk4_step(y, 0.0, -h, f);
        const double fd = (norm_sq(fwd.q) - norm_sq(bwd.q)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - norm_sq_drift(y.q, alpha)));
    }
    return {worst <= 1e-6, worst};
}

CheckResult check_sphere_invariance() {
    const Inertia inertia = Inertia::diagonal(4.250, 4.337, 3.664);
    Rng rng;
    PlantState y{rng.unit_quat(), {0.3, -0.2, 0.4}};
    auto f = [&](double, const PlantState& s) -> PlantState {
        const StateDerivative d = embedded_field({s.q, s.omega}, Vec3::zero(), inertia, 1.0);
        return {d.q_dot, d.omega_dot};
    };
    double worst = std::abs(norm(y.q) - 1.0);
    const double dt = 1e-3;
    for (long k = 0; k < 30000; ++k) {
        y = rk4_step(y, static_cast<double>(k) * dt, dt, f);
        worst = std::max(worst, std::abs(norm(y.q) - 1.0));
    }
    return {worst <= 1e-9, worst};
}

CheckResult check_norm_attraction() {
    const Inertia inertia = Inertia::diagonal(4.250, 4.337, 3.664);
    double worst_final = 0.0;
    bool monotone = true;
    for (const double scale : {0.5, 2.0}) {  // |q|^2 = 0.25 and 4
        PlantState y{scale * Quat::identity(), {0.1, 0.2, 0.3}};
        auto f = [&](double, const PlantState& s) -> PlantState {
            const StateDerivative d = embedded_field({s.q, s.omega}, Vec3::zero(), inertia, 1.0);
            return {d.q_dot, d.omega_dot};
        };
        const double dt = 1e-3;
        double prev = std::abs(norm_sq(y.q) - 1.0);
        for (long k = 0; k < 10000; ++k) {
            y = rk4_step(y, static_cast<double>(k) * dt, dt, f);
            const double cur = std::abs(norm_sq(y.q) - 1.0);
            if (cur > prev) monotone = false;
            prev = cur;
        }
        worst_final = std::max(worst_final, prev);
    }
    return {monotone && worst_final < 1e-6, worst_final};
}

CheckResult check_scalar_norm_ode() {
    // V' = -2 alpha (V-1) V has the separable solution
    // V(t) = V0 / (V0 - (V0 - 1) exp(-2 alpha t)).
    const double alpha = 1.0, dt = 1e-3;
    double worst = 0.0;
    for (const double v0 : {4.0, 0.25}) {
        double v = v0;
        for (long k = 0; k < 10000; ++k) {
            const double t = static_cast<double>(k + 1) * dt;
            v = rk4_step(v, static_cast<double>(k) * dt, dt,
                         [alpha](double, double x) { return -2.0 * alpha * (x - 1.0) * x; });
            const double exact = v0 / (v0 - (v0 - 1.0) * std::exp(-2.0 * alpha * t));
            worst = std::max(worst, std::abs(v - exact));
        }
    }
    return {worst <= 1e-8, worst};
}

// --------------------------------------------------------------- lyapunov

Scenario perturbed_in_region_scenario() {
    Scenario cfg;
    cfg.inertia = Inertia::diagonal(4.250, 4.337, 3.664);
    cfg.gains.base = Gains{1.0, 3.0, 3.0, 3.0};
    cfg.mode = ControllerMode::non_robust;
    cfg.reference = analytic_reference();
    // |e_q(0)| = 0.5 via q(0) = q0(0) * p with unit p, e_omega(0) = 0.
    const Quat p{0.875, {std::sqrt(1.0 - 0.875 * 0.875), 0.0, 0.0}};
    cfg.initial_q = mul(cfg.reference.attitude(0.0), p);
    cfg.initial_omega = cfg.reference.rate(0.0);
    cfg.region = RegionSpec{1.0, 0.1};
    cfg.dt = 1e-3;
    cfg.t_end = 20.0;
    cfg.record_stride = 1;
    return cfg;
}

// Worst violation of the certified decrease bound
//   dV/dt <= -alpha rho e_qs^2 - k_q/2 |e_qv|^2 - k_omega/(2 k1) |e_w - eta|^2
// with rho = 2 - sqrt(2c) - eps, measured by central differences of the
// given energy samples.
double worst_bound_violation(const std::vector<double>& v, const Trace& trace,
                             const Scenario& cfg) {
    const Gains& g = cfg.gains.base;
    const double rho = 2.0 - std::sqrt(2.0 * cfg.region->c) - cfg.region->epsilon;
    const double dt = cfg.dt * cfg.record_stride;
    double worst = -1e300;
    for (size_t i = 1; i + 1 < trace.records.size(); ++i) {
        const TraceRecord& r = trace.records[i];
        const TrackingError e{r.e_q, r.e_omega};
        const Vec3 d = r.e_omega - eta(e, norm_sq(r.q), g);
        const double bound = -g.alpha * rho * r.e_q.s * r.e_q.s -
                             0.5 * g.k_q * norm_sq(r.e_q.v) -
                             g.k_omega / (2.0 * g.k1) * norm_sq(d);
        const double fd = (v[i + 1] - v[i - 1]) / (2.0 * dt);
        worst = std::max(worst, fd - bound);
    }
    return worst;
}

CheckResult check_decrease_bound_nonrobust() {
    const Scenario cfg = perturbed_in_region_scenario();
    const auto [trace, metrics] = simulate(cfg);
    std::vector<double> v(trace.records.size());
    for (size_t i = 0; i < trace.records.size(); ++i) v[i] = trace.records[i].v_k1;
    const double worst = worst_bound_violation(v, trace, cfg);
    const bool settled = trace.records.back().v_k1 < 1e-8;
    return {worst <= 1e-6 && settled, worst};
}

CheckResult check_decrease_bound_adaptive() {
    Scenario cfg = perturbed_in_region_scenario();
    cfg.mode = ControllerMode::robust;
    cfg.gains.k_delta = 1000.0;
    cfg.gains.delta_bound = 1.0;
    const Vec3 delta{0.3, 0.3, 0.3};
    cfg.disturbance = Disturbance::constant(delta);
    const auto [trace, metrics] = simulate(cfg);
    std::vector<double> v(trace.records.size());
    for (size_t i = 0; i < trace.records.size(); ++i) {
        const TraceRecord& r = trace.records[i];
        const TrackingError e{r.e_q, r.e_omega};
        v[i] = lyapunov_v(e, norm_sq(r.q), cfg.gains, delta - r.delta_hat);
    }
    const double worst = worst_bound_violation(v, trace, cfg);
    return {worst <= 1e-6, worst};
}

CheckResult check_v0_derivative_identity() {
    Scenario cfg = case_study(1);
    cfg.dt = 1e-4;
    cfg.t_end = 2.0;
    cfg.record_stride = 1;
    const auto [trace, metrics] = simulate(cfg);
    const double alpha = cfg.gains.base.alpha;
    double worst = 0.0;
    for (size_t i = 1; i + 1 < trace.records.size(); ++i) {
        const TraceRecord& r = trace.records[i];
        const double qn2 = norm_sq(r.q);
        const double expected =
            -alpha * (2.0 + r.e_q.s + (qn2 - 1.0)) * r.e_q.s * r.e_q.s +
            0.5 * dot(r.e_q.v, r.e_omega - 2.0 * alpha * (r.e_q.s + qn2 - 1.0) * r.e_q.v);
        const double fd = (lyapunov_v0({trace.records[i + 1].e_q, {}}) -
                           lyapunov_v0({trace.records[i - 1].e_q, {}})) /
                          (2.0 * cfg.dt);
        worst = std::max(worst, std::abs(fd - expected));
    }
    return {worst <= 1e-6, worst};
}

CheckResult check_region_invariance() {
    const Scenario cfg = perturbed_in_region_scenario();
    const auto [trace, metrics] = simulate(cfg);
    long violations = 0;
    bool entered = false;
    for (const TraceRecord& r : trace.records) {
        if (r.in_s) entered = true;
        else if (entered) ++violations;
        if (entered && !r.in_m_eps) ++violations;
    }
    if (!entered) violations = -1;  // never entered: vacuous, report as failure
    return {violations == 0, static_cast<double>(violations)};
}

}  // namespace

bool run_verify(const std::string& suite, std::ostream& out) {
    const std::vector<Check> checks = {
        {"algebra", "product associativity", check_associativity},
        {"algebra", "conjugation anti-homomorphism", check_conj_antihomomorphism},
        {"algebra", "norm multiplicativity", check_norm_multiplicative},
        {"algebra", "|q|^2 = q*q = qq*", check_normsq_via_conjugation},
        {"algebra", "pure sandwich q* w q", check_pure_sandwich},
        {"algebra", "basis relations ij = k = -ji", check_basis_relations},
        {"dynamics", "embedded field reduces to rigid field on |q| = 1",
         check_reduction_on_sphere},
        {"dynamics", "norm drift law d|q|^2/dt = -2a(|q|^2-1)|q|^2", check_norm_drift_oracle},
        {"dynamics", "unit sphere invariant over 30 s", check_sphere_invariance},
        {"dynamics", "norm attraction from |q|^2 in {0.25, 4}", check_norm_attraction},
        {"dynamics", "scalar norm ODE matches separable solution", check_scalar_norm_ode},
        {"lyapunov", "attitude energy derivative identity", check_v0_derivative_identity},
        {"lyapunov", "tracking energy decrease bound (non-robust)",
         check_decrease_bound_nonrobust},
        {"lyapunov", "tracking energy decrease bound (adaptive)", check_decrease_bound_adaptive},
        {"lyapunov", "certified region never exited after entry", check_region_invariance},
    };

    bool all_ok = true;
    int ran = 0;
    for (const Check& c : checks) {
        if (suite != "all" && suite != c.suite) continue;
        ++ran;
        const CheckResult r = c.fn();
        all_ok = all_ok && r.ok;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2e", r.residual);
        out << (r.ok ? "[PASS] " : "[FAIL] ") << c.suite << ": " << c.name << " (residual "
            << buf << ")\n";
    }
    if (ran == 0) {
        out << "no checks matched suite '" << suite << "'\n";
        return false;
    }
    out << (all_ok ? "verification passed" : "verification FAILED") << " (" << ran
        << " properties)\n";
    return all_ok;
}

}  // namespace quattrack::cli
