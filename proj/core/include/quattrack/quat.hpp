#pragma once

#include "quattrack/vec3.hpp"

namespace quattrack {

// Quaternion q = s + v, stored as an explicit scalar part and vector part so
// that taking either part is a plain field access.  Nothing here normalizes
// implicitly: values live in the full quaternion space, and keeping them on
// the unit sphere is the job of the dynamics, not of this type.
struct Quat {
    double s = 0.0;
    Vec3 v{};

    static constexpr Quat identity() { return {1.0, {0.0, 0.0, 0.0}}; }
    static constexpr Quat zero() { return {0.0, {0.0, 0.0, 0.0}}; }
};

// Product pq = (p_s q_s - <p_v, q_v>) + (p_s q_v + q_s p_v + p_v x q_v).
// Non-commutative; associativity and norm multiplicativity are covered by
// the property tests.
inline Quat mul(const Quat& p, const Quat& q) {
    return {p.s * q.s - dot(p.v, q.v), p.s * q.v + q.s * p.v + cross(p.v, q.v)};
}

inline Quat operator*(const Quat& p, const Quat& q) { return mul(p, q); }

// Conjugation q -> q* = s - v; satisfies (pq)* = q* p*.
inline Quat conj(const Quat& q) { return {q.s, -q.v}; }

inline double norm_sq(const Quat& q) { return q.s * q.s + norm_sq(q.v); }
inline double norm(const Quat& q) { return std::sqrt(norm_sq(q)); }

inline Quat operator+(const Quat& p, const Quat& q) { return {p.s + q.s, p.v + q.v}; }
inline Quat operator-(const Quat& p, const Quat& q) { return {p.s - q.s, p.v - q.v}; }
inline Quat operator-(const Quat& q) { return {-q.s, -q.v}; }
inline Quat operator*(double a, const Quat& q) { return {a * q.s, a * q.v}; }
inline Quat operator*(const Quat& q, double a) { return a * q; }

// Identification of R^3 with the pure quaternions (and back).  vec() takes
// the vector part of any quaternion; it does not require a zero scalar part.
inline Quat pure(const Vec3& v) { return {0.0, v}; }
inline Vec3 vec(const Quat& q) { return q.v; }
inline double scalar_part(const Quat& q) { return q.s; }

inline bool is_finite(const Quat& q) { return std::isfinite(q.s) && is_finite(q.v); }

}  // namespace quattrack
