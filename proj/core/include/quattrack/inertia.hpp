#pragma once

#include <array>

#include "quattrack/vec3.hpp"

namespace quattrack {

// Row-major 3x3 matrix; just enough linear algebra for inertia handling.
struct Mat3 {
    std::array<double, 9> m{};

    static Mat3 identity();
    static Mat3 diagonal(double a, double b, double c);

    double operator()(int r, int c) const { return m[3 * r + c]; }
    double& operator()(int r, int c) { return m[3 * r + c]; }
};

Vec3 operator*(const Mat3& a, const Vec3& v);
Mat3 operator*(const Mat3& a, const Mat3& b);

// Moment-of-inertia matrix (kg*m^2) with its inverse precomputed at
// construction.  Input must be symmetric positive definite; a Cholesky
// factorization doubles as the check and as the solver for the inverse.
// The closed-loop fields apply I^-1 at every integrator stage, so the
// inverse is stored rather than re-solved.
class Inertia {
public:
    Inertia() : Inertia(Mat3::identity()) {}
    explicit Inertia(const Mat3& m);  // throws std::invalid_argument if not SPD
    static Inertia diagonal(double a, double b, double c);

    const Mat3& matrix() const { return mat_; }
    const Mat3& inverse() const { return inv_; }
    Vec3 apply(const Vec3& v) const { return mat_ * v; }  // I v
    Vec3 solve(const Vec3& v) const { return inv_ * v; }  // I^-1 v

private:
    Mat3 mat_;
    Mat3 inv_;
};

}  // namespace quattrack
