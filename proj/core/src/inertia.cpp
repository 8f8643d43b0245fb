#include "quattrack/inertia.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quattrack {

Mat3 Mat3::identity() {
    Mat3 r;
    r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
    return r;
}

Mat3 Mat3::diagonal(double a, double b, double c) {
    Mat3 r;
    r(0, 0) = a;
    r(1, 1) = b;
    r(2, 2) = c;
    return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

namespace {

// Lower-triangular Cholesky factor; false if the matrix is not positive
// definite.
bool cholesky(const Mat3& a, Mat3& l) {
    l = Mat3{};
    const double d0 = a(0, 0);
    if (d0 <= 0.0) return false;
    l(0, 0) = std::sqrt(d0);
    l(1, 0) = a(1, 0) / l(0, 0);
    l(2, 0) = a(2, 0) / l(0, 0);
    const double d1 = a(1, 1) - l(1, 0) * l(1, 0);
    if (d1 <= 0.0) return false;
    l(1, 1) = std::sqrt(d1);
    l(2, 1) = (a(2, 1) - l(2, 0) * l(1, 0)) / l(1, 1);
    const double d2 = a(2, 2) - l(2, 0) * l(2, 0) - l(2, 1) * l(2, 1);
    if (d2 <= 0.0) return false;
    l(2, 2) = std::sqrt(d2);
    return true;
}

// Solve L L^T x = e_k by forward/back substitution.
void solve_unit_column(const Mat3& l, int k, double x[3]) {
    double y[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        double rhs = (i == k) ? 1.0 : 0.0;
        for (int j = 0; j < i; ++j) rhs -= l(i, j) * y[j];
        y[i] = rhs / l(i, i);
    }
    for (int i = 2; i >= 0; --i) {
        double rhs = y[i];
        for (int j = i + 1; j < 3; ++j) rhs -= l(j, i) * x[j];
        x[i] = rhs / l(i, i);
    }
}

double max_abs_entry(const Mat3& m) {
    double r = 0.0;
    for (double v : m.m) r = std::max(r, std::abs(v));
    return r;
}

}  // namespace

Inertia::Inertia(const Mat3& m) : mat_(m) {
    for (double v : m.m) {
        if (!std::isfinite(v)) throw std::invalid_argument("inertia matrix has a non-finite entry");
    }
    const double tol = 1e-12 * std::max(1.0, max_abs_entry(m));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw std::invalid_argument("inertia matrix must be symmetric");

    Mat3 l;
    if (!cholesky(mat_, l))
        throw std::invalid_argument("inertia matrix must be positive definite");

    for (int k = 0; k < 3; ++k) {
        double col[3];
        solve_unit_column(l, k, col);
        inv_(0, k) = col[0];
        inv_(1, k) = col[1];
        inv_(2, k) = col[2];
    }
}

Inertia Inertia::diagonal(double a, double b, double c) {
    return Inertia(Mat3::diagonal(a, b, c));
}

}  // namespace quattrack
