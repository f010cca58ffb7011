#ifndef CROD_LINALG_HPP
#define CROD_LINALG_HPP

#include <algorithm>
#include <array>
#include <cmath>

namespace crod {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double c, Vec3 a) { return {c * a.x, c * a.y, c * a.z}; }
inline Vec3 operator*(Vec3 a, double c) { return c * a; }
inline Vec3 operator/(Vec3 a, double c) { return {a.x / c, a.y / c, a.z / c}; }
inline Vec3& operator+=(Vec3& a, Vec3 b) { a = a + b; return a; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double max_abs(Vec3 a) {
    return std::max({std::fabs(a.x), std::fabs(a.y), std::fabs(a.z)});
}
inline bool is_finite(Vec3 a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}
// component-wise product (diagonal tensor application)
inline Vec3 cmul(Vec3 a, Vec3 b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }
inline Vec3 cdiv(Vec3 a, Vec3 b) { return {a.x / b.x, a.y / b.y, a.z / b.z}; }

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int r, int c) { return m[3 * r + c]; }
    double operator()(int r, int c) const { return m[3 * r + c]; }

    static Mat3 identity() {
        Mat3 out;
        out.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        return out;
    }
    static Mat3 zero() { return Mat3{}; }
};

inline Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (int i = 0; i < 9; ++i) out.m[i] = a.m[i] + b.m[i];
    return out;
}
inline Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (int i = 0; i < 9; ++i) out.m[i] = a.m[i] - b.m[i];
    return out;
}
inline Mat3 operator*(double c, const Mat3& a) {
    Mat3 out;
    for (int i = 0; i < 9; ++i) out.m[i] = c * a.m[i];
    return out;
}
inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
    return out;
}
inline Vec3 operator*(const Mat3& a, Vec3 v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}
inline Mat3 transpose(const Mat3& a) {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out(r, c) = a(c, r);
    return out;
}
inline double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}
/// Adjugate-over-determinant inverse. Caller guards det away from zero.
inline Mat3 inverse(const Mat3& a) {
    const double d = det(a);
    Mat3 out;
    out(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
    out(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
    out(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
    out(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
    out(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
    out(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
    out(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
    out(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
    out(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
    return out;
}
inline double max_abs(const Mat3& a) {
    double out = 0.0;
    for (double e : a.m) out = std::max(out, std::fabs(e));
    return out;
}

/// Skew matrix of v: hat(v)*w == cross(v, w).
inline Mat3 hat(Vec3 v) {
    Mat3 out;
    out.m = {0, -v.z, v.y, v.z, 0, -v.x, -v.y, v.x, 0};
    return out;
}

/// The even analytic family mf<j>(q) = sum_n (-q)^n / (2n+j)!:
///   mf0(q) = cos(sqrt q), mf1(q) = sin(sqrt q)/sqrt q,
///   mf2(q) = (1-cos sqrt q)/q, mf3(q) = (sqrt q - sin sqrt q)/q^(3/2), ...
/// Series below q = 1 (cancellation-free), closed-form recurrence
/// mf_{k+2} = (1/k! - mf_k)/q above.
inline double mfun_value(int j, double q) {
    if (q < 1.0) {
        double fact = 1.0;
        for (int k = 2; k <= j; ++k) fact *= k;
        double term = 1.0 / fact;
        double sum = term;
        for (int n = 0; std::fabs(term) > 1e-22 && n < 60; ++n) {
            term *= -q / ((2.0 * n + j + 1.0) * (2.0 * n + j + 2.0));
            sum += term;
        }
        return sum;
    }
    const double x = std::sqrt(q);
    double mk = std::cos(x);       // mf0
    double mk1 = std::sin(x) / x;  // mf1
    double fact = 1.0;             // k!
    for (int k = 0; k < j - 1; ++k) {
        const double next = (1.0 / fact - mk) / q;  // mf_{k+2}
        mk = mk1;
        mk1 = next;
        fact *= (k + 1);
    }
    return j == 0 ? mk : mk1;
}

/// Coefficients sin(p)/p, (1-cos p)/p^2, (p-sin p)/p^3 with Taylor fallback
/// below p = 1e-4 (both branches agree to ~1e-15 absolute there).
struct RotCoeffs {
    double c1, c2, c3;
};
inline RotCoeffs rot_coeffs(double p) {
    if (p < 1e-4) {
        const double p2 = p * p, p4 = p2 * p2;
        return {1.0 - p2 / 6.0 + p4 / 120.0,
                0.5 - p2 / 24.0 + p4 / 720.0,
                1.0 / 6.0 - p2 / 120.0 + p4 / 5040.0};
    }
    const double q = p * p;
    return {mfun_value(1, q), mfun_value(2, q), mfun_value(3, q)};
}

/// Closed-form exponential of hat(v): I + c1*A + c2*A^2.
inline Mat3 rodrigues_exp(Vec3 v) {
    const RotCoeffs c = rot_coeffs(norm(v));
    const Mat3 a = hat(v);
    return Mat3::identity() + c.c1 * a + c.c2 * (a * a);
}

/// Max entry of A^3 + p^2 A, which vanishes identically for skew A.
inline double cayley_hamilton_defect(Vec3 v) {
    const Mat3 a = hat(v);
    return max_abs(a * a * a + dot(v, v) * a);
}

/// ||R^T R - I||_max, zero for an exact rotation.
inline double orthonormality_defect(const Mat3& r) {
    return max_abs(transpose(r) * r - Mat3::identity());
}

}  // namespace crod

#endif
