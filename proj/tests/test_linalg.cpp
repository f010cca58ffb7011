#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crod/linalg.hpp"
#include "crod/verify.hpp"

using namespace crod;

namespace {

// Independent oracle: 40-term Taylor series of the matrix exponential.
Mat3 taylor_exp40(const Mat3& a) {
    Mat3 sum = Mat3::identity();
    Mat3 term = Mat3::identity();
    for (int k = 1; k <= 40; ++k) {
        term = (1.0 / k) * (term * a);
        sum = sum + term;
    }
    return sum;
}

Vec3 random_vec(ExprRng& rng, double max_norm_) {
    for (;;) {
        Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double n = norm(v);
        if (n > 1e-3 && n <= 1.0) return (rng.uniform(0, max_norm_) / n) * v;
    }
}

}  // namespace

TEST_CASE("hat: examples and exact skew-symmetry") {
    CHECK(max_abs(hat(Vec3{0, 0, 0})) == 0.0);

    const Vec3 u = hat(Vec3{1, 2, 3}) * Vec3{1, 0, 0};
    CHECK(u.x == doctest::Approx(0.0));
    CHECK(u.y == doctest::Approx(3.0));
    CHECK(u.z == doctest::Approx(-2.0));

    ExprRng rng(11);
    for (int k = 0; k < 50; ++k) {
        const Vec3 v{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const Mat3 a = hat(v);
        // entry-wise negation equality, no tolerance
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) CHECK(a(r, c) == -a(c, r));
        // hat(v) w == v x w
        const Vec3 w{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(max_abs(a * w - cross(v, w)) <= 1e-14);
    }
}

TEST_CASE("cross: basis identity, antisymmetry, components") {
    const Vec3 e = cross(Vec3{1, 0, 0}, Vec3{0, 1, 0});
    CHECK(e.x == 0.0);
    CHECK(e.y == 0.0);
    CHECK(e.z == 1.0);

    const Vec3 u{1, 2, 3}, v{4, 5, 6};
    CHECK(max_abs(cross(u, v) + cross(v, u)) == 0.0);
    CHECK(cross(u, v).x == doctest::Approx(-3.0));
    CHECK(cross(u, v).y == doctest::Approx(6.0));
    CHECK(cross(u, v).z == doctest::Approx(-3.0));
    CHECK(max_abs(cross(u, u)) == 0.0);
}

TEST_CASE("rodrigues_exp: examples") {
    CHECK(max_abs(rodrigues_exp(Vec3{0, 0, 0}) - Mat3::identity()) == 0.0);

    // quarter turn about x maps e_y to e_z
    const Vec3 img = rodrigues_exp(Vec3{M_PI / 2, 0, 0}) * Vec3{0, 1, 0};
    CHECK(max_abs(img - Vec3{0, 0, 1}) <= 1e-12);

    CHECK(std::fabs(det(rodrigues_exp(Vec3{1.1, -0.4, 2.0})) - 1.0) <= 1e-12);
}

TEST_CASE("rodrigues_exp matches the 40-term Taylor oracle") {
    ExprRng rng(42);
    for (int k = 0; k < 200; ++k) {
        const Vec3 v = random_vec(rng, M_PI);
        CHECK(max_abs(rodrigues_exp(v) - taylor_exp40(hat(v))) <= 1e-12);
    }
}

TEST_CASE("rodrigues_exp(v) * rodrigues_exp(-v) = I") {
    ExprRng rng(7);
    for (int k = 0; k < 100; ++k) {
        const Vec3 v = random_vec(rng, 8.0);  // no angle wrapping: > 2*pi accepted
        CHECK(max_abs(rodrigues_exp(v) * rodrigues_exp(-v) - Mat3::identity()) <= 1e-12);
    }
}

TEST_CASE("rodrigues_exp returns a rotation") {
    ExprRng rng(3);
    for (int k = 0; k < 100; ++k) {
        const Mat3 r = rodrigues_exp(random_vec(rng, 10.0));
        CHECK(orthonormality_defect(r) <= 1e-12);
        CHECK(std::fabs(det(r) - 1.0) <= 1e-12);
    }
}

TEST_CASE("cayley_hamilton_defect: examples and bound") {
    CHECK(cayley_hamilton_defect(Vec3{0, 0, 0}) == 0.0);
    CHECK(cayley_hamilton_defect(Vec3{1, 2, 2}) <= 1e-12);   // p^2 = 9
    CHECK(cayley_hamilton_defect(Vec3{5, -5, 5}) <= 1e-11);

    ExprRng rng(99);
    for (int k = 0; k < 200; ++k)
        CHECK(cayley_hamilton_defect(random_vec(rng, 10.0)) <= 1e-11);
}

TEST_CASE("rot_coeffs: limits and branch continuity") {
    const RotCoeffs c0 = rot_coeffs(0.0);
    CHECK(c0.c1 == 1.0);
    CHECK(c0.c2 == 0.5);
    CHECK(c0.c3 == doctest::Approx(1.0 / 6.0));

    const RotCoeffs lo = rot_coeffs(1e-4 * (1 - 1e-12));
    const RotCoeffs hi = rot_coeffs(1e-4);
    CHECK(std::fabs(lo.c1 - hi.c1) <= 1e-12);
    CHECK(std::fabs(lo.c2 - hi.c2) <= 1e-12);
    CHECK(std::fabs(lo.c3 - hi.c3) <= 1e-12);
}
