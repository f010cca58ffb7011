#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crod/verify.hpp"

using namespace crod;

namespace {

VecField const_field(Vec3 v) {
    VecField f;
    f.value = [v](double, double) { return v; };
    f.ds = [](double, double) { return Vec3{}; };
    f.dt = [](double, double) { return Vec3{}; };
    return f;
}

}  // namespace

TEST_CASE("residual_subsystem: constant parallel fields") {
    const GridSpec grid{0, 1, 5, 0, 1, 5};
    const auto rep =
        residual_subsystem(const_field({1, 0, 0}), const_field({1, 0, 0}), grid);
    CHECK(rep.max_norm == 0.0);
    CHECK(rep.l2_norm == 0.0);
    CHECK(static_cast<int>(rep.residuals.size()) == grid.points());
}

TEST_CASE("residual_subsystem: omega = 0, kappa = (t,0,0) gives F = (-1,0,0)") {
    VecField kappa;
    kappa.value = [](double, double t) { return Vec3{t, 0, 0}; };
    kappa.ds = [](double, double) { return Vec3{}; };
    kappa.dt = [](double, double) { return Vec3{1, 0, 0}; };
    const auto rep =
        residual_subsystem(const_field({0, 0, 0}), kappa, GridSpec{0, 1, 3, 0, 1, 3});
    for (const Vec3& r : rep.residuals) CHECK(max_abs(r - Vec3{-1, 0, 0}) == 0.0);
}

TEST_CASE("residual_subsystem: exact family stays below 1e-9 on 101x101") {
    const SolutionFamily fam = general_solution(
        parse_vec("0.3*s*t", "0.2*sin(s)", "0.1*t^2"), parse_vec("cos(t)", "t", "1"));
    const auto rep = residual_subsystem(fam, GridSpec{0, 1, 101, 0, 1, 101});
    CHECK(rep.max_norm <= 1e-9);
}

TEST_CASE("residual_subsystem: threaded sweep matches sequential") {
    const SolutionFamily fam = general_solution(
        parse_vec("0.2*s", "0.1*sin(s*t)", "0.3*t"), parse_vec("1", "t", "cos(t)"));
    const GridSpec grid{0, 1, 33, 0, 1, 17};
    const auto seq = residual_subsystem(fam, grid, 1);
    const auto par = residual_subsystem(fam, grid, 4);
    CHECK(seq.max_norm == par.max_norm);
    for (size_t i = 0; i < seq.residuals.size(); ++i)
        CHECK(max_abs(seq.residuals[i] - par.residuals[i]) == 0.0);
}

TEST_CASE("residual_subsystem: finite-difference mode approximates exact mode") {
    const SolutionFamily fam = general_solution(
        parse_vec("0.2*s*t", "0", "0.1*s"), parse_vec("cos(t)", "0", "1"));
    VecField omega, kappa;
    omega.value = [&](double s, double t) { return fam.eval_omega(s, t); };
    kappa.value = [&](double s, double t) { return fam.eval_kappa(s, t); };
    omega.fd_step = kappa.fd_step = 1e-6;
    const auto rep =
        residual_subsystem(omega, kappa, GridSpec{0.1, 0.9, 9, 0.1, 0.9, 9});
    CHECK(rep.max_norm <= 1e-8);  // FD truncation only; the exact residual is ~0
}

TEST_CASE("fd_crosscheck: exact on quadratics") {
    VecField f;
    f.value = [](double s, double t) { return Vec3{s * s + t, s * t, 2 * t * t}; };
    f.ds = [](double s, double t) { return Vec3{2 * s, t, 0}; };
    f.dt = [](double s, double t) { return Vec3{1, s, 4 * t}; };
    CHECK(fd_crosscheck(f, GridSpec{0, 1, 5, 0, 1, 5}, 0.1) <= 1e-10);
}

TEST_CASE("fd_crosscheck: O(h^2) convergence on sin(s)cos(t)") {
    VecField f;
    f.value = [](double s, double t) { return Vec3{std::sin(s) * std::cos(t), 0, 0}; };
    f.ds = [](double s, double t) { return Vec3{std::cos(s) * std::cos(t), 0, 0}; };
    f.dt = [](double s, double t) { return Vec3{-std::sin(s) * std::sin(t), 0, 0}; };
    const GridSpec grid{0.2, 0.8, 7, 0.2, 0.8, 7};
    const double e3 = fd_crosscheck(f, grid, 1e-3);
    const double e4 = fd_crosscheck(f, grid, 1e-4);
    const double ratio = e3 / e4;
    CHECK(ratio > 80.0);
    CHECK(ratio < 120.0);
}

TEST_CASE("fd_crosscheck: h = 0 violates the precondition") {
    VecField f = const_field({1, 2, 3});
    CHECK_THROWS_AS(fd_crosscheck(f, GridSpec{0, 1, 3, 0, 1, 3}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("symmetry_closure_test: identity element reproduces the base residual") {
    const SolutionFamily base = general_solution(
        parse_vec("0.3*s*t", "0.2*sin(s)", "0.1*t^2"), parse_vec("cos(t)", "t", "1"));
    const VecExpr zero{Expr::number(0), Expr::number(0), Expr::number(0)};
    const GridSpec grid{0, 1, 21, 0, 1, 21};
    const auto base_rep = residual_subsystem(base, grid);
    const auto rep = symmetry_closure_test(base, zero, grid);
    CHECK(std::fabs(rep.max_norm - base_rep.max_norm) <= 1e-15);
}

TEST_CASE("symmetry_closure_test: transformed solutions remain solutions") {
    const GridSpec grid{0, 1, 21, 0, 1, 21};

    const SolutionFamily seed =
        general_solution(parse_vec("0", "0", "0"), parse_vec("1", "0", "0"));
    CHECK(symmetry_closure_test(seed, parse_vec("s*t", "0", "0"), grid).max_norm <= 1e-8);

    const SolutionFamily base = general_solution(
        parse_vec("0.3*s*t", "0.2*sin(s)", "0.1*t^2"), parse_vec("cos(t)", "t", "1"));
    CHECK(symmetry_closure_test(base, parse_vec("0", "0.2*s", "0.1*t"), grid).max_norm <=
          1e-8);
}

TEST_CASE("symmetry_closure_test: randomized draws from the documented family") {
    ExprRng rng(2024);
    const GridSpec grid{0, 1, 21, 0, 1, 21};
    for (int k = 0; k < 5; ++k) {
        const VecExpr p = random_p(rng);
        const VecExpr f = random_f(rng);
        const VecExpr pp = random_p(rng);
        const SolutionFamily base = general_solution(p, f);
        CHECK(residual_subsystem(base, grid).max_norm <= 1e-9);
        CHECK(symmetry_closure_test(base, pp, grid).max_norm <= 1e-8);
    }
}

TEST_CASE("ResidualReport serialization") {
    const GridSpec grid{0, 1, 2, 0, 1, 2};
    const auto rep =
        residual_subsystem(const_field({0, 0, 0}), const_field({0, 0, 0}), grid);

    const std::string js = rep.to_json(true);
    CHECK(js.find("\"max_norm\":0") != std::string::npos);
    CHECK(js.find("\"points\":[[0,0,0],[0,0,0],[0,0,0],[0,0,0]]") != std::string::npos);

    std::ostringstream csv;
    rep.write_csv(csv);
    const std::string text = csv.str();
    CHECK(text.rfind("s,t,F1,F2,F3\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
