#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crod/expr.hpp"
#include "crod/verify.hpp"

using namespace crod;

namespace {

// random expression built from the grammar, for round-trip checks
Expr random_expr(ExprRng& rng, int depth) {
    if (depth == 0) {
        switch (rng.pick(3)) {
            case 0: return Expr::number(rng.uniform(-2, 2));
            case 1: return Expr::var('s');
            default: return Expr::var('t');
        }
    }
    const Expr a = random_expr(rng, depth - 1);
    const Expr b = random_expr(rng, depth - 1);
    switch (rng.pick(8)) {
        case 0: return a + b;
        case 1: return a - b;
        case 2: return a * b;
        case 3: return -a;
        case 4: return pow(a, 1 + rng.pick(3));
        case 5: return fun(Fn::Sin, a);
        case 6: return fun(Fn::Cos, a);
        default: return fun(Fn::Exp, Expr::number(0.3) * a);
    }
}

}  // namespace

TEST_CASE("parse: arithmetic examples") {
    CHECK(eval(parse("s*t + 1"), 2, 3) == doctest::Approx(7.0));
    CHECK(eval(parse("sin(s)^2 + cos(s)^2"), 0.7, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval(parse("2^3"), 0, 0) == 8.0);
    CHECK(eval(parse("sqrt(s^2+t^2)"), 3, 4) == doctest::Approx(5.0));
    CHECK(eval(parse("1.5e2"), 0, 0) == 150.0);
    CHECK(eval(parse("-s^2"), 3, 0) == 9.0);  // grammar binds '-' inside the base
}

TEST_CASE("parse: syntax errors carry byte offsets") {
    try {
        parse("s +");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 3);
    }
    try {
        parse("sin(s");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 5);
    }
    CHECK_THROWS_AS(parse("s^t"), ParseError);     // non-integer exponent
    CHECK_THROWS_AS(parse("(s+t"), ParseError);
    CHECK_THROWS_AS(parse("s t"), ParseError);
}

TEST_CASE("parse: unknown identifiers are rejected") {
    CHECK_THROWS_AS(parse("x + 1"), ParseError);
    CHECK_THROWS_AS(parse("foo(s)"), ParseError);
    CHECK_THROWS_AS(parse("arcsin(s)"), ParseError);
}

TEST_CASE("diff: examples") {
    CHECK(eval(diff(parse("s^2"), 's'), 3, 0) == doctest::Approx(6.0));
    CHECK(eval(diff(parse("sin(s*t)"), 't'), 2, 0) == doctest::Approx(2.0));
    CHECK(eval(diff(parse("sinh(s)"), 's'), 0.3, 0) == doctest::Approx(std::cosh(0.3)));
    CHECK(eval(diff(parse("log(s)"), 's'), 2.0, 0) == doctest::Approx(0.5));
    CHECK(eval(diff(parse("tan(s)"), 's'), 0.4, 0) ==
          doctest::Approx(1.0 / std::pow(std::cos(0.4), 2)));
}

TEST_CASE("diff agrees with central differences") {
    const Expr e = parse("exp(s)*cos(t)+s*t^3");
    const double h = 1e-5, s = 0.4, t = 1.2;
    const double fd = (eval(e, s + h, t) - eval(e, s - h, t)) / (2 * h);
    CHECK(std::fabs(eval(diff(e, 's'), s, t) - fd) <= 1e-8);
}

TEST_CASE("eval: domain errors name the offending sub-expression") {
    CHECK_THROWS_AS(eval(parse("1/(s-1)"), 1, 0), EvalDomainError);
    CHECK_THROWS_AS(eval(parse("log(s)"), -1, 0), EvalDomainError);
    CHECK_THROWS_AS(eval(parse("sqrt(s)"), -4, 0), EvalDomainError);
    try {
        eval(parse("t + 1/(s-1)"), 1, 0);
        FAIL("expected EvalDomainError");
    } catch (const EvalDomainError& e) {
        CHECK(std::string(e.what()).find("s-1") != std::string::npos);
    }
}

TEST_CASE("parse-print round trip evaluates identically") {
    ExprRng rng(1234);
    for (int k = 0; k < 30; ++k) {
        const Expr e = random_expr(rng, 3);
        const Expr back = parse(to_string(e));
        for (int p = 0; p < 100; ++p) {
            const double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
            CHECK(std::fabs(eval(e, s, t) - eval(back, s, t)) <= 1e-14);
        }
    }
}

TEST_CASE("differentiation is linear") {
    ExprRng rng(55);
    for (int k = 0; k < 20; ++k) {
        const Expr e1 = random_expr(rng, 2), e2 = random_expr(rng, 2);
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        const Expr combo = Expr::number(a) * e1 + Expr::number(b) * e2;
        for (char var : {'s', 't'}) {
            const double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
            const double lhs = eval(diff(combo, var), s, t);
            const double rhs = a * eval(diff(e1, var), s, t) + b * eval(diff(e2, var), s, t);
            CHECK(std::fabs(lhs - rhs) <= 1e-12);
        }
    }
}

TEST_CASE("mixed partials commute (Clairaut)") {
    ExprRng rng(77);
    for (int k = 0; k < 20; ++k) {
        const Expr e = random_expr(rng, 3);
        const Expr st = diff(diff(e, 's'), 't');
        const Expr ts = diff(diff(e, 't'), 's');
        for (int p = 0; p < 10; ++p) {
            const double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
            const double a = eval(st, s, t), b = eval(ts, s, t);
            CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
        }
    }
}

TEST_CASE("mf family: values and derivative closure") {
    // mf1(q) = sin(sqrt q)/sqrt q, mf2 = (1-cos sqrt q)/q, mf3 = (sqrt q - sin sqrt q)/q^1.5
    for (double q : {0.25, 1.0, 4.0, 9.0, 30.0}) {
        const double x = std::sqrt(q);
        CHECK(mfun_value(0, q) == doctest::Approx(std::cos(x)).epsilon(1e-13));
        CHECK(mfun_value(1, q) == doctest::Approx(std::sin(x) / x).epsilon(1e-13));
        CHECK(mfun_value(2, q) == doctest::Approx((1 - std::cos(x)) / q).epsilon(1e-13));
        CHECK(mfun_value(3, q) ==
              doctest::Approx((x - std::sin(x)) / (q * x)).epsilon(1e-12));
    }
    // limits at q = 0
    CHECK(mfun_value(1, 0.0) == doctest::Approx(1.0));
    CHECK(mfun_value(2, 0.0) == doctest::Approx(0.5));
    CHECK(mfun_value(3, 0.0) == doctest::Approx(1.0 / 6.0));

    // d/dq mf_j via finite differences, including through q = 1 branch point
    const Expr q = Expr::var('s');
    for (int j : {1, 2, 3, 4}) {
        const Expr d = diff(mfun(j, q), 's');
        for (double qv : {0.1, 0.999, 1.001, 5.0}) {
            const double h = 1e-6;
            const double fd = (mfun_value(j, qv + h) - mfun_value(j, qv - h)) / (2 * h);
            CHECK(eval(d, qv, 0) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("depends_on detects variables syntactically") {
    CHECK(depends_on(parse("sin(t)*s"), 's'));
    CHECK(depends_on(parse("sin(t)"), 't'));
    CHECK_FALSE(depends_on(parse("sin(t)+1"), 's'));
}
