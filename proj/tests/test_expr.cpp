#include <doctest.h>

#include <cmath>
#include <random>

#include "diagphase/expr.hpp"

using namespace diagphase;

namespace {

// Central finite difference of order k with step h (orders 0..4).
double central_fd(const Expr& e, double x, int k, double h) {
    auto f = [&](double t) { return e.eval(t); };
    switch (k) {
    case 0: return f(x);
    case 1: return (f(x + h) - f(x - h)) / (2 * h);
    case 2: return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
    case 3: return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
    default: return (f(x + 2 * h) - 4 * f(x + h) + 6 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / (h * h * h * h);
    }
}

// Fourth-order accurate central stencils for k = 3, 4; lower orders fall back to central_fd.
double central_fd_accurate(const Expr& e, double x, int k, double h) {
    auto f = [&](double t) { return e.eval(t); };
    if (k == 3)
        return (-f(x + 3 * h) + 8 * f(x + 2 * h) - 13 * f(x + h) + 13 * f(x - h) - 8 * f(x - 2 * h) + f(x - 3 * h)) /
               (8 * h * h * h);
    if (k == 4)
        return (-f(x + 3 * h) + 12 * f(x + 2 * h) - 39 * f(x + h) + 56 * f(x) - 39 * f(x - h) + 12 * f(x - 2 * h) -
                f(x - 3 * h)) /
               (6 * h * h * h * h);
    return central_fd(e, x, k, h);
}

}  // namespace

TEST_CASE("parse simple forms") {
    CHECK(parse_expression("x") == Expr::variable());
    CHECK(parse_expression("x").eval(3.5) == 3.5);
    CHECK(parse_expression("2+3*4").eval(0) == 14.0);
    CHECK(parse_expression("2*3^2").eval(0) == 18.0);
    CHECK(parse_expression("-2^2").eval(0) == -4.0);
    CHECK(parse_expression("8-3-2").eval(0) == 3.0);
    CHECK(parse_expression("16/4/2").eval(0) == 2.0);
    CHECK(parse_expression("2^3^2").eval(0) == 512.0);
    CHECK(parse_expression("x^-2").eval(2.0) == doctest::Approx(0.25));
    CHECK(parse_expression("pi").eval(0) == doctest::Approx(M_PI));
    CHECK(parse_expression(" 1.5e1 + .5 ").eval(0) == 15.5);
}

TEST_CASE("example potential expression") {
    Expr e = parse_expression("1/sqrt(0.5+(x-10)^2)");
    CHECK(e.eval(10.0) == doctest::Approx(1.0 / std::sqrt(0.5)));
    CHECK(e.eval(12.0) == doctest::Approx(1.0 / std::sqrt(4.5)));
}

TEST_CASE("parse errors carry offsets") {
    try {
        parse_expression("x+");
        FAIL("expected error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
    try {
        parse_expression("2*foo(x)");
        FAIL("expected error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
        CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_expression("sin(x, 2)"), ParseError);
    CHECK_THROWS_AS(parse_expression("sin()"), ParseError);
    CHECK_THROWS_AS(parse_expression("(x"), ParseError);
    CHECK_THROWS_AS(parse_expression(""), ParseError);
    CHECK_THROWS_AS(parse_expression("x^x"), ParseError);
    CHECK_THROWS_AS(parse_expression("3 4"), ParseError);
}

TEST_CASE("elementary derivatives") {
    CHECK(parse_expression("exp(x)").eval_deriv(0.0, 3) == doctest::Approx(1.0));
    CHECK(parse_expression("sin(x)").eval_deriv(0.0, 3) == doctest::Approx(-1.0));
    CHECK(parse_expression("cos(x)").eval_deriv(0.0, 4) == doctest::Approx(1.0));
    CHECK(parse_expression("sqrt(x)").eval_deriv(4.0, 1) == doctest::Approx(0.25));
    CHECK(parse_expression("x^2.5").eval_deriv(4.0, 2) == doctest::Approx(2.5 * 1.5 * 2.0));
    CHECK(parse_expression("abs(x)").eval_deriv(-2.0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(parse_expression("sqrt(x)").eval(-1.0), DomainError);
    CHECK_THROWS_AS(parse_expression("1/x").eval(0.0), DomainError);
    CHECK_THROWS_AS(parse_expression("1/x").eval_deriv(0.0, 2), DomainError);
    CHECK_THROWS_AS(parse_expression("abs(x)").eval_deriv(0.0, 1), DomainError);
    CHECK(parse_expression("abs(x)").eval_deriv(0.0, 0) == 0.0);
    CHECK_THROWS_AS(parse_expression("x").eval_deriv(0.0, 5), std::invalid_argument);
}

TEST_CASE("second derivative of the example matches finite differences") {
    Expr e = parse_expression("1/sqrt(0.5+(x-10)^2)");
    double ad = e.eval_deriv(10.0, 2);
    double fd = central_fd(e, 10.0, 2, 1e-4);
    CHECK(std::abs(ad - fd) <= 1e-6 * std::abs(ad));
    // closed form: V'' at the center is -A / a^3
    CHECK(ad == doctest::Approx(-1.0 / std::pow(0.5, 1.5)).epsilon(1e-12));
}

TEST_CASE("polynomials of degree <= 4 differentiate exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        double c[5];
        for (double& v : c) v = U(rng);
        char buf[512];
        std::snprintf(buf, sizeof buf, "%.17g + %.17g*x + %.17g*x^2 + %.17g*x*x*x + %.17g*x^4", c[0], c[1], c[2], c[3], c[4]);
        Expr e = parse_expression(buf);
        for (int i = 0; i < 100; ++i) {
            double x = U(rng);
            double d[5] = {
                c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x + c[4] * x * x * x * x,
                c[1] + 2 * c[2] * x + 3 * c[3] * x * x + 4 * c[4] * x * x * x,
                2 * c[2] + 6 * c[3] * x + 12 * c[4] * x * x,
                6 * c[3] + 24 * c[4] * x,
                24 * c[4],
            };
            for (int k = 0; k <= 4; ++k) {
                double got = e.eval_deriv(x, k);
                double scale = 1.0 + std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]) + std::abs(c[3]) + std::abs(c[4]);
                CHECK(std::abs(got - d[k]) <= 1e-12 * scale * 64);
            }
        }
    }
}

TEST_CASE("derivatives match central differences on smooth functions") {
    const char* funcs[] = {"1/sqrt(0.5+(x-10)^2)", "exp(-0.1*x^2)*cos(2*x)", "sin(x)*exp(0.3*x)", "sqrt(1+x^2)",
                           "x^1.7", "cos(x)/(2+sin(x))"};
    const double steps[] = {0, 1e-4, 1e-3, 1e-2, 1e-2};
    for (const char* f : funcs) {
        Expr e = parse_expression(f);
        for (double x : {1.3, 2.1, 9.7}) {
            for (int k = 1; k <= 4; ++k) {
                double ad = e.eval_deriv(x, k);
                double fd = central_fd_accurate(e, x, k, steps[k]);
                double tol = 1e-5 * std::max(1.0, std::abs(ad));
                INFO(std::string(f) << " x=" << x << " k=" << k << " ad=" << ad);
                CHECK(std::abs(ad - fd) <= tol);
            }
        }
    }
}

TEST_CASE("print then parse is idempotent") {
    const char* inputs[] = {"1/sqrt(0.5+(x-10)^2)", "-x^2", "(-x)^2", "2^3^2", "(2^3)^2", "x-(x-1)",
                            "x/(x*2)", "-(x+1)*3", "exp(-0.1*x^2)*cos(2*x)", "--x", "x^-2", "abs(x-pi)", "1e-5*x"};
    for (const char* s : inputs) {
        Expr e = parse_expression(s);
        std::string printed = e.to_string();
        Expr again = parse_expression(printed);
        INFO(s << " -> " << printed);
        CHECK(again == e);
        CHECK(again.to_string() == printed);
    }
}
