#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "diagphase/potential.hpp"

using namespace diagphase;

TEST_CASE("builtins evaluate") {
    Potential d = Potential::damped_osc(1, 0.1, 2, 20);
    CHECK(d.value(0.0) == doctest::Approx(1.0));
    Potential c = Potential::coulomb(1, 0.5, 20);
    CHECK(c.value(10.0) == doctest::Approx(1.0 / std::sqrt(0.5)));
    CHECK_THROWS_AS(Potential::coulomb(1, 0.0, 20), std::invalid_argument);
    CHECK_THROWS_AS(Potential::polynomial({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("constant potential has vanishing derivative norms") {
    Potential c = Potential::polynomial({3.0}, 5.0);
    for (int k = 1; k <= 4; ++k) CHECK(c.sup_norm(k, 0.0, 5.0) == 0.0);
    CoarseParams cp = coarse_params(c, 1e-3);
    CHECK(cp.m0 == 0);
    CHECK(cp.m1 == 0);
    for (int p = 1; p <= 3; ++p) {
        CHECK(cp.m_p[p] == 0);
        CHECK(cp.Mhat_p[p] == 1);
    }
}

TEST_CASE("sup norm of x^2") {
    Potential q = Potential::polynomial({0, 0, 1}, 1.0);
    CHECK(q.sup_norm(2, 0.0, 1.0) == doctest::Approx(2.0));
    CHECK(q.sup_norm(1, 0.0, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("coulomb first-derivative norm against brute force") {
    Potential c = Potential::coulomb(1, 0.5, 20);
    double brute = 0.0;
    const int N = 1000000;
    for (int i = 0; i <= N; ++i) {
        double x = 20.0 * i / N;
        double u = x - 10.0;
        double d1 = -u / std::pow(0.5 + u * u, 1.5);
        brute = std::max(brute, std::abs(d1));
    }
    double got = c.sup_norm(1, 0.0, 20.0);
    CHECK(std::abs(got - brute) <= 1e-3 * brute);
    CHECK(global_norms(c)[1] == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("sup norm is monotone under interval inclusion") {
    Potential c = Potential::damped_osc(1, 0.1, 2, 20);
    for (int k = 0; k <= 4; ++k) {
        double inner = c.sup_norm(k, 2.0, 5.0);
        double outer = c.sup_norm(k, 1.0, 9.0);
        CHECK(inner <= outer * (1 + 1e-9));
    }
}

TEST_CASE("coarse parameters from direct formulas") {
    Potential lin = Potential::polynomial({0, 1}, 1.0);
    CHECK(coarse_params(lin, 1.0 / 8).m0 == 3);
    Potential sq = Potential::polynomial({0, 0, 1}, 1.0);
    CoarseParams cp = coarse_params(sq, 0.01);
    CHECK(cp.m1 == 3);
    CHECK(cp.m_p[1] == cp.m1);
    CHECK(cp.Mhat_p[1] == 5);
    CHECK(cp.m_p[2] == 0);
    CHECK(cp.Mhat_p[2] == 1);
}

TEST_CASE("coulomb quadratic parameter") {
    Potential c = Potential::coulomb(1, 0.5, 20);
    CHECK(coarse_params(c, 1e-3).m_p[2] == 7);
}

TEST_CASE("parameters are monotone in delta and bounded") {
    Potential c = Potential::coulomb(1, 0.5, 20);
    CoarseParams prev = coarse_params(c, 1e-1);
    for (double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
        CoarseParams cp = coarse_params(c, delta);
        CHECK(cp.m0 >= prev.m0);
        CHECK(cp.m1 >= prev.m1);
        for (int p = 1; p <= 3; ++p) {
            CHECK(cp.m_p[p] >= prev.m_p[p]);
            CHECK(cp.Mhat_p[p] >= prev.Mhat_p[p]);
            CHECK(cp.Mhat_p[p] <= (1L << cp.m_p[p]));
        }
        prev = cp;
    }
}

TEST_CASE("parameters grow with L for a fixed shape") {
    for (double L : {10.0, 20.0, 40.0}) {
        Potential a = Potential::from_expr(parse_expression("sin(x)"), L);
        Potential b = Potential::from_expr(parse_expression("sin(x)"), 2 * L);
        CoarseParams ca = coarse_params(a, 1e-3), cb = coarse_params(b, 1e-3);
        for (int p = 1; p <= 3; ++p) {
            CHECK(cb.m_p[p] >= ca.m_p[p]);
            CHECK(cb.Mhat_p[p] >= ca.Mhat_p[p]);
        }
    }
}

TEST_CASE("quadratic Hermite kernel constant") {
    // max over [0, h] of x^2 (h - x) / 6 equals (2/81) h^3 at x = 2h/3.
    const double h = 1.7;
    double best = 0.0;
    for (int i = 0; i <= 300000; ++i) {
        double x = h * i / 300000.0;
        best = std::max(best, x * x * (h - x) / 6.0);
    }
    CHECK(best == doctest::Approx(kHermiteC2 * h * h * h).epsilon(1e-9));
    double at = (2 * h / 3) * (2 * h / 3) * (h / 3) / 6.0;
    CHECK(at == doctest::Approx(kHermiteC2 * h * h * h).epsilon(1e-14));
}

TEST_CASE("expression and kinked sources") {
    Potential e = Potential::from_expr(parse_expression("abs(x-1)"), 2.0);
    CHECK(e.has_kinks());
    CHECK(e.sup_norm(1, 0.0, 2.0) == doctest::Approx(1.0));
    CHECK(e.derivative(1.0, 1) == doctest::Approx(1.0));
    Potential s = Potential::from_expr(parse_expression("sqrt(x-1)"), 2.0);
    CHECK_THROWS_AS(s.value(0.5), DomainError);
}

TEST_CASE("tabulated source uses divided differences") {
    std::vector<double> xs, vs;
    for (int i = 0; i <= 40; ++i) {
        double x = 0.25 * i;
        xs.push_back(x);
        vs.push_back(1 - 2 * x + 0.5 * x * x * x);
    }
    Potential t = Potential::tabulated(xs, vs);
    CHECK(t.sampled_derivatives());
    CHECK(t.length() == 10.0);
    CHECK(t.value(3.3) == doctest::Approx(1 - 6.6 + 0.5 * 3.3 * 3.3 * 3.3));
    CHECK(t.derivative(3.3, 1) == doctest::Approx(-2 + 1.5 * 3.3 * 3.3));
    CHECK(t.derivative(3.3, 3) == doctest::Approx(3.0));
    CHECK(std::abs(t.derivative(3.3, 4)) < 1e-8);
}

TEST_CASE("csv ingestion") {
    const char* path = "test_potential_samples.csv";
    {
        std::ofstream out(path);
        out << "x,V\n";
        for (int i = 0; i <= 20; ++i) out << 0.5 * i << "," << (0.5 * i) * (0.5 * i) << "\n";
    }
    Potential t = Potential::from_csv(path);
    CHECK(t.length() == 10.0);
    CHECK(t.derivative(4.1, 2) == doctest::Approx(2.0));
    std::remove(path);
    CHECK_THROWS_AS(Potential::from_csv("does_not_exist.csv"), std::invalid_argument);
}

TEST_CASE("scaling multiplies every derivative") {
    Potential c = Potential::coulomb(1, 0.5, 20);
    Potential s = c.scaled(0.25);
    for (int k = 0; k <= 4; ++k) CHECK(s.derivative(7.3, k) == doctest::Approx(0.25 * c.derivative(7.3, k)));
}
