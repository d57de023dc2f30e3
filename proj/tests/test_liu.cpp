#include <doctest.h>

#include <cmath>
#include <complex>

#include "diagphase/liu.hpp"

using namespace diagphase;

namespace {

double wrap_diff(double a, double b) { return std::abs(std::remainder(a - b, 2 * M_PI)); }

std::vector<std::complex<double>> basis(int width, std::size_t k) {
    std::vector<std::complex<double>> psi(std::size_t{1} << width);
    psi[k] = 1.0;
    return psi;
}

// Largest deviation of the simulated phases from -expected.
double phase_error(const Circuit& c, const std::vector<double>& expected) {
    PhaseReport r = simulate_phases(c);
    REQUIRE(r.diagonal);
    REQUIRE(r.phases.size() == expected.size());
    double worst = 0;
    for (std::size_t j = 0; j < expected.size(); ++j) worst = std::max(worst, wrap_diff(r.phases[j], -expected[j]));
    return worst;
}

}  // namespace

TEST_CASE("increment maps k to k+1") {
    Circuit inc = synth_controlled_increment(3, false);
    for (std::size_t k = 0; k < 8; ++k) {
        auto out = simulate_state(inc, basis(3, k));
        INFO("k=" << k);
        CHECK(std::abs(std::abs(out[(k + 1) % 8]) - 1.0) < 1e-10);
    }
    GateCounts g = decomposed_counts(inc);
    CHECK(g.h == 6);
    CHECK(g.phase == 3);
    CHECK(g.cphase == 6);
}

TEST_CASE("controlled increment") {
    Circuit inc = synth_controlled_increment(3, true);
    GateCounts g = decomposed_counts(inc);
    CHECK(g.h == 6);
    CHECK(g.cphase == 9);
    CHECK(g.phase == 0);
    for (std::size_t k = 0; k < 8; ++k) {
        auto off = simulate_state(inc, basis(4, k));
        CHECK(std::abs(off[k] - std::complex<double>(1.0)) < 1e-10);
        auto on = simulate_state(inc, basis(4, 8 + k));
        CHECK(std::abs(std::abs(on[8 + (k + 1) % 8]) - 1.0) < 1e-10);
    }
    CHECK_THROWS_AS(synth_controlled_increment(0, false), std::invalid_argument);
}

TEST_CASE("constant potential") {
    Potential V = Potential::polynomial({1.25}, 3.0);
    for (auto synth : {synth_liu, synth_mliu}) {
        Circuit c = synth(V, 5, 0.0, LiuOptions{2, false});
        CHECK(phase_error(c, std::vector<double>(32, 1.25)) < 1e-9);
    }
}

TEST_CASE("knots are reproduced exactly") {
    Potential V = Potential::damped_osc(1, 0.1, 2, 20);
    Circuit c = synth_liu(V, 7, 0.0, LiuOptions{3, false});
    PhaseReport r = simulate_phases(c);
    for (int l = 0; l < 8; ++l) CHECK(wrap_diff(r.phases[l * 16], -V.value(l * 20.0 / 8)) < 1e-9);
}

TEST_CASE("coulomb linear interpolation") {
    Potential V = Potential::coulomb(1, 0.5, 20);
    Circuit c = synth_liu(V, 6, 0.0, LiuOptions{3, false});
    std::vector<double> expected(64);
    for (int j = 0; j < 64; ++j) {
        int k = j / 8, kp = j % 8;
        double a = V.value(k * 2.5), b = V.value(((k + 1) % 8) * 2.5);
        expected[j] = a + kp * (b - a) / 8;
    }
    CHECK(phase_error(c, expected) < 1e-9);
}

TEST_CASE("interpolation semantics for all small shapes") {
    Potential V = Potential::from_expr(parse_expression("exp(-0.2*(x-3)^2)*2+0.1*x"), 7.0);
    for (int n = 2; n <= 9; ++n)
        for (int m = 1; m < n; ++m) {
            INFO("n=" << n << " m1=" << m);
            LiuPlan periodic = liu_plan(V, n, 0.0, m, Wrap::Periodic);
            CHECK(phase_error(synth_liu(V, n, 0.0, LiuOptions{m, false}), liu_interpolant(periodic)) < 1e-9);
            LiuPlan endpoint = liu_plan(V, n, 0.0, m, Wrap::Endpoint);
            CHECK(phase_error(synth_mliu(V, n, 0.0, LiuOptions{m, m % 2 == 0}), liu_interpolant(endpoint)) < 1e-9);
        }
}

TEST_CASE("degrades to walsh when m1 reaches n") {
    Potential V = Potential::coulomb(1, 0.5, 20);
    Circuit c = synth_liu(V, 4, 0.0, LiuOptions{6, false});
    GateCounts g = decomposed_counts(c);
    CHECK(g.rz == 15);
    CHECK(g.h == 0);
}

TEST_CASE("liu count law") {
    Potential V = Potential::coulomb(1, 0.5, 20);
    for (int n = 3; n <= 12; ++n)
        for (int m = 2; m < n; ++m) {
            GateCounts g = decomposed_counts(synth_liu(V, n, 0.0, LiuOptions{m, false}));
            long long M = 1LL << m, f = n - m;
            INFO("n=" << n << " m1=" << m);
            CHECK(g.dec_h == 4 * m * f);
            CHECK(g.rz == 2 * (M + 3LL * m * m - 1) * f + M - 1);
            CHECK(g.dec_cnot == 2 * (M + 2LL * m * m - 2) * f + M - 2);
        }
}

TEST_CASE("mliu count law") {
    Potential V = Potential::damped_osc(1, 0.1, 2, 20);
    GateCounts g = decomposed_counts(synth_mliu(V, 6, 0.0, LiuOptions{3, false}));
    CHECK(g.rz == 70);
    CHECK(g.dec_cnot == 66);
    for (int n = 3; n <= 12; ++n)
        for (int m = 2; m < n; ++m) {
            GateCounts c = decomposed_counts(synth_mliu(V, n, 0.0, LiuOptions{m, false}));
            long long M = 1LL << m, f = n - m;
            CHECK(c.rz == (3 * M - 3) * f + M - 1);
            CHECK(c.dec_cnot == (3 * M - 4) * f + M - 2);
        }
}

TEST_CASE("periodic potential gives identical liu and mliu phases") {
    Potential V = Potential::coulomb(1, 0.5, 20);
    PhaseReport a = simulate_phases(synth_liu(V, 8, 0.0, LiuOptions{4, false}));
    PhaseReport b = simulate_phases(synth_mliu(V, 8, 0.0, LiuOptions{4, false}));
    for (std::size_t j = 0; j < a.phases.size(); ++j) CHECK(wrap_diff(a.phases[j], b.phases[j]) < 1e-9);
}

TEST_CASE("interpolation error is bounded by delta") {
    Potential osc = Potential::damped_osc(1, 0.1, 2, 20);
    const int n = 10;
    for (double delta : {1e-1, 1e-2}) {
        PhaseReport r = simulate_phases(synth_mliu(osc, n, delta));
        double worst = 0;
        for (std::size_t j = 0; j < r.phases.size(); ++j)
            worst = std::max(worst, wrap_diff(r.phases[j], -osc.value(j * 20.0 / 1024)));
        CHECK(worst <= delta);
    }
    Potential cou = Potential::coulomb(1, 0.5, 20);
    PhaseReport r = simulate_phases(synth_liu(cou, n, 1e-2));
    double worst = 0;
    for (std::size_t j = 0; j < r.phases.size(); ++j)
        worst = std::max(worst, wrap_diff(r.phases[j], -cou.value(j * 20.0 / 1024)));
    CHECK(worst <= 1e-2);
}
