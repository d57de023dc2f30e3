#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "diagphase/circuit.hpp"

using namespace diagphase;

namespace {

double phase_diff(double a, double b) { return std::abs(std::remainder(a - b, 2 * M_PI)); }

// QFT on qubits 0..m-1 without the final swaps.
Circuit small_qft(int m) {
    Circuit c(m, 0);
    for (int i = m - 1; i >= 0; --i) {
        c.add(Gate::h(i));
        for (int l = i - 1; l >= 0; --l) c.add(Gate::cphase(l, i, M_PI / double(1 << (i - l))));
    }
    return c;
}

Circuit random_circuit(int n, int gates, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    Circuit c(n, 0);
    for (int g = 0; g < gates; ++g) {
        int a = rng() % n, b = (a + 1 + rng() % (n - 1)) % n;
        switch (rng() % 5) {
        case 0: c.add(Gate::h(a)); break;
        case 1: c.add(Gate::x(a)); break;
        case 2: c.add(Gate::phase(a, ang(rng))); break;
        case 3: c.add(Gate::cnot(a, b)); break;
        default: c.add(Gate::cphase(a, b, ang(rng))); break;
        }
    }
    return c;
}

}  // namespace

TEST_CASE("angles are normalized") {
    CHECK(normalize_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(normalize_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(normalize_angle(3 * M_PI / 2) == doctest::Approx(-M_PI / 2));
    Circuit c(1, 0);
    c.add(Gate::phase(0, 7.0));
    CHECK(c.gates()[0].angle == doctest::Approx(7.0 - 2 * M_PI));
}

TEST_CASE("invalid gates are rejected") {
    Circuit c(2, 0);
    CHECK_THROWS_AS(c.add(Gate::h(2)), std::invalid_argument);
    CHECK_THROWS_AS(c.add(Gate::cnot(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(c.add(Gate::h(-1)), std::invalid_argument);
}

TEST_CASE("decomposed gate counts") {
    CHECK(mcp_rz(0) == 1);
    CHECK(mcp_rz(1) == 3);
    CHECK(mcp_rz(2) == 7);
    CHECK(mcp_rz(3) == 15);
    CHECK(mcp_cnot(1) == 2);
    CHECK(mcp_cnot(2) == 8);
    CHECK(mcp_cnot(3) == 20);

    Circuit c(4, 0);
    c.add(Gate::h(0));
    c.add(Gate::phase(1, 0.3));
    c.add(Gate::cnot(0, 1));
    c.add(Gate::cphase(2, 3, 0.2));
    c.add(Gate::mcphase({0, 1}, 2, 0.1));
    c.add(Gate::mcphase({0, 1, 2}, 3, 0.1));
    GateCounts g = decomposed_counts(c);
    CHECK(g.h == 1);
    CHECK(g.phase == 1);
    CHECK(g.cphase == 1);
    CHECK(g.mcp.at(2) == 1);
    CHECK(g.mcp.at(3) == 1);
    CHECK(g.fused == 0);
    CHECK(g.dec_h == 1);
    CHECK(g.rz == 1 + 3 + 7 + 15);
    CHECK(g.dec_cnot == 1 + 2 + 8 + 20);
    CHECK(g.decomposable);

    Circuit big(5, 0);
    big.add(Gate::mcphase({0, 1, 2, 3}, 4, 0.1));
    CHECK_FALSE(decomposed_counts(big).decomposable);
}

TEST_CASE("phase followed by cphase on its control is fused") {
    Circuit c(2, 0);
    c.add(Gate::phase(0, 0.4));
    c.add(Gate::cphase(0, 1, 0.2));
    GateCounts g = decomposed_counts(c);
    CHECK(g.fused == 1);
    CHECK(g.rz == 3);
    Circuit d(2, 0);
    d.add(Gate::phase(1, 0.4));
    d.add(Gate::cphase(0, 1, 0.2));
    CHECK(decomposed_counts(d).rz == 4);
}

TEST_CASE("depth examples") {
    Circuit c(2, 0);
    c.add(Gate::h(0));
    c.add(Gate::h(1));
    CHECK(circuit_depth(c) == 1);
    c.add(Gate::cnot(0, 1));
    c.add(Gate::h(1));
    CHECK(circuit_depth(c) == 3);
    Circuit e(3, 0);
    e.add(Gate::global_phase(0.5));
    CHECK(circuit_depth(e) == 0);
    e.add(Gate::cphase(0, 1, 0.5));
    CHECK(circuit_depth(e) == 4);
}

TEST_CASE("empty circuit is the identity") {
    Circuit c(3, 1);
    PhaseReport r = simulate_phases(c);
    REQUIRE(r.phases.size() == 8);
    CHECK(r.diagonal);
    CHECK(r.ancilla_clean);
    for (double p : r.phases) CHECK(p == doctest::Approx(0.0));
}

TEST_CASE("phase gates produce the expected diagonal") {
    Circuit c(2, 0);
    c.add(Gate::global_phase(0.1));
    c.add(Gate::phase(0, 0.5));
    c.add(Gate::cphase(0, 1, 0.7));
    PhaseReport r = simulate_phases(c);
    CHECK(r.diagonal);
    CHECK(phase_diff(r.phases[0], 0.1) < 1e-12);
    CHECK(phase_diff(r.phases[1], 0.6) < 1e-12);
    CHECK(phase_diff(r.phases[2], 0.1) < 1e-12);
    CHECK(phase_diff(r.phases[3], 1.3) < 1e-12);
}

TEST_CASE("qft followed by its inverse is the identity") {
    Circuit c = small_qft(4);
    c.append(small_qft(4).inverse());
    PhaseReport r = simulate_phases(c);
    CHECK(r.diagonal);
    CHECK(r.max_leakage < 1e-20);
    for (double p : r.phases) CHECK(phase_diff(p, 0.0) < 1e-12);
    PhaseReport half = simulate_phases(small_qft(3));
    CHECK_FALSE(half.diagonal);
}

TEST_CASE("dirty ancilla is reported") {
    Circuit c(1, 1);
    c.add(Gate::cnot(0, 1));
    PhaseReport r = simulate_phases(c);
    CHECK_FALSE(r.ancilla_clean);
}

TEST_CASE("unitarity preserves the norm") {
    Circuit c = random_circuit(5, 80, 3);
    std::vector<std::complex<double>> psi(32);
    std::mt19937 rng(11);
    std::normal_distribution<double> N(0, 1);
    double norm = 0;
    for (auto& a : psi) {
        a = {N(rng), N(rng)};
        norm += std::norm(a);
    }
    for (auto& a : psi) a /= std::sqrt(norm);
    auto out = simulate_state(c, psi);
    double total = 0;
    for (auto& a : out) total += std::norm(a);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    auto back = simulate_state(c.inverse(), out);
    for (std::size_t i = 0; i < psi.size(); ++i) CHECK(std::abs(back[i] - psi[i]) < 1e-12);
}

TEST_CASE("diagonal phases add under concatenation") {
    Circuit a(3, 0), b(3, 0);
    a.add(Gate::phase(0, 0.3));
    a.add(Gate::mcphase({0, 1}, 2, 1.1));
    b.add(Gate::cphase(1, 2, -0.4));
    b.add(Gate::global_phase(0.25));
    Circuit ab = a;
    ab.append(b);
    PhaseReport ra = simulate_phases(a), rb = simulate_phases(b), rab = simulate_phases(ab);
    for (int j = 0; j < 8; ++j) CHECK(phase_diff(rab.phases[j], ra.phases[j] + rb.phases[j]) < 1e-12);
}

TEST_CASE("base expansion is equivalent for multi-controlled phases") {
    for (int k = 0; k <= 3; ++k) {
        Circuit c(k + 1, 0);
        std::vector<int> controls;
        for (int i = 0; i < k; ++i) controls.push_back(i);
        c.add(Gate::h(k));
        c.add(Gate::mcphase(controls, k, 0.9));
        c.add(Gate::h(k));
        c.add(Gate::mcphase(controls, k, -2.3));
        Circuit e = from_base(expand_to_base(c));
        std::vector<std::complex<double>> psi(1u << (k + 1));
        for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = std::complex<double>(1.0 + i, 0.5 * i);
        auto x = simulate_state(c, psi), y = simulate_state(e, psi);
        for (std::size_t i = 0; i < psi.size(); ++i) CHECK(std::abs(x[i] - y[i]) < 1e-9);
        BaseCircuit b = expand_to_base(c);
        long long p = 0, cx = 0;
        for (const BaseGate& g : b.gates) {
            p += g.kind == BaseGate::P;
            cx += g.kind == BaseGate::CX;
        }
        CHECK(p == 2 * mcp_rz(k));
        CHECK(cx == 2 * mcp_cnot(k));
    }
}

TEST_CASE("json round trip") {
    Circuit c = random_circuit(4, 40, 5);
    c.add(Gate::mcphase({0, 1, 2}, 3, 0.125));
    c.add(Gate::global_phase(-1.5));
    std::string text = export_circuit(c, CircuitFormat::Json);
    Circuit d = import_circuit(text, CircuitFormat::Json);
    CHECK(d == c);
    CHECK_THROWS(import_circuit("{\"width\": 2}", CircuitFormat::Json));
}

TEST_CASE("qasm export and import") {
    Circuit c = small_qft(3);
    c.add(Gate::phase(1, 0.3));
    std::string text = export_circuit(c, CircuitFormat::Qasm2);
    CHECK(text.find("OPENQASM 2.0;") == 0);
    std::size_t hs = 0;
    for (std::size_t pos = 0; (pos = text.find("\nh ", pos)) != std::string::npos; ++pos) ++hs;
    CHECK(hs == 3);
    Circuit d = import_circuit(text, CircuitFormat::Qasm2);
    auto psi = std::vector<std::complex<double>>(8);
    for (int i = 0; i < 8; ++i) psi[i] = std::complex<double>(i + 1, -i);
    auto x = simulate_state(c, psi), y = simulate_state(d, psi);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(x[i] - y[i]) < 1e-9);

    Circuit big(5, 0);
    big.add(Gate::mcphase({0, 1, 2, 3}, 4, 0.1));
    CHECK_THROWS(export_circuit(big, CircuitFormat::Qasm2));
}

TEST_CASE("sparse simulation agrees with the dense one") {
    Circuit c = random_circuit(6, 60, 9);
    PhaseReport r = simulate_phases(c, 2);
    for (int j : {0, 5, 37}) {
        std::vector<std::complex<double>> psi(64);
        psi[j] = 1.0;
        auto out = simulate_state(c, psi);
        double leak = 0;
        for (int i = 0; i < 64; ++i)
            if (i != j) leak += std::norm(out[i]);
        if (r.diagonal) CHECK(phase_diff(std::arg(out[j]), r.phases[j]) < 1e-9);
        CHECK(leak <= r.max_leakage + 1e-12);
    }
}
