#pragma once

#include <vector>

namespace diagphase {

// Decomposed {H, Rz, CNOT} tallies from closed forms.
struct CountTriple {
    long long h = 0, rz = 0, cnot = 0;
    CountTriple& operator+=(const CountTriple& o) {
        h += o.h;
        rz += o.rz;
        cnot += o.cnot;
        return *this;
    }
    CountTriple operator*(long long k) const { return {h * k, rz * k, cnot * k}; }
    bool operator==(const CountTriple&) const = default;
};

long long binomial(int n, int k);

// Degree-p polynomial phase gate on n qubits: every subset of size s <= min(p, n) gets one
// (s-1)-controlled phase, or s-controlled when controlled by an ancilla (plus the ancilla phase).
CountTriple poly_phase_counts(int n, int p, bool controlled);

// One comparator on an m-qubit register plus its flag qubit.
CountTriple comparator_counts(int m);

// Increment on m qubits; the controlled form uses m^2 controlled phases.
CountTriple increment_counts(int m, bool controlled);

// Walsh diagonal on m qubits (2^m - 1 Rz, 2^m - 2 CNOT).
CountTriple walsh_counts(int m);

// Piecewise polynomial phase with per-piece degrees on n qubits, knots on m qubits.
// Piece l > 0 costs a controlled difference of degree max(p_l, p_{l-1}) and two comparators.
CountTriple ppp_counts(int n, int m, const std::vector<int>& degrees);

}  // namespace diagphase
