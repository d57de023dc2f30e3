#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "diagphase/circuit.hpp"
#include "diagphase/spline.hpp"

namespace diagphase {

// Phase angles of a polynomial phase gate over subsets of qubits (bitmask keys).
struct PolyPhaseSpec {
    int n = 0;
    double L = 0.0;
    std::vector<double> coeffs;
    double global = 0.0;                  // angle on the empty set
    std::map<std::uint64_t, double> angles; // nonempty subsets of size <= min(p, n)
};

// Expands -sum_k a_k (L/N)^k (sum_l 2^l b_l)^k over subsets; every subset up to the degree is kept.
PolyPhaseSpec poly_phase_spec(const std::vector<double>& coeffs, int n, double L);

// diag(e^{-i f(x_j)}) for the polynomial f on the n system qubits 0..n-1.
// With a control, every gate gains it as an extra control and the global part becomes a phase on it.
void append_poly_phase(Circuit& c, const std::vector<double>& coeffs, int n, double L, std::optional<int> control,
                       bool minimal = false);
Circuit synth_poly_phase(const std::vector<double>& coeffs, int n, double L, bool controlled = false,
                         bool minimal = false);

// Flag qubit `flag` (must start in |0>) becomes [j < k] for the value j held on `reg`.
void append_comparator(Circuit& c, const std::vector<int>& reg, int flag, long k);
// m-qubit register on qubits 0..m-1, flag on qubit m (an ancilla).
Circuit synth_comparator(long k, int m);

// Piecewise polynomial phase on n qubits plus one ancilla (qubit n).
Circuit synth_ppp(const PiecewisePoly& pp, int n, bool minimal = false);

}  // namespace diagphase
