#pragma once

#include <optional>
#include <vector>

#include "diagphase/circuit.hpp"
#include "diagphase/potential.hpp"

namespace diagphase {

struct WalshSpectrum {
    int m = 0;
    // coeffs[s] = 2^-m sum_j (-1)^popcount(s & j) values[j]
    std::vector<double> coeffs;
};

WalshSpectrum walsh_spectrum(std::vector<double> values);
std::vector<double> inverse_walsh(const WalshSpectrum& w);

// Appends gates realizing diag(e^{i phases[j]}) where bit b of j lives on qubits[b].
// With a control, the diagonal is applied only when the control is |1>.
// Minimal mode drops zero angles and cancels redundant CNOT pairs.
void append_walsh_diagonal(Circuit& c, const std::vector<double>& phases, const std::vector<int>& qubits,
                           std::optional<int> control = std::nullopt, bool minimal = false);

// Removes CNOT pairs separated only by gates commuting with them.
void cancel_cnot_pairs(std::vector<Gate>& gates);

struct WalOptions {
    std::optional<int> m;
    bool minimal = false;
};

// e^{-i V} with V sampled at the left knot of each of the 2^m coarse cells on the top m qubits.
Circuit synth_wal(const Potential& V, int n, double delta, const WalOptions& opt = {});

}  // namespace diagphase
