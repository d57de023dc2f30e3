#pragma once

#include <optional>
#include <vector>

#include "diagphase/circuit.hpp"
#include "diagphase/potential.hpp"

namespace diagphase {

// QFT on qubits[0..m) (qubits[0] least significant) without the final swaps.
void append_qft(Circuit& c, const std::vector<int>& qubits);
void append_iqft(Circuit& c, const std::vector<int>& qubits);

// Adds `amount` (mod 2^m) in the Fourier basis; control, if given, gates the phases.
void append_fourier_add(Circuit& c, const std::vector<int>& qubits, double amount, std::optional<int> control);

// |k> -> |k+1 mod 2^m> on qubits 0..m-1. The controlled form uses qubit m as control.
Circuit synth_controlled_increment(int m, bool controlled);

enum class Wrap { Periodic, Endpoint };

struct LiuPlan {
    int n = 0;
    int m1 = 0;
    double L = 0.0;
    std::vector<double> u;  // u_k = V(k L / 2^m1), plus u_M per the wrap
    Wrap wrap = Wrap::Periodic;
};

LiuPlan liu_plan(const Potential& V, int n, double delta, std::optional<int> m1_override, Wrap wrap);

// Interpolated values u_k + k' (u_{k+1} - u_k) / 2^(n - m1) for each fine index.
std::vector<double> liu_interpolant(const LiuPlan& plan);

struct LiuOptions {
    std::optional<int> m1;
    bool minimal = false;
};

// Periodic linear interpolation with QFT-based controlled increments.
Circuit synth_liu(const Potential& V, int n, double delta, const LiuOptions& opt = {});
// Linear interpolation with directly controlled difference diagonals and u_M = V(L).
Circuit synth_mliu(const Potential& V, int n, double delta, const LiuOptions& opt = {});

}  // namespace diagphase
