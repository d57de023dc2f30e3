#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "diagphase/compare.hpp"
#include "diagphase/potential.hpp"

namespace diagphase {

enum class HamVariant { QftSequential, ArithSequential, QftParallel, ArithParallel };

const char* variant_name(HamVariant v);
HamVariant variant_from_name(std::string_view name);

struct SystemConfig {
    int Ne = 1;
    int Nnuc = 0;
    int d = 3;
    int n = 8;           // qubits per dimension
    double L = 1.0;      // cell length per dimension
    double t = 1.0;
    double eps = 1e-2;
    int p = 2;
    double trotter_C = 1.0;
    HamVariant variant = HamVariant::QftSequential;
    // Extra gates per distance-register computation (applied twice per term).
    long long dis_gate_overhead = 0;
};

struct TrotterParams {
    long K = 1;
    double delta_interaction = 0.0;  // infinite when there is no interaction term
};

TrotterParams trotter_params(double t, double eps, double C, int Ne, int Nnuc);

// 2n + ceil(log2 d).
int distance_qubits(int n, int d);
// Ancillas and total qubits of the four layouts.
int ancilla_qubits(HamVariant v, int n, int d, int Ne);
int total_qubits(HamVariant v, int n, int d, int Ne);

// Length of the squared-distance domain covered by the distance register: 2^ceil(log2 d) L^2.
double distance_domain(int n, int d, double L);
// charge / sqrt(s + a2) on [0, length) in the squared distance s.
Potential squared_distance_coulomb(double charge, double a2, double length);

struct TermCost {
    CountRecord rec;
    long long gates = 0;
    long long depth = 0;
};

struct ResourceEstimate {
    long K = 1;
    double delta_interaction = 0.0;
    int n_dis = 0, n_anc = 0, total_qubits = 0;
    TermCost en, ee, kinetic;
    long long gate_total = 0, depth_total = 0;
    double trotter_error = 0.0, approximation_error = 0.0;
    std::vector<std::string> notes;
};

// v_en and v_ee are functions of the squared distance on [0, distance_domain(n, d, L)).
ResourceEstimate hamsim_estimate(const SystemConfig& cfg, const Potential& v_en, const Potential& v_ee);
// Modified Coulomb interactions with a2 = dx^2 (one lattice unit of squared distance).
ResourceEstimate hamsim_estimate(const SystemConfig& cfg);

SystemConfig system_config_from_json(const nlohmann::json& j);
// Optional "v_en" / "v_ee" entries: {"expr": "..."} in the squared distance x, or
// {"coulomb": {"charge": q, "a2": a2}}. Missing entries fall back to the modified Coulomb defaults.
std::pair<Potential, Potential> interaction_potentials(const nlohmann::json& j, const SystemConfig& cfg);
nlohmann::json to_json(const SystemConfig& c);
nlohmann::json to_json(const ResourceEstimate& r);

}  // namespace diagphase
