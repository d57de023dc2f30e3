#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace diagphase {

enum class GateKind { GlobalPhase, H, X, Phase, CNOT, CPhase, MCPhase };

const char* gate_kind_name(GateKind k);
GateKind gate_kind_from_name(std::string_view name);

// Qubit 0 is the least significant bit. For controlled gates the
// controls come first and the target is last.
struct Gate {
    GateKind kind = GateKind::GlobalPhase;
    std::vector<int> qubits;
    double angle = 0.0;

    static Gate global_phase(double theta);
    static Gate h(int q);
    static Gate x(int q);
    // diag(1, e^{i theta}) on q.
    static Gate phase(int q, double theta);
    static Gate cnot(int c, int t);
    static Gate cphase(int c, int t, double theta);
    static Gate mcphase(std::vector<int> controls, int t, double theta);

    int target() const { return qubits.back(); }
    // Number of controls of a (multi-)controlled phase.
    int controls() const { return static_cast<int>(qubits.size()) - 1; }
    bool operator==(const Gate& o) const = default;
};

// Wrap into (-pi, pi].
double normalize_angle(double theta);

class Circuit {
public:
    Circuit() = default;
    Circuit(int n_sys, int ancillas);

    int width() const { return width_; }
    int n_sys() const { return n_sys_; }
    int ancilla_count() const { return width_ - n_sys_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    // Validates qubit indices and normalizes the angle.
    void add(Gate g);
    void append(const Circuit& other);
    Circuit inverse() const;

    bool operator==(const Circuit& o) const = default;

private:
    int width_ = 0;
    int n_sys_ = 0;
    std::vector<Gate> gates_;
};

struct GateCounts {
    // Raw tallies.
    long long global_phase = 0, h = 0, x = 0, phase = 0, cnot = 0, cphase = 0;
    std::map<int, long long> mcp;  // number of controls -> count (controls >= 2)
    // Phase gates folded into the control rotation of the following CPhase.
    long long fused = 0;
    // Decomposed {H, Rz, CNOT} view. X gates are not part of it.
    long long dec_h = 0, rz = 0, dec_cnot = 0;
    // False when some MCP has more than 3 controls (left out of rz/cnot).
    bool decomposable = true;
    long long depth = 0;

    GateCounts& operator+=(const GateCounts& o);
};

// Cost of a phase gate with k controls in the decomposed view.
long long mcp_rz(int k);
long long mcp_cnot(int k);

GateCounts decomposed_counts(const Circuit& c);

// Base set {H, X, P(theta), CX} plus a global phase.
struct BaseGate {
    enum Kind { H, X, P, CX } kind;
    int q0 = 0;  // target for H/X/P, control for CX
    int q1 = 0;  // target for CX
    double angle = 0.0;
};

struct BaseCircuit {
    int width = 0;
    int n_sys = 0;
    double global_phase = 0.0;
    std::vector<BaseGate> gates;
};

BaseCircuit expand_to_base(const Circuit& c);
Circuit from_base(const BaseCircuit& b);

// ASAP layering of the base-set expansion; global phase occupies nothing.
long long circuit_depth(const Circuit& c);
long long circuit_depth(const BaseCircuit& b);

inline constexpr int kMaxSimWidth = 14;

struct PhaseReport {
    std::vector<double> phases;  // arg of the diagonal amplitude, per system basis state
    bool diagonal = true;
    bool ancilla_clean = true;
    double max_leakage = 0.0;  // largest off-diagonal probability mass
};

// Applies the circuit to |j>|0...0> for every system basis state j.
// threads <= 0 uses the DIAGPHASE_THREADS setting.
PhaseReport simulate_phases(const Circuit& c, int threads = 0);

// Dense statevector simulation.
std::vector<std::complex<double>> simulate_state(const Circuit& c, std::vector<std::complex<double>> psi);

enum class CircuitFormat { Json, Qasm2 };

std::string export_circuit(const Circuit& c, CircuitFormat f);
Circuit import_circuit(std::string_view text, CircuitFormat f);

// Worker count from DIAGPHASE_THREADS (default: hardware concurrency).
int default_thread_count();

}  // namespace diagphase
