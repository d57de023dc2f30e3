#include "diagphase/walsh.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace diagphase {

namespace {

int log2_exact(std::size_t n) {
    if (n == 0 || !std::has_single_bit(n)) throw std::invalid_argument("walsh: length must be a power of two");
    return std::countr_zero(n);
}

void fwht(std::vector<double>& v) {
    for (std::size_t h = 1; h < v.size(); h <<= 1)
        for (std::size_t i = 0; i < v.size(); i += 2 * h)
            for (std::size_t j = i; j < i + h; ++j) {
                double a = v[j], b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
}

bool touches(const Gate& g, int q) { return std::find(g.qubits.begin(), g.qubits.end(), q) != g.qubits.end(); }

// Does g commute with CNOT(c -> t)?
bool commutes_with_cnot(const Gate& g, int c, int t) {
    switch (g.kind) {
    case GateKind::GlobalPhase: return true;
    case GateKind::Phase:
    case GateKind::CPhase:
    case GateKind::MCPhase:
        // Diagonal gates commute unless they act on the target.
        return !touches(g, t);
    case GateKind::CNOT:
        return g.qubits[0] != t && g.qubits[1] != c;
    default: return !touches(g, c) && !touches(g, t);
    }
}

}  // namespace

WalshSpectrum walsh_spectrum(std::vector<double> values) {
    WalshSpectrum w;
    w.m = log2_exact(values.size());
    fwht(values);
    double scale = 1.0 / double(values.size());
    for (double& v : values) v *= scale;
    w.coeffs = std::move(values);
    return w;
}

std::vector<double> inverse_walsh(const WalshSpectrum& w) {
    std::vector<double> v = w.coeffs;
    fwht(v);
    return v;
}

void cancel_cnot_pairs(std::vector<Gate>& gates) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < gates.size(); ++i) {
            if (gates[i].kind != GateKind::CNOT) continue;
            int c = gates[i].qubits[0], t = gates[i].qubits[1];
            for (std::size_t j = i + 1; j < gates.size(); ++j) {
                if (gates[j] == gates[i]) {
                    gates.erase(gates.begin() + j);
                    gates.erase(gates.begin() + i);
                    changed = true;
                    break;
                }
                if (!commutes_with_cnot(gates[j], c, t)) break;
            }
            if (changed) break;
        }
    }
}

void append_walsh_diagonal(Circuit& c, const std::vector<double>& phases, const std::vector<int>& qubits,
                           std::optional<int> control, bool minimal) {
    WalshSpectrum w = walsh_spectrum(phases);
    if (w.m != static_cast<int>(qubits.size())) throw std::invalid_argument("walsh: qubit list does not match length");
    const auto& a = w.coeffs;
    std::vector<Gate> out;

    // e^{i a_s w_s} = e^{i a_s} e^{-2i a_s [parity odd]}, so the global part is sum_s a_s = phases[0].
    double global = phases[0];
    if (control) {
        if (!minimal || global != 0.0) out.push_back(Gate::phase(*control, global));
    } else {
        out.push_back(Gate::global_phase(global));
    }

    auto rot = [&](int q, double theta) {
        if (minimal && theta == 0.0) return;
        out.push_back(control ? Gate::cphase(*control, q, theta) : Gate::phase(q, theta));
    };

    for (int t = w.m - 1; t >= 0; --t) {
        const std::size_t cells = std::size_t{1} << t;
        for (std::size_t i = 0; i < cells; ++i) {
            if (i > 0) out.push_back(Gate::cnot(qubits[std::countr_zero(i)], qubits[t]));
            std::size_t g = i ^ (i >> 1);
            rot(qubits[t], -2.0 * a[(std::size_t{1} << t) | g]);
        }
        if (t >= 1) out.push_back(Gate::cnot(qubits[t - 1], qubits[t]));
    }
    if (minimal) cancel_cnot_pairs(out);
    for (Gate& g : out) c.add(std::move(g));
}

Circuit synth_wal(const Potential& V, int n, double delta, const WalOptions& opt) {
    if (n < 1) throw std::invalid_argument("synth_wal: n must be >= 1");
    int m;
    if (opt.m) {
        m = std::min(*opt.m, n);
        if (m < 0) throw std::invalid_argument("synth_wal: m must be >= 0");
    } else {
        if (!(delta > 0)) throw std::invalid_argument("synth_wal: delta must be positive");
        m = std::min(coarse_params(V, delta).m0, n);
    }
    Circuit c(n, 0);
    const std::size_t M = std::size_t{1} << m;
    std::vector<double> phases(M);
    for (std::size_t k = 0; k < M; ++k) phases[k] = -V.value(double(k) * V.length() / double(M));
    std::vector<int> qubits;
    for (int b = 0; b < m; ++b) qubits.push_back(n - m + b);
    append_walsh_diagonal(c, phases, qubits, std::nullopt, opt.minimal);
    return c;
}

}  // namespace diagphase
