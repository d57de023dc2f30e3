#include "diagphase/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "diagphase/expr.hpp"

namespace diagphase {

namespace {

constexpr double kPi = std::numbers::pi;

struct KindName {
    GateKind kind;
    const char* name;
};
constexpr KindName kKindNames[] = {
    {GateKind::GlobalPhase, "global_phase"}, {GateKind::H, "h"},         {GateKind::X, "x"},
    {GateKind::Phase, "phase"},              {GateKind::CNOT, "cnot"},   {GateKind::CPhase, "cphase"},
    {GateKind::MCPhase, "mcphase"},
};

bool has_angle(GateKind k) {
    return k == GateKind::GlobalPhase || k == GateKind::Phase || k == GateKind::CPhase || k == GateKind::MCPhase;
}

}  // namespace

const char* gate_kind_name(GateKind k) {
    for (const auto& kn : kKindNames)
        if (kn.kind == k) return kn.name;
    return "?";
}

GateKind gate_kind_from_name(std::string_view name) {
    for (const auto& kn : kKindNames)
        if (name == kn.name) return kn.kind;
    throw std::invalid_argument("unknown gate kind '" + std::string(name) + "'");
}

double normalize_angle(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("non-finite angle");
    double r = std::remainder(theta, 2.0 * kPi);  // [-pi, pi]
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

Gate Gate::global_phase(double theta) { return Gate{GateKind::GlobalPhase, {}, theta}; }
Gate Gate::h(int q) { return Gate{GateKind::H, {q}, 0.0}; }
Gate Gate::x(int q) { return Gate{GateKind::X, {q}, 0.0}; }
Gate Gate::phase(int q, double theta) { return Gate{GateKind::Phase, {q}, theta}; }
Gate Gate::cnot(int c, int t) { return Gate{GateKind::CNOT, {c, t}, 0.0}; }
Gate Gate::cphase(int c, int t, double theta) { return Gate{GateKind::CPhase, {c, t}, theta}; }
Gate Gate::mcphase(std::vector<int> controls, int t, double theta) {
    if (controls.empty()) return phase(t, theta);
    if (controls.size() == 1) return cphase(controls[0], t, theta);
    controls.push_back(t);
    return Gate{GateKind::MCPhase, std::move(controls), theta};
}

Circuit::Circuit(int n_sys, int ancillas) : width_(n_sys + ancillas), n_sys_(n_sys) {
    if (n_sys < 0 || ancillas < 0) throw std::invalid_argument("negative qubit count");
    if (width_ > 62) throw std::invalid_argument("circuit width above 62 qubits");
}

void Circuit::add(Gate g) {
    std::size_t expect = 0;
    switch (g.kind) {
    case GateKind::GlobalPhase: expect = 0; break;
    case GateKind::H:
    case GateKind::X:
    case GateKind::Phase: expect = 1; break;
    case GateKind::CNOT:
    case GateKind::CPhase: expect = 2; break;
    case GateKind::MCPhase: expect = g.qubits.size() >= 3 ? g.qubits.size() : 3; break;
    }
    if (g.qubits.size() != expect) throw std::invalid_argument(std::string("wrong qubit count for ") + gate_kind_name(g.kind));
    std::uint64_t seen = 0;
    for (int q : g.qubits) {
        if (q < 0 || q >= width_) throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
        if (seen & (1ULL << q)) throw std::invalid_argument("repeated qubit in gate");
        seen |= 1ULL << q;
    }
    if (has_angle(g.kind)) g.angle = normalize_angle(g.angle);
    else g.angle = 0.0;
    gates_.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
    if (other.width_ > width_) throw std::invalid_argument("appended circuit is wider");
    for (const Gate& g : other.gates_) add(g);
}

Circuit Circuit::inverse() const {
    Circuit inv(n_sys_, width_ - n_sys_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        Gate g = *it;
        g.angle = -g.angle;
        inv.add(std::move(g));
    }
    return inv;
}

GateCounts& GateCounts::operator+=(const GateCounts& o) {
    global_phase += o.global_phase;
    h += o.h;
    x += o.x;
    phase += o.phase;
    cnot += o.cnot;
    cphase += o.cphase;
    for (const auto& [k, v] : o.mcp) mcp[k] += v;
    fused += o.fused;
    dec_h += o.dec_h;
    rz += o.rz;
    dec_cnot += o.dec_cnot;
    decomposable = decomposable && o.decomposable;
    depth += o.depth;
    return *this;
}

long long mcp_rz(int k) { return (2LL << k) - 1; }
long long mcp_cnot(int k) { return k == 0 ? 0 : 3LL * (1LL << k) - 4; }

namespace {

// Phase gate directly followed by a CPhase controlled on the same qubit.
bool fuses_with_next(const std::vector<Gate>& g, std::size_t i) {
    return g[i].kind == GateKind::Phase && i + 1 < g.size() && g[i + 1].kind == GateKind::CPhase &&
           g[i + 1].qubits[0] == g[i].qubits[0];
}

void emit_mcp(BaseCircuit& out, const std::vector<int>& controls, int t, double theta, double control_extra) {
    const int k = static_cast<int>(controls.size());
    auto P = [&](int q, double a) { out.gates.push_back({BaseGate::P, q, 0, normalize_angle(a)}); };
    auto CX = [&](int c, int tt) { out.gates.push_back({BaseGate::CX, c, tt, 0.0}); };
    if (k == 0) {
        P(t, theta);
        return;
    }
    // theta * AND(x) = sum over nonempty subsets T of (-1)^{|T|-1} theta / 2^{k-1} * parity(T),
    // visited in Gray order with the parity kept on the wire of T's highest bit.
    const double unit = std::ldexp(theta, -(k - 1));
    P(t, std::ldexp(theta, -k));
    unsigned prev = 0;
    bool first = true;
    for (unsigned i = 1; i < (1u << k); ++i) {
        unsigned g = i ^ (i >> 1);
        int hi = std::bit_width(g) - 1;
        if (prev != 0) {
            int b = std::countr_zero(g ^ prev);
            int hi_prev = std::bit_width(prev) - 1;
            if (b == hi && hi != hi_prev) CX(controls[hi_prev], controls[b]);
            else CX(controls[b], controls[hi]);
        }
        double phi = (std::popcount(g) % 2 == 1) ? unit : -unit;
        double extra = first ? control_extra : 0.0;
        first = false;
        P(controls[hi], phi / 2.0 + extra);
        CX(controls[hi], t);
        P(t, -phi / 2.0);
        CX(controls[hi], t);
        prev = g;
    }
}

}  // namespace

BaseCircuit expand_to_base(const Circuit& c) {
    BaseCircuit out;
    out.width = c.width();
    out.n_sys = c.n_sys();
    const auto& g = c.gates();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Gate& gate = g[i];
        switch (gate.kind) {
        case GateKind::GlobalPhase: out.global_phase += gate.angle; break;
        case GateKind::H: out.gates.push_back({BaseGate::H, gate.qubits[0], 0, 0.0}); break;
        case GateKind::X: out.gates.push_back({BaseGate::X, gate.qubits[0], 0, 0.0}); break;
        case GateKind::CNOT: out.gates.push_back({BaseGate::CX, gate.qubits[0], gate.qubits[1], 0.0}); break;
        case GateKind::Phase:
            if (fuses_with_next(g, i)) {
                const Gate& next = g[i + 1];
                emit_mcp(out, {next.qubits[0]}, next.qubits[1], next.angle, gate.angle);
                ++i;
            } else {
                out.gates.push_back({BaseGate::P, gate.qubits[0], 0, gate.angle});
            }
            break;
        case GateKind::CPhase:
        case GateKind::MCPhase: {
            std::vector<int> controls(gate.qubits.begin(), gate.qubits.end() - 1);
            emit_mcp(out, controls, gate.target(), gate.angle, 0.0);
            break;
        }
        }
    }
    out.global_phase = normalize_angle(out.global_phase);
    return out;
}

Circuit from_base(const BaseCircuit& b) {
    Circuit c(b.n_sys, b.width - b.n_sys);
    if (b.global_phase != 0.0) c.add(Gate::global_phase(b.global_phase));
    for (const BaseGate& g : b.gates) {
        switch (g.kind) {
        case BaseGate::H: c.add(Gate::h(g.q0)); break;
        case BaseGate::X: c.add(Gate::x(g.q0)); break;
        case BaseGate::P: c.add(Gate::phase(g.q0, g.angle)); break;
        case BaseGate::CX: c.add(Gate::cnot(g.q0, g.q1)); break;
        }
    }
    return c;
}

GateCounts decomposed_counts(const Circuit& c) {
    GateCounts r;
    const auto& g = c.gates();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Gate& gate = g[i];
        switch (gate.kind) {
        case GateKind::GlobalPhase: ++r.global_phase; break;
        case GateKind::H: ++r.h; break;
        case GateKind::X: ++r.x; break;
        case GateKind::Phase:
            ++r.phase;
            if (fuses_with_next(g, i)) ++r.fused;
            break;
        case GateKind::CNOT: ++r.cnot; break;
        case GateKind::CPhase: ++r.cphase; break;
        case GateKind::MCPhase: ++r.mcp[gate.controls()]; break;
        }
    }
    r.dec_h = r.h;
    r.rz = r.phase - r.fused + mcp_rz(1) * r.cphase;
    r.dec_cnot = r.cnot + mcp_cnot(1) * r.cphase;
    for (const auto& [k, v] : r.mcp) {
        if (k > 3) {
            r.decomposable = false;
            continue;
        }
        r.rz += mcp_rz(k) * v;
        r.dec_cnot += mcp_cnot(k) * v;
    }
    r.depth = circuit_depth(c);
    return r;
}

long long circuit_depth(const BaseCircuit& b) {
    std::vector<long long> level(static_cast<std::size_t>(b.width), 0);
    long long depth = 0;
    for (const BaseGate& g : b.gates) {
        long long l;
        if (g.kind == BaseGate::CX) {
            l = std::max(level[g.q0], level[g.q1]) + 1;
            level[g.q0] = level[g.q1] = l;
        } else {
            l = level[g.q0] + 1;
            level[g.q0] = l;
        }
        depth = std::max(depth, l);
    }
    return depth;
}

long long circuit_depth(const Circuit& c) { return circuit_depth(expand_to_base(c)); }

int default_thread_count() {
    if (const char* env = std::getenv("DIAGPHASE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<int>(std::min(v, 256L));
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

using cplx = std::complex<double>;

struct SimOp {
    GateKind kind;
    std::uint64_t mask = 0;  // controls and target for phases; control for CNOT
    std::uint64_t tbit = 0;
    cplx ph{1.0, 0.0};
};

std::vector<SimOp> compile_ops(const Circuit& c) {
    std::vector<SimOp> ops;
    ops.reserve(c.size());
    for (const Gate& g : c.gates()) {
        SimOp op;
        op.kind = g.kind;
        switch (g.kind) {
        case GateKind::GlobalPhase: op.ph = std::polar(1.0, g.angle); break;
        case GateKind::H:
        case GateKind::X: op.tbit = 1ULL << g.qubits[0]; break;
        case GateKind::CNOT:
            op.mask = 1ULL << g.qubits[0];
            op.tbit = 1ULL << g.qubits[1];
            break;
        case GateKind::Phase:
        case GateKind::CPhase:
        case GateKind::MCPhase:
            for (int q : g.qubits) op.mask |= 1ULL << q;
            op.ph = std::polar(1.0, g.angle);
            break;
        }
        ops.push_back(op);
    }
    return ops;
}

using Entry = std::pair<std::uint64_t, cplx>;

// Dense accumulator reused across H gates: amplitudes by basis index plus the touched indices.
struct Workspace {
    std::vector<cplx> acc;
    std::vector<char> seen;
    std::vector<std::uint64_t> touched;
    explicit Workspace(int width) : acc(std::size_t{1} << width), seen(std::size_t{1} << width, 0) {}
    void add(std::uint64_t i, cplx a) {
        if (!seen[i]) {
            seen[i] = 1;
            touched.push_back(i);
        }
        acc[i] += a;
    }
};

void apply_sparse(const SimOp& op, std::vector<Entry>& st, Workspace& ws) {
    switch (op.kind) {
    case GateKind::GlobalPhase:
        for (auto& e : st) e.second *= op.ph;
        return;
    case GateKind::X:
        for (auto& e : st) e.first ^= op.tbit;
        return;
    case GateKind::CNOT:
        for (auto& e : st)
            if (e.first & op.mask) e.first ^= op.tbit;
        return;
    case GateKind::Phase:
    case GateKind::CPhase:
    case GateKind::MCPhase:
        for (auto& e : st)
            if ((e.first & op.mask) == op.mask) e.second *= op.ph;
        return;
    case GateKind::H: {
        const double s = std::numbers::sqrt2 / 2.0;
        for (const auto& [i, a] : st) {
            ws.add(i & ~op.tbit, a * s);
            ws.add(i | op.tbit, (i & op.tbit) ? -a * s : a * s);
        }
        st.clear();
        for (std::uint64_t idx : ws.touched) {
            if (std::norm(ws.acc[idx]) > 1e-26) st.emplace_back(idx, ws.acc[idx]);
            ws.acc[idx] = 0.0;
            ws.seen[idx] = 0;
        }
        ws.touched.clear();
        return;
    }
    }
}

void apply_dense(const SimOp& op, std::vector<cplx>& psi) {
    const std::uint64_t n = psi.size();
    switch (op.kind) {
    case GateKind::GlobalPhase:
        for (auto& a : psi) a *= op.ph;
        return;
    case GateKind::X:
        for (std::uint64_t i = 0; i < n; ++i)
            if (!(i & op.tbit)) std::swap(psi[i], psi[i | op.tbit]);
        return;
    case GateKind::CNOT:
        for (std::uint64_t i = 0; i < n; ++i)
            if ((i & op.mask) && !(i & op.tbit)) std::swap(psi[i], psi[i | op.tbit]);
        return;
    case GateKind::Phase:
    case GateKind::CPhase:
    case GateKind::MCPhase:
        for (std::uint64_t i = 0; i < n; ++i)
            if ((i & op.mask) == op.mask) psi[i] *= op.ph;
        return;
    case GateKind::H: {
        const double s = std::numbers::sqrt2 / 2.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (i & op.tbit) continue;
            cplx a = psi[i], b = psi[i | op.tbit];
            psi[i] = (a + b) * s;
            psi[i | op.tbit] = (a - b) * s;
        }
        return;
    }
    }
}

}  // namespace

PhaseReport simulate_phases(const Circuit& c, int threads) {
    if (c.width() > kMaxSimWidth)
        throw std::invalid_argument("simulation width " + std::to_string(c.width()) + " exceeds " +
                                    std::to_string(kMaxSimWidth) + " qubits");
    const auto ops = compile_ops(c);
    const std::uint64_t dim = 1ULL << c.n_sys();
    const std::uint64_t sys_mask = dim - 1;
    PhaseReport rep;
    rep.phases.assign(dim, 0.0);
    if (threads <= 0) threads = default_thread_count();
    threads = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), dim));

    struct Partial {
        bool diagonal = true, clean = true;
        double leak = 0.0;
    };
    std::vector<Partial> partial(static_cast<std::size_t>(threads));
    auto worker = [&](int tid) {
        std::vector<Entry> st;
        Workspace ws(c.width());
        Partial& p = partial[static_cast<std::size_t>(tid)];
        for (std::uint64_t j = static_cast<std::uint64_t>(tid); j < dim; j += static_cast<std::uint64_t>(threads)) {
            st.assign(1, Entry{j, cplx(1.0, 0.0)});
            for (const SimOp& op : ops) apply_sparse(op, st, ws);
            cplx diag = 0.0;
            double off = 0.0;
            for (const auto& [i, a] : st) {
                if (i == j) diag = a;
                else {
                    off += std::norm(a);
                    if ((i & ~sys_mask) != 0 && std::norm(a) > 1e-18) p.clean = false;
                }
            }
            double mag = std::abs(diag);
            if (mag < 1.0 - 1e-9 || mag > 1.0 + 1e-9 || off > 1e-18) p.diagonal = false;
            p.leak = std::max(p.leak, off);
            rep.phases[j] = std::arg(diag);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& p : partial) {
        rep.diagonal = rep.diagonal && p.diagonal;
        rep.ancilla_clean = rep.ancilla_clean && p.clean;
        rep.max_leakage = std::max(rep.max_leakage, p.leak);
    }
    return rep;
}

std::vector<std::complex<double>> simulate_state(const Circuit& c, std::vector<std::complex<double>> psi) {
    if (c.width() > kMaxSimWidth) throw std::invalid_argument("simulation width exceeds limit");
    if (psi.size() != (1ULL << c.width())) throw std::invalid_argument("state size does not match circuit width");
    for (const SimOp& op : compile_ops(c)) apply_dense(op, psi);
    return psi;
}

namespace {

std::string fmt_angle(double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
}

std::string export_json(const Circuit& c) {
    nlohmann::json j;
    j["width"] = c.width();
    j["n_sys"] = c.n_sys();
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate& g : c.gates()) gates.push_back({{"kind", gate_kind_name(g.kind)}, {"qubits", g.qubits}, {"angle", g.angle}});
    j["gates"] = std::move(gates);
    return j.dump(1);
}

Circuit import_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("invalid circuit json: ") + e.what());
    }
    int width = j.at("width").get<int>();
    int n_sys = j.value("n_sys", width);
    Circuit c(n_sys, width - n_sys);
    for (const auto& g : j.at("gates")) {
        Gate gate;
        gate.kind = gate_kind_from_name(g.at("kind").get<std::string>());
        gate.qubits = g.at("qubits").get<std::vector<int>>();
        gate.angle = g.value("angle", 0.0);
        c.add(std::move(gate));
    }
    return c;
}

std::string export_qasm(const Circuit& c) {
    for (const Gate& g : c.gates())
        if (g.kind == GateKind::MCPhase && g.controls() > 3)
            throw std::invalid_argument("qasm2 export supports at most 3 controls per phase gate");
    BaseCircuit b = expand_to_base(c);
    // P(theta) = e^{i theta/2} Rz(theta); the difference goes into the global phase.
    double gp = b.global_phase;
    std::ostringstream body;
    for (const BaseGate& g : b.gates) {
        switch (g.kind) {
        case BaseGate::H: body << "h q[" << g.q0 << "];\n"; break;
        case BaseGate::X: body << "x q[" << g.q0 << "];\n"; break;
        case BaseGate::P:
            body << "rz(" << fmt_angle(g.angle) << ") q[" << g.q0 << "];\n";
            gp += g.angle / 2.0;
            break;
        case BaseGate::CX: body << "cx q[" << g.q0 << "],q[" << g.q1 << "];\n"; break;
        }
    }
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    out << "// n_sys: " << c.n_sys() << "\n";
    out << "// global phase: " << fmt_angle(normalize_angle(gp)) << "\n";
    out << "qreg q[" << c.width() << "];\n" << body.str();
    return out.str();
}

int parse_qubit(const std::string& s) {
    auto l = s.find('['), r = s.find(']');
    if (l == std::string::npos || r == std::string::npos || r < l) throw std::invalid_argument("bad qubit operand '" + s + "'");
    return std::stoi(s.substr(l + 1, r - l - 1));
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Circuit import_qasm(std::string_view text) {
    std::string src(text);
    int width = -1, n_sys = -1;
    double gp = 0.0;
    std::string stripped;
    std::istringstream lines(src);
    std::string line;
    while (std::getline(lines, line)) {
        auto pos = line.find("//");
        if (pos != std::string::npos) {
            std::string comment = trim(line.substr(pos + 2));
            if (comment.rfind("n_sys:", 0) == 0) n_sys = std::stoi(comment.substr(6));
            else if (comment.rfind("global phase:", 0) == 0) gp = std::stod(comment.substr(13));
            line = line.substr(0, pos);
        }
        stripped += line + "\n";
    }
    std::vector<Gate> gates;
    std::istringstream stmts(stripped);
    std::string stmt;
    while (std::getline(stmts, stmt, ';')) {
        stmt = trim(stmt);
        if (stmt.empty() || stmt.rfind("OPENQASM", 0) == 0 || stmt.rfind("include", 0) == 0) continue;
        if (stmt.rfind("qreg", 0) == 0) {
            width = parse_qubit(stmt);
            continue;
        }
        std::string name = stmt.substr(0, stmt.find_first_of(" (\t"));
        double angle = 0.0;
        std::string rest = stmt.substr(name.size());
        if (!rest.empty() && trim(rest)[0] == '(') {
            rest = trim(rest);
            auto close = rest.find(')');
            if (close == std::string::npos) throw std::invalid_argument("unterminated parameter in '" + stmt + "'");
            angle = parse_expression(rest.substr(1, close - 1)).eval(0.0);
            rest = rest.substr(close + 1);
        }
        std::vector<int> qs;
        std::istringstream ops(rest);
        std::string operand;
        while (std::getline(ops, operand, ',')) qs.push_back(parse_qubit(trim(operand)));
        if (name == "h" && qs.size() == 1) gates.push_back(Gate::h(qs[0]));
        else if (name == "x" && qs.size() == 1) gates.push_back(Gate::x(qs[0]));
        else if ((name == "p" || name == "u1") && qs.size() == 1) gates.push_back(Gate::phase(qs[0], angle));
        else if (name == "rz" && qs.size() == 1) {
            gates.push_back(Gate::phase(qs[0], angle));
            gp -= angle / 2.0;
        } else if (name == "cx" && qs.size() == 2) gates.push_back(Gate::cnot(qs[0], qs[1]));
        else throw std::invalid_argument("unsupported qasm statement '" + stmt + "'");
    }
    if (width < 0) throw std::invalid_argument("qasm input lacks a qreg declaration");
    if (n_sys < 0 || n_sys > width) n_sys = width;
    Circuit c(n_sys, width - n_sys);
    if (std::abs(normalize_angle(gp)) > 0.0) c.add(Gate::global_phase(gp));
    for (auto& g : gates) c.add(std::move(g));
    return c;
}

}  // namespace

std::string export_circuit(const Circuit& c, CircuitFormat f) {
    return f == CircuitFormat::Json ? export_json(c) : export_qasm(c);
}

Circuit import_circuit(std::string_view text, CircuitFormat f) {
    return f == CircuitFormat::Json ? import_json(text) : import_qasm(text);
}

}  // namespace diagphase
