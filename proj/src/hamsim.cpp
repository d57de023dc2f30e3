#include "diagphase/hamsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "diagphase/circuit.hpp"
#include "diagphase/expr.hpp"
#include "diagphase/liu.hpp"
#include "diagphase/pairing.hpp"
#include "diagphase/ppp.hpp"
#include "diagphase/spline.hpp"

namespace diagphase {

namespace {

constexpr std::pair<HamVariant, const char*> kVariants[] = {
    {HamVariant::QftSequential, "qft_sequential"},
    {HamVariant::ArithSequential, "arith_sequential"},
    {HamVariant::QftParallel, "qft_parallel"},
    {HamVariant::ArithParallel, "arith_parallel"},
};

int ceil_log2(int d) {
    int k = 0;
    while ((1 << k) < d) ++k;
    return k;
}

bool parallel(HamVariant v) { return v == HamVariant::QftParallel || v == HamVariant::ArithParallel; }
bool qft(HamVariant v) { return v == HamVariant::QftSequential || v == HamVariant::QftParallel; }

void check_config(const SystemConfig& c) {
    if (c.Ne < 1 || c.Nnuc < 0 || c.d < 1 || c.n < 1) throw std::invalid_argument("hamsim: bad particle counts or sizes");
    if (!(c.t > 0.0) || !(c.eps > 0.0) || !(c.L > 0.0) || !(c.trotter_C > 0.0))
        throw std::invalid_argument("hamsim: t, eps, L and C must be positive");
    if (c.p < 1 || c.p > 3) throw std::invalid_argument("hamsim: p must be 1, 2 or 3");
    if (c.dis_gate_overhead < 0) throw std::invalid_argument("hamsim: negative overhead");
}

TermCost interaction_cost(const Potential& v, double delta, double scale, int n_dis, int p, long long overhead,
                          std::vector<std::string>& notes, const char* label) {
    TermCost c;
    Potential w = v.scaled(scale);
    const double dw = delta * scale;
    const std::array<double, 5> norms = global_norms(w);
    const int m0 = coarse_exponent(w.length(), 1.0, norms[1], dw, 1);
    const int mp = coarse_exponent(w.length(), hermite_constant(p), norms[p + 1], dw, p + 1);
    const Method meth = p == 1 ? Method::PPP1 : p == 2 ? Method::PPP2 : Method::PPP3;
    const int ne = std::min(n_dis, m0);
    // Algorithm 1 picks its lattice from the same global norm, so m_p decides feasibility up front.
    if (mp <= n_dis) {
        PiecewisePoly pp = algorithm1(w, dw, p);
        c.rec = analytic_counts(meth, std::max(ne, pp.m), pp.m, pp.pieces());
    } else {
        c.rec = analytic_counts(Method::WAL, n_dis, n_dis);
        notes.push_back(std::string(label) + ": knot lattice finer than the distance register; exact WAL used");
    }
    c.gates = c.rec.h + c.rec.rz + c.rec.cnot + 2 * overhead;
    c.depth = c.rec.depth_bound.value_or(c.rec.h + c.rec.rz + c.rec.cnot) + 2 * overhead;
    return c;
}

TermCost kinetic_cost(int n) {
    Circuit c(n, 0);
    std::vector<int> q(n);
    for (int i = 0; i < n; ++i) q[i] = i;
    append_qft(c, q);
    c.append(synth_poly_phase({0.0, 0.0, 1.0}, n, 1.0));
    append_iqft(c, q);
    GateCounts g = decomposed_counts(c);
    TermCost t;
    t.rec.n = n;
    t.rec.m = n;
    t.rec.p = 2;
    t.rec.h = g.dec_h;
    t.rec.rz = g.rz;
    t.rec.cnot = g.dec_cnot;
    t.rec.depth_bound = circuit_depth(c);
    t.gates = g.dec_h + g.rz + g.dec_cnot;
    t.depth = *t.rec.depth_bound;
    return t;
}

}  // namespace

const char* variant_name(HamVariant v) {
    for (const auto& [k, s] : kVariants)
        if (k == v) return s;
    return "?";
}

HamVariant variant_from_name(std::string_view name) {
    for (const auto& [k, s] : kVariants)
        if (name == s) return k;
    throw std::invalid_argument("unsupported variant: " + std::string(name));
}

TrotterParams trotter_params(double t, double eps, double C, int Ne, int Nnuc) {
    if (!(t > 0.0) || !(eps > 0.0) || !(C > 0.0)) throw std::invalid_argument("trotter: t, eps and C must be positive");
    TrotterParams r;
    r.K = std::max(1L, static_cast<long>(std::ceil(std::sqrt(2.0 * C * t * t * t / eps))));
    const double terms = 2.0 * Ne * Nnuc + double(Ne) * (Ne - 1);
    r.delta_interaction = terms > 0.0 ? eps / (t * terms) : std::numeric_limits<double>::infinity();
    return r;
}

int distance_qubits(int n, int d) { return 2 * n + ceil_log2(d); }

int ancilla_qubits(HamVariant v, int n, int d, int Ne) {
    const int per = qft(v) ? 2 * n + 1 + ceil_log2(d) : 2 * d * n + d * (d + 1) / 2;
    return parallel(v) ? Ne * per : per;
}

int total_qubits(HamVariant v, int n, int d, int Ne) { return d * Ne * n + ancilla_qubits(v, n, d, Ne); }

double distance_domain(int n, int d, double L) {
    (void)n;
    return std::ldexp(L * L, ceil_log2(d));
}

Potential squared_distance_coulomb(double charge, double a2, double length) {
    if (!(a2 > 0.0)) throw std::invalid_argument("squared-distance coulomb: a2 must be positive");
    return Potential(
        [charge, a2](double s) {
            Jet x = Jet::variable(s);
            return charge / sqrt(x + a2);
        },
        length, "coulomb on squared distance, charge " + std::to_string(charge) + ", a2 " + std::to_string(a2));
}

ResourceEstimate hamsim_estimate(const SystemConfig& cfg, const Potential& v_en, const Potential& v_ee) {
    check_config(cfg);
    ResourceEstimate r;
    TrotterParams tp = trotter_params(cfg.t, cfg.eps, cfg.trotter_C, cfg.Ne, cfg.Nnuc);
    r.K = tp.K;
    r.delta_interaction = tp.delta_interaction;
    r.n_dis = distance_qubits(cfg.n, cfg.d);
    r.n_anc = ancilla_qubits(cfg.variant, cfg.n, cfg.d, cfg.Ne);
    r.total_qubits = total_qubits(cfg.variant, cfg.n, cfg.d, cfg.Ne);
    r.trotter_error = cfg.trotter_C * cfg.t * cfg.t * cfg.t / (double(r.K) * double(r.K));

    const double scale = cfg.t / (2.0 * double(r.K));
    const long long en_terms = (long long)cfg.Ne * cfg.Nnuc;
    const long long ee_terms = (long long)cfg.Ne * (cfg.Ne - 1) / 2;
    if (en_terms > 0)
        r.en = interaction_cost(v_en, r.delta_interaction, scale, r.n_dis, cfg.p, cfg.dis_gate_overhead, r.notes,
                                "electron-nucleus");
    if (ee_terms > 0)
        r.ee = interaction_cost(v_ee, r.delta_interaction, scale, r.n_dis, cfg.p, cfg.dis_gate_overhead, r.notes,
                                "electron-electron");
    r.kinetic = kinetic_cost(cfg.n);
    r.approximation_error =
        en_terms + ee_terms > 0 ? cfg.t * r.delta_interaction * double(en_terms + ee_terms) : 0.0;

    const long long layer_gates = en_terms * r.en.gates + ee_terms * r.ee.gates;
    long long layer_depth = 0;
    if (parallel(cfg.variant)) {
        for (const auto& set : pairing_schedule(cfg.Ne).sets) {
            long long worst = 0;
            for (auto [a, b] : set) worst = std::max(worst, a == b ? cfg.Nnuc * r.en.depth : r.ee.depth);
            layer_depth += worst;
        }
    } else {
        layer_depth = en_terms * r.en.depth + ee_terms * r.ee.depth;
    }
    const long long K = r.K;
    r.gate_total = (K + 1) * layer_gates + K * cfg.d * cfg.Ne * r.kinetic.gates;
    r.depth_total = (K + 1) * layer_depth + K * r.kinetic.depth;
    return r;
}

ResourceEstimate hamsim_estimate(const SystemConfig& cfg) {
    check_config(cfg);
    const double dx = cfg.L / std::ldexp(1.0, cfg.n);
    const double len = distance_domain(cfg.n, cfg.d, cfg.L);
    ResourceEstimate r = hamsim_estimate(cfg, squared_distance_coulomb(-1.0, dx * dx, len),
                                         squared_distance_coulomb(1.0, dx * dx, len));
    r.notes.push_back("default interactions: modified Coulomb with a2 = dx^2");
    return r;
}

SystemConfig system_config_from_json(const nlohmann::json& j) {
    SystemConfig c;
    c.Ne = j.value("Ne", c.Ne);
    c.Nnuc = j.value("Nnuc", c.Nnuc);
    c.d = j.value("d", c.d);
    c.n = j.value("n", c.n);
    c.L = j.value("L", c.L);
    c.t = j.value("t", c.t);
    c.eps = j.value("eps", c.eps);
    c.p = j.value("p", c.p);
    c.trotter_C = j.value("trotter_C", c.trotter_C);
    c.dis_gate_overhead = j.value("dis_gate_overhead", c.dis_gate_overhead);
    if (j.contains("variant")) c.variant = variant_from_name(j.at("variant").get<std::string>());
    check_config(c);
    return c;
}

std::pair<Potential, Potential> interaction_potentials(const nlohmann::json& j, const SystemConfig& cfg) {
    const double dx = cfg.L / std::ldexp(1.0, cfg.n);
    const double len = distance_domain(cfg.n, cfg.d, cfg.L);
    auto make = [&](const char* key, double charge) {
        if (!j.contains(key)) return squared_distance_coulomb(charge, dx * dx, len);
        const nlohmann::json& e = j.at(key);
        if (e.contains("expr")) return Potential::from_expr(parse_expression(e.at("expr").get<std::string>()), len);
        if (e.contains("coulomb")) {
            const nlohmann::json& c = e.at("coulomb");
            return squared_distance_coulomb(c.value("charge", charge), c.value("a2", dx * dx), len);
        }
        throw std::invalid_argument(std::string("hamsim: ") + key + " needs \"expr\" or \"coulomb\"");
    };
    return {make("v_en", -1.0), make("v_ee", 1.0)};
}

nlohmann::json to_json(const SystemConfig& c) {
    return {{"Ne", c.Ne},   {"Nnuc", c.Nnuc}, {"d", c.d}, {"n", c.n},
            {"L", c.L},     {"t", c.t},       {"eps", c.eps}, {"p", c.p},
            {"trotter_C", c.trotter_C}, {"variant", variant_name(c.variant)}, {"dis_gate_overhead", c.dis_gate_overhead}};
}

nlohmann::json to_json(const ResourceEstimate& r) {
    auto term = [](const TermCost& t) {
        nlohmann::json j = {{"n", t.rec.n},
                            {"h", t.rec.h},
                            {"rz", t.rec.rz},
                            {"cnot", t.rec.cnot},
                            {"gates", t.gates},
                            {"depth", t.depth}};
        return j;
    };
    auto interaction = [&](const TermCost& t) {
        nlohmann::json j = term(t);
        j["method"] = method_name(t.rec.method);
        j["m"] = t.rec.m;
        j["M_tilde"] = t.rec.Mtilde;
        return j;
    };
    nlohmann::json j = {{"K", r.K},
                        {"delta_interaction", std::isfinite(r.delta_interaction) ? nlohmann::json(r.delta_interaction)
                                                                                 : nlohmann::json(nullptr)},
                        {"n_dis", r.n_dis},
                        {"n_anc", r.n_anc},
                        {"total_qubits", r.total_qubits},
                        {"electron_nucleus", interaction(r.en)},
                        {"electron_electron", interaction(r.ee)},
                        {"kinetic", term(r.kinetic)},
                        {"gate_total", r.gate_total},
                        {"depth_total", r.depth_total},
                        {"trotter_error", r.trotter_error},
                        {"approximation_error", r.approximation_error},
                        {"notes", r.notes}};
    return j;
}

}  // namespace diagphase
