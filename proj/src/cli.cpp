#include "diagphase/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "diagphase/circuit.hpp"
#include "diagphase/compare.hpp"
#include "diagphase/hamsim.hpp"
#include "diagphase/liu.hpp"
#include "diagphase/pairing.hpp"
#include "diagphase/potential.hpp"
#include "diagphase/ppp.hpp"
#include "diagphase/spline.hpp"
#include "diagphase/walsh.hpp"

namespace diagphase {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PotentialFlags {
    std::vector<double> coulomb, osc, poly;
    std::string expr, csv;
    std::optional<double> L;

    void attach(CLI::App* app) {
        app->add_option("--coulomb", coulomb, "A,a2,L: A / sqrt(a2 + (x - L/2)^2)")->delimiter(',')->expected(3);
        app->add_option("--osc", osc, "A,a,omega,L: A exp(-a x^2) cos(omega x)")->delimiter(',')->expected(4);
        app->add_option("--poly", poly, "c0,c1,...: polynomial coefficients (needs --L)")->delimiter(',');
        app->add_option("--expr", expr, "expression in x (needs --L)");
        app->add_option("--csv", csv, "two-column x,V samples");
        app->add_option("--L", L, "domain length for --expr and --poly");
    }

    Potential build() const {
        int sources = !coulomb.empty() + !osc.empty() + !poly.empty() + !expr.empty() + !csv.empty();
        if (sources != 1) throw UsageError("give exactly one of --coulomb, --osc, --poly, --expr, --csv");
        if (!coulomb.empty()) return Potential::coulomb(coulomb[0], coulomb[1], coulomb[2]);
        if (!osc.empty()) return Potential::damped_osc(osc[0], osc[1], osc[2], osc[3]);
        if (!csv.empty()) return Potential::from_csv(csv);
        if (!L) throw UsageError("--expr and --poly need --L");
        if (!poly.empty()) return Potential::polynomial(poly, *L);
        return Potential::from_expr(parse_expression(expr), *L);
    }
};

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double wrap_diff(double a, double b) { return std::abs(std::remainder(a - b, 2 * std::numbers::pi)); }

struct SynthFlags {
    int n = 0;
    double delta = 1e-2;
    std::string method = "ppp";
    int degree = 2;
    bool varying = false;
    std::optional<int> m;
    bool minimal = false;

    void attach(CLI::App* app) {
        app->add_option("--n", n, "grid qubits")->required();
        app->add_option("--delta", delta, "target precision");
        app->add_option("--method", method, "wal, liu, mliu or ppp");
        app->add_option("--degree", degree, "ppp polynomial degree (1-3)");
        app->add_flag("--varying", varying, "ppp with per-piece degrees (Algorithm 2)");
        app->add_option("--m", m, "coarse qubit count override for wal/liu/mliu");
        app->add_flag("--minimal", minimal, "drop zero-angle gates and cancel CNOT pairs");
    }

    Circuit build(const Potential& V, std::ostream& log) const {
        const std::string meth = lower(method);
        if (meth == "wal") return synth_wal(V, n, delta, WalOptions{m, minimal});
        if (meth == "liu") return synth_liu(V, n, delta, LiuOptions{m, minimal});
        if (meth == "mliu") return synth_mliu(V, n, delta, LiuOptions{m, minimal});
        if (meth == "ppp") {
            PiecewisePoly pp;
            if (varying) {
                pp = algorithm2(V, delta, n).pp;
            } else {
                if (degree < 1 || degree > 3) throw UsageError("--degree must be 1, 2 or 3");
                pp = algorithm1(V, delta, degree);
            }
            log << "ppp: m = " << pp.m << ", pieces = " << pp.pieces() << '\n';
            if (pp.m > n) throw UsageError("knot lattice (m = " + std::to_string(pp.m) + ") finer than the grid");
            return synth_ppp(pp, n, minimal);
        }
        throw UsageError("unknown method: " + method);
    }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

int cmd_params(const PotentialFlags& pf, double delta, std::optional<int> degree, const std::string& format,
               std::ostream& out) {
    Potential V = pf.build();
    CoarseParams cp = coarse_params(V, delta);
    nlohmann::json j = {{"delta", delta}, {"m0", cp.m0}, {"m1", cp.m1}};
    for (int p = 1; p <= 3; ++p) {
        if (degree && *degree != p) continue;
        j["m_" + std::to_string(p)] = cp.m_p[p];
        j["Mhat_" + std::to_string(p)] = cp.Mhat_p[p];
    }
    if (format == "json") {
        out << j.dump(2) << '\n';
        return 0;
    }
    out << "m0 = " << cp.m0 << '\n' << "m1 = " << cp.m1 << '\n';
    for (int p = 1; p <= 3; ++p) {
        if (degree && *degree != p) continue;
        out << "m_" << p << " = " << cp.m_p[p] << '\n' << "Mhat_" << p << " = " << cp.Mhat_p[p] << '\n';
    }
    return 0;
}

int cmd_verify(const PotentialFlags& pf, const SynthFlags& sf, const std::string& format, std::ostream& out) {
    Potential V = pf.build();
    std::ostringstream log;
    Circuit c = sf.build(V, log);
    if (c.width() > kMaxSimWidth)
        throw UsageError("verification is limited to " + std::to_string(kMaxSimWidth) + " qubits (circuit has " +
                         std::to_string(c.width()) + ")");
    PhaseReport r = simulate_phases(c);
    double worst = 0.0;
    const double dx = V.length() / std::ldexp(1.0, sf.n);
    for (std::size_t j = 0; j < r.phases.size(); ++j)
        worst = std::max(worst, wrap_diff(r.phases[j], -V.value(double(j) * dx)));
    const bool ok = r.diagonal && r.ancilla_clean && worst <= sf.delta;
    if (format == "json") {
        out << nlohmann::json{{"max_error", worst},
                              {"delta", sf.delta},
                              {"diagonal", r.diagonal},
                              {"ancilla_clean", r.ancilla_clean},
                              {"width", c.width()},
                              {"ok", ok}}
                   .dump(2)
            << '\n';
    } else {
        out << log.str() << "width = " << c.width() << '\n'
            << "max |phase + V| = " << std::setprecision(6) << worst << " (delta " << sf.delta << ")\n"
            << "diagonal = " << (r.diagonal ? "yes" : "no") << '\n'
            << "ancilla clean = " << (r.ancilla_clean ? "yes" : "no") << '\n'
            << (ok ? "PASS" : "FAIL") << '\n';
    }
    return ok ? 0 : 2;
}

struct CountRow {
    std::string name;
    CountRecord analytic;
    std::optional<GateCounts> built;
};

int cmd_counts(const PotentialFlags& pf, int n, double delta, bool crossover, std::vector<double> scan, bool varying,
               const std::string& format, std::ostream& out) {
    Potential V = pf.build();
    if (crossover) {
        nlohmann::json j = to_json(crossover_analysis(V, delta));
        if (!scan.empty()) {
            if (scan.size() != 3) throw UsageError("--scan takes lo,hi,points_per_decade");
            j["sets"] = to_json(delta_sets(V, scan[0], scan[1], static_cast<int>(scan[2])));
        }
        out << j.dump(2) << '\n';
        return 0;
    }
    CoarseParams cp = coarse_params(V, delta);
    const bool build = n <= 24;
    std::vector<CountRow> rows;
    const int mw = std::min(n, cp.m0);
    rows.push_back({"WAL", analytic_counts(Method::WAL, n, mw), std::nullopt});
    if (build) rows.back().built = decomposed_counts(synth_wal(V, n, delta, WalOptions{mw, false}));
    const int m1 = std::min(std::max(cp.m1, 1), n);
    rows.push_back({"LIU", analytic_counts(Method::LIU, n, m1), std::nullopt});
    if (build) rows.back().built = decomposed_counts(synth_liu(V, n, delta, LiuOptions{m1, false}));
    rows.push_back({"mLIU", analytic_counts(Method::mLIU, n, m1), std::nullopt});
    if (build) rows.back().built = decomposed_counts(synth_mliu(V, n, delta, LiuOptions{m1, false}));
    for (int p = 1; p <= 3; ++p) {
        PiecewisePoly pp = algorithm1(V, delta, p);
        if (pp.m > n) continue;
        Method meth = p == 1 ? Method::PPP1 : p == 2 ? Method::PPP2 : Method::PPP3;
        rows.push_back({method_name(meth), analytic_counts(meth, n, pp.m, pp.pieces()), std::nullopt});
        if (build) rows.back().built = decomposed_counts(synth_ppp(pp, n));
    }
    if (varying && n >= 2) {
        Alg2Result a = algorithm2(V, delta, n);
        rows.push_back({"PPPvar", analytic_counts_varying(n, a.pp.m, a.pp.degrees), std::nullopt});
        if (build) rows.back().built = decomposed_counts(synth_ppp(a.pp, n));
    }
    Selection sel = select_method(V, n, delta);

    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const CountRow& r : rows) {
            nlohmann::json j = {{"method", r.name}, {"m", r.analytic.m}, {"M_tilde", r.analytic.Mtilde},
                                {"analytic", {{"h", r.analytic.h}, {"rz", r.analytic.rz}, {"cnot", r.analytic.cnot}}}};
            j["depth_bound"] = r.analytic.depth_bound ? nlohmann::json(*r.analytic.depth_bound) : nlohmann::json(nullptr);
            if (r.built)
                j["built"] = {{"h", r.built->dec_h}, {"rz", r.built->rz}, {"cnot", r.built->dec_cnot}, {"depth", r.built->depth}};
            arr.push_back(j);
        }
        out << nlohmann::json{{"n", n}, {"delta", delta}, {"m0", cp.m0}, {"m1", cp.m1}, {"rows", arr},
                              {"selected", method_name(sel.method)}, {"n_effective", sel.n_effective}}
                   .dump(2)
            << '\n';
        return 0;
    }
    out << "n = " << n << ", delta = " << delta << ", m0 = " << cp.m0 << ", m1 = " << cp.m1 << '\n';
    out << std::left << std::setw(8) << "method" << std::right << std::setw(4) << "m" << std::setw(7) << "M" << std::setw(12)
        << "cnot" << std::setw(12) << "cnot(b)" << std::setw(12) << "rz" << std::setw(12) << "rz(b)" << std::setw(10)
        << "h" << std::setw(10) << "h(b)" << std::setw(12) << "depth<=" << std::setw(12) << "depth(b)" << '\n';
    auto cell = [&](std::optional<long long> v, int w) {
        if (v)
            out << std::setw(w) << *v;
        else
            out << std::setw(w) << "-";
    };
    for (const CountRow& r : rows) {
        out << std::left << std::setw(8) << r.name << std::right << std::setw(4) << r.analytic.m << std::setw(7)
            << r.analytic.Mtilde;
        auto b = [&](long long GateCounts::*f) -> std::optional<long long> {
            if (!r.built) return std::nullopt;
            return (*r.built).*f;
        };
        cell(r.analytic.cnot, 12);
        cell(b(&GateCounts::dec_cnot), 12);
        cell(r.analytic.rz, 12);
        cell(b(&GateCounts::rz), 12);
        cell(r.analytic.h, 10);
        cell(b(&GateCounts::dec_h), 10);
        cell(r.analytic.depth_bound, 12);
        cell(b(&GateCounts::depth), 12);
        out << '\n';
    }
    out << "selected: " << method_name(sel.method) << " (effective n = " << sel.n_effective
        << ", cnot = " << sel.predicted.cnot << ")\n";
    return 0;
}

int cmd_estimate(const std::string& config, SystemConfig cfg, const std::string& variant, const std::string& format,
                 std::ostream& out) {
    nlohmann::json j = nlohmann::json::object();
    if (!config.empty()) {
        std::ifstream f(config);
        if (!f) throw UsageError("cannot read " + config);
        try {
            j = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("bad config: ") + e.what());
        }
        cfg = system_config_from_json(j);
    }
    if (!variant.empty()) cfg.variant = variant_from_name(variant);
    auto [en, ee] = interaction_potentials(j, cfg);
    ResourceEstimate r = hamsim_estimate(cfg, en, ee);
    if (!j.contains("v_en") || !j.contains("v_ee")) r.notes.push_back("default interactions: modified Coulomb with a2 = dx^2");
    if (format == "json") {
        out << nlohmann::json{{"config", to_json(cfg)}, {"estimate", to_json(r)}}.dump(2) << '\n';
        return 0;
    }
    out << std::left << std::setw(18) << "variant" << std::setw(14) << "gate count" << std::setw(14) << "depth"
        << std::setw(10) << "ancilla" << "qubits\n";
    out << std::setw(18) << variant_name(cfg.variant) << std::setw(14) << r.gate_total << std::setw(14) << r.depth_total
        << std::setw(10) << r.n_anc << r.total_qubits << '\n';
    out << "K = " << r.K << ", delta = " << r.delta_interaction << ", n_dis = " << r.n_dis << '\n';
    out << "electron-nucleus: " << method_name(r.en.rec.method) << " m = " << r.en.rec.m << " M = " << r.en.rec.Mtilde
        << " gates = " << r.en.gates << '\n';
    out << "electron-electron: " << method_name(r.ee.rec.method) << " m = " << r.ee.rec.m << " M = " << r.ee.rec.Mtilde
        << " gates = " << r.ee.gates << '\n';
    for (const std::string& note : r.notes) out << "note: " << note << '\n';
    return 0;
}

int cmd_schedule(int N, const std::string& format, std::ostream& out) {
    Schedule s = pairing_schedule(N);
    PairingCheck c = verify_pairing(s);
    if (format == "json") {
        out << nlohmann::json{{"N", N}, {"sets", to_json(s)}, {"cover_ok", c.cover_ok}, {"disjoint_ok", c.disjoint_ok},
                              {"no_reuse_ok", c.no_reuse_ok}}
                   .dump()
            << '\n';
        return 0;
    }
    for (std::size_t k = 0; k < s.sets.size(); ++k) {
        out << "[" << k + 1 << "]";
        for (auto [a, b] : s.sets[k]) out << " (" << a << "," << b << ")";
        out << '\n';
    }
    out << "cover " << (c.cover_ok ? "ok" : "FAIL") << ", disjoint " << (c.disjoint_ok ? "ok" : "FAIL") << ", no reuse "
        << (c.no_reuse_ok ? "ok" : "FAIL") << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Diagonal unitary synthesis for real-space potentials", "diagphase"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "diagphase 0.1");

    PotentialFlags pf;
    SynthFlags sf;
    std::string format = "table", outpath;

    auto* params = app.add_subcommand("params", "coarse-graining parameters");
    pf.attach(params);
    double pdelta = 1e-3;
    std::optional<int> pdegree;
    params->add_option("--delta", pdelta)->required();
    params->add_option("--degree", pdegree, "restrict to one degree");
    params->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    auto* synth = app.add_subcommand("synth", "write a circuit");
    pf.attach(synth);
    sf.attach(synth);
    std::string sformat = "json";
    synth->add_option("--format", sformat)->check(CLI::IsMember({"json", "qasm"}));
    synth->add_option("--out", outpath, "output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "synthesize, simulate and compare with the potential");
    pf.attach(verify);
    sf.attach(verify);
    verify->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    auto* counts = app.add_subcommand("counts", "analytic and as-built gate counts");
    pf.attach(counts);
    int cn = 0;
    double cdelta = 1e-2;
    bool crossover = false, cvarying = false;
    std::vector<double> scan;
    counts->add_option("--n", cn)->required();
    counts->add_option("--delta", cdelta);
    counts->add_flag("--crossover", crossover, "PPP2/PPP3, WAL/PPP2 and LIU/WAL crossover report (json)");
    counts->add_option("--scan", scan, "lo,hi,points_per_decade: delta-set scan with --crossover")->delimiter(',');
    counts->add_flag("--varying", cvarying, "include Algorithm 2 pieces");
    counts->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    auto* sweep = app.add_subcommand("sweep", "CNOT/Rz/depth table over delta and n (csv)");
    pf.attach(sweep);
    std::vector<double> deltas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-6};
    std::optional<int> sn;
    std::vector<std::string> methods;
    int threads = 0;
    sweep->add_option("--delta", deltas)->delimiter(',');
    sweep->add_option("--n", sn, "single grid size (default m1..m0+2)");
    sweep->add_option("--methods", methods, "subset of WAL,LIU,mLIU,PPP1,PPP2,PPP3,PPPvar")->delimiter(',');
    sweep->add_option("--threads", threads, "worker threads (default DIAGPHASE_THREADS)");
    sweep->add_option("--out", outpath, "output file (default stdout)");

    auto* estimate = app.add_subcommand("estimate", "Hamiltonian simulation resource estimate");
    std::string config, variant;
    SystemConfig cfg;
    estimate->add_option("--config", config, "JSON system description");
    estimate->add_option("--Ne", cfg.Ne);
    estimate->add_option("--Nnuc", cfg.Nnuc);
    estimate->add_option("--d", cfg.d);
    estimate->add_option("--n", cfg.n);
    estimate->add_option("--L", cfg.L);
    estimate->add_option("--t", cfg.t);
    estimate->add_option("--eps", cfg.eps);
    estimate->add_option("--p", cfg.p);
    estimate->add_option("--C", cfg.trotter_C, "Trotter constant");
    estimate->add_option("--variant", variant, "qft_sequential, arith_sequential, qft_parallel, arith_parallel");
    estimate->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    auto* schedule = app.add_subcommand("schedule", "parallel pairing rounds");
    int N = 1;
    schedule->add_option("--N", N)->required()->check(CLI::PositiveNumber);
    schedule->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*params) return cmd_params(pf, pdelta, pdegree, format, out);
        if (*synth) {
            Potential V = pf.build();
            Circuit c = sf.build(V, err);
            emit(export_circuit(c, sformat == "qasm" ? CircuitFormat::Qasm2 : CircuitFormat::Json), outpath, out);
            return 0;
        }
        if (*verify) return cmd_verify(pf, sf, format, out);
        if (*counts) return cmd_counts(pf, cn, cdelta, crossover, scan, cvarying, format, out);
        if (*sweep) {
            Potential V = pf.build();
            SweepOptions opt;
            opt.n = sn;
            opt.threads = threads;
            if (!methods.empty()) {
                opt.methods.clear();
                for (const std::string& m : methods) opt.methods.push_back(method_from_name(m));
            }
            std::ostringstream csv;
            write_sweep_csv(csv, sweep_counts(V, deltas, opt));
            emit(csv.str(), outpath, out);
            return 0;
        }
        if (*estimate) return cmd_estimate(config, cfg, variant, format, out);
        if (*schedule) return cmd_schedule(N, format, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace diagphase
