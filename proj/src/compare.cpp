#include "diagphase/compare.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "diagphase/circuit.hpp"
#include "diagphase/counts.hpp"
#include "diagphase/spline.hpp"

namespace diagphase {

namespace {

constexpr std::pair<Method, const char*> kMethodNames[] = {
    {Method::WAL, "WAL"},   {Method::LIU, "LIU"},   {Method::mLIU, "mLIU"},     {Method::PPP1, "PPP1"},
    {Method::PPP2, "PPP2"}, {Method::PPP3, "PPP3"}, {Method::PPPvar, "PPPvar"}, {Method::APK, "APK"},
};

int ppp_degree(Method m) {
    switch (m) {
        case Method::PPP1: return 1;
        case Method::PPP2: return 2;
        case Method::PPP3: return 3;
        default: return 0;
    }
}

void check_shape(int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("analytic_counts: negative size");
    if (m > n) throw std::invalid_argument("analytic_counts: m exceeds n");
    if (n > 62) throw std::invalid_argument("analytic_counts: n too large");
}

}  // namespace

const char* method_name(Method m) {
    for (const auto& [k, s] : kMethodNames)
        if (k == m) return s;
    return "?";
}

Method method_from_name(std::string_view name) {
    for (const auto& [k, s] : kMethodNames) {
        std::string_view sv(s);
        if (sv.size() == name.size() &&
            std::equal(sv.begin(), sv.end(), name.begin(), [](char a, char b) { return std::tolower(a) == std::tolower(b); }))
            return k;
    }
    throw std::invalid_argument("unknown method: " + std::string(name));
}

CountRecord analytic_counts(Method method, int n, int m, long Mtilde) {
    check_shape(n, m);
    if (Mtilde < 1) throw std::invalid_argument("analytic_counts: Mtilde must be positive");
    CountRecord r;
    r.method = method;
    r.n = n;
    r.m = m;
    r.Mtilde = Mtilde;
    const long long N = n, mm = m, M = 1LL << m, f = n - m, K = Mtilde - 1;
    switch (method) {
        case Method::WAL:
            r.rz = M - 1;
            r.cnot = std::max(0LL, M - 2);
            r.depth_bound = m == 0 ? 0 : M;
            break;
        case Method::LIU:
            r.h = 4 * mm * f;
            r.rz = 2 * (M + 3 * mm * mm - 1) * f + M - 1;
            r.cnot = 2 * (M + 2 * mm * mm - 2) * f + std::max(0LL, M - 2);
            r.depth_bound = 2 * (M + 16 * mm - 16) * f + M;
            break;
        case Method::mLIU:
            r.rz = (3 * M - 3) * f + M - 1;
            r.cnot = (3 * M - 4) * f + std::max(0LL, M - 2);
            r.depth_bound = 2 * (2 * M + 16 * mm) * f + 2 * M;
            break;
        case Method::PPP1:
        case Method::PPP2:
        case Method::PPP3: {
            if (K > 0 && (m < 1 || Mtilde > M)) throw std::invalid_argument("analytic_counts: too many pieces for m");
            const int p = ppp_degree(method);
            r.p = p;
            r.ancilla = K > 0 ? 1 : 0;
            r.h = (8 * mm + 4) * K;
            const long long c2 = binomial(n, 2), c3 = binomial(n, 3);
            const long long comp_rz = 12 * mm * mm + 4 * mm + 2;
            if (p == 1) {
                r.rz = N + (3 * N + comp_rz + 1) * K;
                r.cnot = (8 * mm * mm + 2 * N) * K;
                r.depth_bound = 1 + (4 * N + 64 * mm - 32) * K;
            } else if (p == 2) {
                r.rz = N + 3 * c2 + (3 * N + 7 * c2 + comp_rz + 1) * K;
                r.cnot = N * (N - 1) + (4 * N * (N - 1) + 2 * N + 8 * mm * mm) * K;
                r.depth_bound = K * (6 * N * N + 2 * N + 64 * mm - 32) + 4 * N;
            } else {
                r.rz = N + 3 * c2 + 7 * c3 + (3 * N + 7 * c2 + 15 * c3 + comp_rz + 1) * K;
                r.cnot = N * (N - 1) + 8 * c3 + (2 * N + 4 * N * (N - 1) + 20 * c3 + 8 * mm * mm) * K;
            }
            break;
        }
        case Method::PPPvar:
            throw std::invalid_argument("analytic_counts: use analytic_counts_varying for per-piece degrees");
        case Method::APK:
            throw std::invalid_argument("analytic_counts: APK has no exact count; use apk_resources");
    }
    return r;
}

CountRecord analytic_counts_varying(int n, int m, const std::vector<int>& degrees) {
    check_shape(n, m);
    CountTriple t = ppp_counts(n, m, degrees);
    CountRecord r;
    r.method = Method::PPPvar;
    r.n = n;
    r.m = m;
    r.Mtilde = static_cast<long>(degrees.size());
    r.p = *std::max_element(degrees.begin(), degrees.end());
    r.h = t.h;
    r.rz = t.rz;
    r.cnot = t.cnot;
    r.ancilla = degrees.size() > 1 ? 1 : 0;
    return r;
}

double cc_wal(double n) { return std::exp2(n) - 2.0; }

double cc_liu(double n, int m1) {
    const double M = std::exp2(m1);
    return 2.0 * (n - m1) * (M + 2.0 * m1 * m1 - 2.0) + M - 2.0;
}

double cc_mliu(double n, int m1) {
    const double M = std::exp2(m1);
    return (n - m1) * (3.0 * M - 4.0) + M - 2.0;
}

double cc_ppp1(double n, int m1, long M1) { return (2.0 * n + 8.0 * m1 * m1) * double(M1 - 1); }

double cc_ppp2(double n, int m2, long M2) {
    return n * (n - 1) + (2.0 * n + 4.0 * n * (n - 1) + 8.0 * m2 * m2) * double(M2 - 1);
}

double cc_ppp3(double n, int m3, long M3) {
    const double cube = n * (n - 1) * (n - 2);
    return n * (n - 1) + 4.0 * cube / 3.0 +
           (2.0 * n + 4.0 * n * (n - 1) + 10.0 * cube / 3.0 + 8.0 * m3 * m3) * double(M3 - 1);
}

double crossover_g(double n, const CrossoverInputs& in) { return cc_ppp2(n, in.m2, in.M2) - cc_ppp3(n, in.m3, in.M3); }

double crossover_gbar(double n, const CrossoverInputs& in) { return cc_wal(n) - cc_ppp2(n, in.m2, in.M2); }

double crossover_gtilde(double n, const CrossoverInputs& in) { return cc_liu(n, in.m1) - cc_wal(n); }

std::pair<double, double> crossover_n_pm(const CrossoverInputs& in) {
    const double M2 = double(in.M2), M3 = double(in.M3);
    const double b = 3 * M3 + 2 * M2 - 3;
    const double den = 5 * M3 - 3;
    const double disc = b * b - den * (7 * M3 + 3 * M2 - 6) / 3.0;
    if (disc < 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        return {-inf, -inf};
    }
    const double s = std::sqrt(disc);
    return {(b - s) / den, (b + s) / den};
}

double crossover_n4(const CrossoverInputs& in) {
    const double m1 = in.m1;
    const double slope = 2.0 * (std::exp2(m1) + 2.0 * m1 * m1 - 2.0);
    // gtilde peaks where ln2 2^n equals `slope`; the second root lies beyond.
    double lo = std::max(m1, std::log2(slope / std::log(2.0)));
    double hi = lo + 1.0;
    while (crossover_gtilde(hi, in) >= 0.0) hi += 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (crossover_gtilde(mid, in) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

CrossoverInputs crossover_inputs(const Potential& V, double delta) {
    CoarseParams cp = coarse_params(V, delta);
    if (cp.norms[3] == 0.0 || cp.norms[4] == 0.0)
        throw std::invalid_argument("crossover: degenerate piece counts for a low-degree polynomial");
    CrossoverInputs in;
    in.m0 = cp.m0;
    in.m1 = cp.m1;
    PiecewisePoly p2 = algorithm1(V, delta, 2);
    PiecewisePoly p3 = algorithm1(V, delta, 3);
    in.m2 = p2.m;
    in.m3 = p3.m;
    in.M2 = p2.pieces();
    in.M3 = p3.pieces();
    return in;
}

CrossoverReport crossover_report(const CrossoverInputs& in, double delta, int n_lo, int n_hi) {
    CrossoverReport r;
    r.delta = delta;
    r.in = in;
    if (n_hi < 0) n_hi = in.m0;
    for (int n = n_lo; n <= n_hi; ++n) {
        r.ns.push_back(n);
        r.g.push_back(crossover_g(n, in));
        r.gbar.push_back(crossover_gbar(n, in));
        r.gtilde.push_back(crossover_gtilde(n, in));
    }
    std::tie(r.n_minus, r.n_plus) = crossover_n_pm(in);
    r.n4 = crossover_n4(in);
    if (r.n_plus <= in.m1)
        r.in_delta = crossover_g(in.m1, in) < 0.0;
    else
        r.in_delta = crossover_g(std::min<double>(r.n_plus, in.m0), in) < 0.0;
    r.in_delta_bar = in.m2 >= 2 && crossover_gbar(in.m1, in) < 0.0;
    r.in_delta_tilde = in.m0 > r.n4;
    return r;
}

CrossoverReport crossover_analysis(const Potential& V, double delta, int n_lo, int n_hi) {
    return crossover_report(crossover_inputs(V, delta), delta, n_lo, n_hi);
}

namespace {

std::vector<Interval> runs(const std::vector<double>& grid, const std::vector<char>& member) {
    std::vector<Interval> out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!member[i]) continue;
        if (i > 0 && member[i - 1])
            out.back().hi = grid[i];
        else
            out.push_back({grid[i], grid[i]});
    }
    return out;
}

// Runs fn(i) for i in [0, count) on `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
    if (threads <= 0) threads = default_thread_count();
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lk(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace

DeltaSets delta_sets(const Potential& V, double lo, double hi, int per_decade) {
    if (!(lo > 0.0 && hi > lo) || per_decade < 1) throw std::invalid_argument("delta_sets: bad grid");
    DeltaSets s;
    const double a = std::log10(lo), b = std::log10(hi);
    const int steps = static_cast<int>(std::ceil((b - a) * per_decade - 1e-9));
    for (int i = 0; i <= steps; ++i) s.grid.push_back(std::pow(10.0, std::min(b, a + double(i) / per_decade)));
    std::vector<char> d(s.grid.size()), db(s.grid.size()), dt(s.grid.size());
    parallel_for(s.grid.size(), 0, [&](std::size_t i) {
        CrossoverReport r = crossover_report(crossover_inputs(V, s.grid[i]), s.grid[i], 1, 0);
        d[i] = r.in_delta;
        db[i] = r.in_delta_bar;
        dt[i] = r.in_delta_tilde;
    });
    s.delta = runs(s.grid, d);
    s.delta_bar = runs(s.grid, db);
    s.delta_tilde = runs(s.grid, dt);
    return s;
}

nlohmann::json to_json(const CrossoverReport& r) {
    nlohmann::json j;
    j["delta"] = r.delta;
    j["m0"] = r.in.m0;
    j["m1"] = r.in.m1;
    j["m2"] = r.in.m2;
    j["m3"] = r.in.m3;
    j["M2"] = r.in.M2;
    j["M3"] = r.in.M3;
    j["n"] = r.ns;
    j["g"] = r.g;
    j["gbar"] = r.gbar;
    j["gtilde"] = r.gtilde;
    auto finite = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    j["n_minus"] = finite(r.n_minus);
    j["n_plus"] = finite(r.n_plus);
    j["n4"] = r.n4;
    j["in_delta"] = r.in_delta;
    j["in_delta_bar"] = r.in_delta_bar;
    j["in_delta_tilde"] = r.in_delta_tilde;
    return j;
}

nlohmann::json to_json(const DeltaSets& s) {
    auto iv = [](const std::vector<Interval>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const Interval& i : v) a.push_back({i.lo, i.hi});
        return a;
    };
    return {{"grid_points", s.grid.size()},
            {"delta", iv(s.delta)},
            {"delta_bar", iv(s.delta_bar)},
            {"delta_tilde", iv(s.delta_tilde)}};
}

Selection select_method(const Potential& V, int n, double delta, const SelectOptions& opt) {
    if (n < 0) throw std::invalid_argument("select_method: negative n");
    CoarseParams cp = coarse_params(V, delta);
    Selection s;
    s.n_effective = std::min(n, cp.m0);
    const int ne = s.n_effective;

    s.table.push_back(analytic_counts(Method::WAL, ne, ne));
    if (ne > cp.m1) {
        bool periodic = opt.periodic.value_or(std::abs(V.value(V.length()) - V.value(0.0)) <=
                                              1e-12 * std::max(1.0, std::abs(V.value(0.0))));
        s.table.push_back(analytic_counts(periodic ? Method::LIU : Method::mLIU, ne, cp.m1));
    }
    PiecewisePoly p2 = algorithm1(V, delta, 2);
    if (p2.m <= ne || p2.pieces() == 1) s.table.push_back(analytic_counts(Method::PPP2, ne, std::min(p2.m, ne), p2.pieces()));

    auto better = [](const CountRecord& a, const CountRecord& b) {
        if (a.cnot != b.cnot) return a.cnot < b.cnot;
        if (a.ancilla != b.ancilla) return a.ancilla < b.ancilla;
        return a.depth_bound.value_or(std::numeric_limits<long long>::max()) <
               b.depth_bound.value_or(std::numeric_limits<long long>::max());
    };
    s.predicted = s.table.front();
    for (const CountRecord& r : s.table)
        if (better(r, s.predicted)) s.predicted = r;
    s.method = s.predicted.method;
    return s;
}

ApkResources apk_widths(const std::vector<double>& coeff_max, double L, double delta, double norm0, double c_p) {
    if (coeff_max.empty()) throw std::invalid_argument("apk: no coefficients");
    if (!(delta > 0.0) || !(c_p > 0.0)) throw std::invalid_argument("apk: delta and c_p must be positive");
    ApkResources r;
    r.p = static_cast<int>(coeff_max.size()) - 1;
    double err = 1.0, range = 0.0, Lq = 1.0;
    for (int q = 0; q <= r.p; ++q) {
        if (q > 0) err += (coeff_max[q] + 1.0) * Lq;
        range += coeff_max[q] * Lq;
        Lq *= L;
    }
    const int frac = static_cast<int>(std::ceil(std::log2(c_p * err / delta)));
    const int whole = range > 0.0 ? static_cast<int>(std::ceil(std::log2(range))) : 0;
    r.b_dec = 1 + std::max(0, frac);
    r.b_tot = r.b_dec + std::max(0, whole);
    const double kick = norm0 > 0.0 ? std::ceil(std::log2(8.0 * std::numbers::pi * norm0 / delta)) : 0.0;
    r.b_ext = std::max(0, r.b_dec - r.b_tot + static_cast<int>(kick));
    return r;
}

int apk_linear_btot(double L, double norm0, double norm1, double delta) {
    auto clog = [](double x) { return x > 0.0 ? static_cast<int>(std::ceil(std::log2(x))) : 0; };
    return 1 + clog(L * norm1 + norm0) + clog(1.0 + L + L * norm1) + clog(1.0 / delta);
}

void apk_orders(ApkResources& r, int n, double delta) {
    const double p = r.p, lg = std::max(0.0, std::log2(1.0 / delta));
    r.toffoli_order = (n + p) * std::pow(delta, -1.0 / (p + 1.0)) + p * (p + lg) * (p + lg);
    r.clifford_order = r.toffoli_order;
    r.phase_order = lg * lg;
    r.ancilla_order = 1.0 + p * (p + lg);
}

ApkResources apk_resources(const Potential& V, int p, double delta, int n, double c_p) {
    if (p < 1 || p > 3) throw std::invalid_argument("apk: p must be 1, 2 or 3");
    PiecewisePoly pp = algorithm1(V, delta, p);
    std::vector<double> amax(p + 1, 0.0);
    for (const auto& c : pp.coeffs)
        for (std::size_t q = 0; q < c.size() && q <= std::size_t(p); ++q) amax[q] = std::max(amax[q], std::abs(c[q]));
    ApkResources r = apk_widths(amax, V.length(), delta, global_norms(V)[0], c_p);
    apk_orders(r, n, delta);
    return r;
}

std::vector<SweepRow> sweep_counts(const Potential& V, const std::vector<double>& deltas, const SweepOptions& opt) {
    std::vector<std::vector<SweepRow>> per(deltas.size());
    parallel_for(deltas.size(), opt.threads, [&](std::size_t i) {
        const double delta = deltas[i];
        CoarseParams cp = coarse_params(V, delta);
        std::array<std::optional<PiecewisePoly>, 4> pp;
        auto piece = [&](int p) -> const PiecewisePoly& {
            if (!pp[p]) pp[p] = algorithm1(V, delta, p);
            return *pp[p];
        };
        int lo = cp.m1, hi = cp.m0 + 2;
        if (opt.n) lo = hi = *opt.n;
        for (int n = lo; n <= hi; ++n) {
            const int ne = opt.n ? n : std::min(n, cp.m0);
            for (Method meth : opt.methods) {
                std::optional<CountRecord> rec;
                switch (meth) {
                    case Method::WAL: rec = analytic_counts(meth, ne, std::min(ne, cp.m0)); break;
                    case Method::LIU:
                    case Method::mLIU: rec = analytic_counts(meth, ne, std::min(cp.m1, ne)); break;
                    case Method::PPP1:
                    case Method::PPP2:
                    case Method::PPP3: {
                        const PiecewisePoly& q = piece(ppp_degree(meth));
                        if (q.m <= ne) rec = analytic_counts(meth, ne, q.m, q.pieces());
                        break;
                    }
                    case Method::PPPvar: {
                        if (ne < 2) break;
                        Alg2Result a = algorithm2(V, delta, ne);
                        rec = analytic_counts_varying(ne, a.pp.m, a.pp.degrees);
                        break;
                    }
                    case Method::APK: break;
                }
                if (rec) per[i].push_back({delta, n, cp.m0, cp.m1, *rec});
            }
        }
    });
    std::vector<SweepRow> rows;
    for (auto& v : per) rows.insert(rows.end(), v.begin(), v.end());
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "delta,n,method,cnot,rz,h,depth_bound,ancilla,m,M_tilde,m0,m1\n";
    for (const SweepRow& r : rows) {
        out << r.delta << ',' << r.n << ',' << method_name(r.rec.method) << ',' << r.rec.cnot << ',' << r.rec.rz << ','
            << r.rec.h << ',';
        if (r.rec.depth_bound) out << *r.rec.depth_bound;
        out << ',' << r.rec.ancilla << ',' << r.rec.m << ',' << r.rec.Mtilde << ',' << r.m0 << ',' << r.m1 << '\n';
    }
}

}  // namespace diagphase
