#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "diagphase/potential.hpp"

namespace diagphase {

// PPPvar is the degree-varying piecewise polynomial from Algorithm 2.
enum class Method { WAL, LIU, mLIU, PPP1, PPP2, PPP3, PPPvar, APK };

const char* method_name(Method m);
Method method_from_name(std::string_view name);

struct CountRecord {
    Method method = Method::WAL;
    int n = 0;
    int m = 0;
    long Mtilde = 1;
    int p = 0;
    long long h = 0, rz = 0, cnot = 0;
    std::optional<long long> depth_bound;  // no closed form for PPP3
    int ancilla = 0;
};

// Closed-form decomposed counts. WAL acts on the top m qubits; PPPk uses m knot bits and Mtilde pieces.
CountRecord analytic_counts(Method method, int n, int m, long Mtilde = 1);
// Degree-varying piecewise polynomial (per-piece degrees), no depth bound.
CountRecord analytic_counts_varying(int n, int m, const std::vector<int>& degrees);

// CNOT catalog as real functions of n, used by the crossover analysis.
double cc_wal(double n);
double cc_liu(double n, int m1);
double cc_mliu(double n, int m1);
double cc_ppp1(double n, int m1, long M1);
double cc_ppp2(double n, int m2, long M2);
double cc_ppp3(double n, int m3, long M3);

struct CrossoverInputs {
    int m0 = 0, m1 = 0, m2 = 0, m3 = 0;
    long M2 = 1, M3 = 1;
};

// g = PPP2 - PPP3, gbar = WAL - PPP2, gtilde = LIU - WAL.
double crossover_g(double n, const CrossoverInputs& in);
double crossover_gbar(double n, const CrossoverInputs& in);
double crossover_gtilde(double n, const CrossoverInputs& in);
// Local extrema of g; n_plus is -inf when g is monotone.
std::pair<double, double> crossover_n_pm(const CrossoverInputs& in);
// Second root of gtilde (the first is m1).
double crossover_n4(const CrossoverInputs& in);

struct CrossoverReport {
    double delta = 0.0;
    CrossoverInputs in;
    std::vector<int> ns;
    std::vector<double> g, gbar, gtilde;
    double n_minus = 0.0, n_plus = 0.0, n4 = 0.0;
    bool in_delta = false;      // PPP2 beats PPP3 on [m1, m0]
    bool in_delta_bar = false;  // WAL beats PPP2 on (0, m1]
    bool in_delta_tilde = false; // LIU is no worse than WAL at m0
};

CrossoverInputs crossover_inputs(const Potential& V, double delta);
CrossoverReport crossover_report(const CrossoverInputs& in, double delta, int n_lo = 1, int n_hi = -1);
// Runs Algorithm 1 for p = 2, 3. Throws when V is a polynomial of degree <= 2.
// n_hi < 0 selects m0.
CrossoverReport crossover_analysis(const Potential& V, double delta, int n_lo = 1, int n_hi = -1);

struct Interval {
    double lo = 0.0, hi = 0.0;
};

struct DeltaSets {
    std::vector<double> grid;
    std::vector<Interval> delta, delta_bar, delta_tilde;
};

// Membership on a log grid; each run of member grid points becomes one interval.
DeltaSets delta_sets(const Potential& V, double lo = 1e-9, double hi = 0.1, int per_decade = 40);

nlohmann::json to_json(const CrossoverReport& r);
nlohmann::json to_json(const DeltaSets& s);

struct SelectOptions {
    // Unset: LIU when V(0) = V(L), mLIU otherwise.
    std::optional<bool> periodic;
};

struct Selection {
    Method method = Method::WAL;
    int n_effective = 0;
    CountRecord predicted;
    std::vector<CountRecord> table;
};

// Least decomposed CNOT among WAL, LIU/mLIU and PPP with p = 2, evaluated on the top
// min(n, m0) qubits. Ties go to fewer ancillas, then to the smaller depth bound.
Selection select_method(const Potential& V, int n, double delta, const SelectOptions& opt = {});

struct ApkResources {
    int p = 0;
    int b_dec = 0, b_tot = 0, b_ext = 0;
    // Unit-constant asymptotic expressions; order of magnitude only.
    double toffoli_order = 0.0, clifford_order = 0.0, phase_order = 0.0, ancilla_order = 0.0;
};

// Register widths from the maxima |a_q|_inf of the piecewise coefficients (q = 0..p).
ApkResources apk_widths(const std::vector<double>& coeff_max, double L, double delta, double norm0, double c_p = 1.0);
// Closed-form p = 1 width bound from sup norms of V and V'.
int apk_linear_btot(double L, double norm0, double norm1, double delta);
void apk_orders(ApkResources& r, int n, double delta);
ApkResources apk_resources(const Potential& V, int p, double delta, int n, double c_p = 1.0);

struct SweepRow {
    double delta = 0.0;
    int n = 0;  // grid parameter of the row
    int m0 = 0, m1 = 0;
    CountRecord rec;
};

struct SweepOptions {
    std::vector<Method> methods = {Method::WAL, Method::LIU, Method::mLIU, Method::PPP1, Method::PPP2, Method::PPP3};
    // Unset: n in m1..m0+2, with counts taken at min(n, m0).
    // Set: that single n, used as given; WAL still acts on the top min(n, m0) qubits.
    std::optional<int> n;
    int threads = 0;
};

std::vector<SweepRow> sweep_counts(const Potential& V, const std::vector<double>& deltas, const SweepOptions& opt = {});
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace diagphase
