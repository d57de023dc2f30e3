#include "diagphase/spline.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "diagphase/counts.hpp"

namespace diagphase {

namespace {

constexpr int kSafetySamples = 128;

// Coefficients of sum_k c[k] (x - x0)^k as a polynomial in x.
std::vector<double> shift_origin(const std::vector<double>& c, double x0) {
    std::vector<double> out(c.size(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        double binom = 1.0;
        double pw = 1.0;  // (-x0)^(k - i), built from i = k downwards
        for (std::size_t i = k + 1; i-- > 0;) {
            out[i] += c[k] * binom * pw;
            binom = binom * double(i) / double(k - i + 1);
            pw *= -x0;
        }
    }
    return out;
}

std::vector<double> cubic_hermite(double a, double b, double fa, double fb, double da, double db) {
    double h = b - a, slope = (fb - fa) / h;
    double c2 = (3 * slope - 2 * da - db) / h;
    double c3 = (da + db - 2 * slope) / (h * h);
    return shift_origin({fa, da, c2, c3}, a);
}

double piece_error(const PiecewisePoly& pp, const Potential& V, int l, int samples) {
    double a = pp.knot_x(l), b = pp.knot_x(l + 1);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double x = a + (b - a) * double(i) / double(samples - 1);
        worst = std::max(worst, std::abs(eval_monomial(pp.coeffs[l], x) - V.value(x)));
    }
    return worst;
}

// Clamped cubic spline through the knots: solve for knot slopes, then Hermite pieces.
void fit_cubic_spline(PiecewisePoly& pp, const Potential& V) {
    const int P = pp.pieces();
    std::vector<double> x(P + 1), y(P + 1);
    for (int i = 0; i <= P; ++i) {
        x[i] = pp.knot_x(i);
        y[i] = V.value(x[i]);
    }
    std::vector<double> s(P + 1);
    s[0] = V.derivative(x[0], 1);
    s[P] = V.derivative(x[P], 1);
    if (P >= 2) {
        // Tridiagonal system for the interior slopes s_1..s_{P-1}.
        const int K = P - 1;
        std::vector<double> lo(K), di(K), up(K), rhs(K);
        for (int r = 0; r < K; ++r) {
            int i = r + 1;
            double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
            double dl = (y[i] - y[i - 1]) / hl, dr = (y[i + 1] - y[i]) / hr;
            lo[r] = hr;
            di[r] = 2 * (hl + hr);
            up[r] = hl;
            rhs[r] = 3 * (hr * dl + hl * dr);
        }
        rhs[0] -= lo[0] * s[0];
        rhs[K - 1] -= up[K - 1] * s[P];
        for (int r = 1; r < K; ++r) {
            double w = lo[r] / di[r - 1];
            di[r] -= w * up[r - 1];
            rhs[r] -= w * rhs[r - 1];
        }
        s[K] = rhs[K - 1] / di[K - 1];
        for (int r = K - 2; r >= 0; --r) s[r + 1] = (rhs[r] - up[r] * s[r + 2]) / di[r];
    }
    pp.coeffs.assign(P, {});
    for (int l = 0; l < P; ++l) pp.coeffs[l] = cubic_hermite(x[l], x[l + 1], y[l], y[l + 1], s[l], s[l + 1]);
}

void fit_pieces(PiecewisePoly& pp, const Potential& V, QuadSide side, bool cubic_spline) {
    if (cubic_spline) {
        fit_cubic_spline(pp, V);
        return;
    }
    pp.coeffs.assign(pp.pieces(), {});
    for (int l = 0; l < pp.pieces(); ++l)
        pp.coeffs[l] = fit_hermite_piece(V, pp.knot_x(l), pp.knot_x(l + 1), pp.degrees[l], side);
}

// Bisects pieces whose measured error exceeds delta until none can be split further.
void refine(PiecewisePoly& pp, const Potential& V, double delta, QuadSide side, bool cubic_spline) {
    for (;;) {
        bool split = false;
        for (int l = 0; l < pp.pieces(); ++l) {
            if (pp.knots[l + 1] - pp.knots[l] < 2) continue;
            if (piece_error(pp, V, l, kSafetySamples) <= delta) continue;
            long mid = (pp.knots[l] + pp.knots[l + 1]) / 2;
            pp.knots.insert(pp.knots.begin() + l + 1, mid);
            pp.degrees.insert(pp.degrees.begin() + l, pp.degrees[l]);
            pp.coeffs.insert(pp.coeffs.begin() + l, std::vector<double>{});
            if (!cubic_spline) {
                pp.coeffs[l] = fit_hermite_piece(V, pp.knot_x(l), pp.knot_x(l + 1), pp.degrees[l], side);
                pp.coeffs[l + 1] = fit_hermite_piece(V, pp.knot_x(l + 1), pp.knot_x(l + 2), pp.degrees[l + 1], side);
            }
            split = true;
            break;
        }
        if (!split) return;
        if (cubic_spline) fit_cubic_spline(pp, V);
    }
}

// Greedy left-to-right merge of lattice cells while C * max|V^(p+1)| * width^(p+1) <= delta.
// cell_deg gives the degree of each cell; runs never cross a degree change.
void greedy_merge(const std::vector<double>* const* cellmax, const std::vector<int>& cell_deg, double h, double delta,
                  const double* constants, std::vector<long>& knots, std::vector<int>& degrees) {
    const long M = static_cast<long>(cell_deg.size());
    knots.assign(1, 0);
    degrees.clear();
    long j1 = 0;
    int p = cell_deg[0];
    double cur = (*cellmax[p])[0];
    for (long j2 = 2; j2 <= M; ++j2) {
        long cell = j2 - 1;
        if (cell_deg[cell] == p) {
            double c2 = std::max(cur, (*cellmax[p])[cell]);
            if (constants[p] * c2 * std::pow(double(j2 - j1) * h, p + 1) <= delta) {
                cur = c2;
                continue;
            }
        }
        knots.push_back(cell);
        degrees.push_back(p);
        j1 = cell;
        p = cell_deg[cell];
        cur = (*cellmax[p])[cell];
    }
    knots.push_back(M);
    degrees.push_back(p);
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

double eval_monomial(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) r = r * x + c[k];
    return r;
}

double PiecewisePoly::knot_x(int l) const { return double(knots.at(l)) * L / std::ldexp(1.0, m); }

int PiecewisePoly::piece_index(double x) const {
    double t = x / L * std::ldexp(1.0, m);
    auto it = std::upper_bound(knots.begin(), knots.end(), t, [](double v, long k) { return v < double(k); });
    int l = static_cast<int>(it - knots.begin()) - 1;
    return std::clamp(l, 0, pieces() - 1);
}

int PiecewisePoly::piece_of_grid(long long j, int n) const {
    if (m > n) throw std::invalid_argument("piece_of_grid: lattice finer than the grid");
    long top = static_cast<long>(j >> (n - m));
    auto it = std::upper_bound(knots.begin(), knots.end(), top);
    return std::clamp(static_cast<int>(it - knots.begin()) - 1, 0, pieces() - 1);
}

double PiecewisePoly::eval(double x) const { return eval_monomial(coeffs.at(piece_index(x)), x); }

std::vector<double> fit_hermite_piece(const Potential& V, double a, double b, int p, QuadSide side) {
    if (!(a < b)) throw std::invalid_argument("fit_hermite_piece: need a < b");
    if (a < 0 || b > V.length() * (1 + 1e-12)) throw std::invalid_argument("fit_hermite_piece: interval outside [0, L]");
    const double h = b - a;
    const double fa = V.value(a), fb = V.value(b);
    switch (p) {
    case 1: return shift_origin({fa, (fb - fa) / h}, a);
    case 2:
        if (side == QuadSide::Left) {
            double da = V.derivative(a, 1);
            return shift_origin({fa, da, (fb - fa - da * h) / (h * h)}, a);
        } else {
            double db = V.derivative(b, 1);
            return shift_origin({fb, db, (fa - fb + db * h) / (h * h)}, b);
        }
    case 3: return cubic_hermite(a, b, fa, fb, V.derivative(a, 1), V.derivative(b, 1));
    default: throw std::invalid_argument("fit_hermite_piece: degree must be 1, 2 or 3");
    }
}

PiecewisePoly algorithm1(const Potential& V, double delta, int p, const Alg1Options& opt) {
    if (p < 1 || p > 3) throw std::invalid_argument("algorithm1: degree must be 1, 2 or 3");
    if (!(delta > 0)) throw std::invalid_argument("algorithm1: delta must be positive");
    if (opt.cubic_spline && p != 3) throw std::invalid_argument("algorithm1: cubic spline needs p = 3");
    if (opt.samples_per_cell < 1) throw std::invalid_argument("algorithm1: samples_per_cell must be >= 1");
    const double C = opt.constant > 0 ? opt.constant : (opt.cubic_spline ? kSplineC3 : hermite_constant(p));
    const double L = V.length();
    const double norm = global_norms(V)[p + 1];

    PiecewisePoly pp;
    pp.L = L;
    pp.m = coarse_exponent(L, C, norm, delta, p + 1);
    const long M = 1L << pp.m;
    const double h = L / double(M);

    if (opt.merge && norm > 0 && M > 1) {
        const int R = opt.samples_per_cell;
        std::vector<double> cellmax(M, 0.0);
        for (long k = 0; k < M; ++k)
            for (int i = 0; i <= R; ++i) {
                double x = (double(k) + double(i) / R) * h;
                cellmax[k] = std::max(cellmax[k], std::abs(V.derivative(std::min(x, L), p + 1)));
            }
        const std::vector<double>* tables[4] = {nullptr, nullptr, nullptr, nullptr};
        tables[p] = &cellmax;
        double constants[4] = {0, 0, 0, 0};
        constants[p] = C;
        greedy_merge(tables, std::vector<int>(M, p), h, delta, constants, pp.knots, pp.degrees);
    } else if (opt.merge) {
        pp.knots = {0, M};
        pp.degrees = {p};
    } else {
        for (long k = 0; k <= M; ++k) pp.knots.push_back(k);
        pp.degrees.assign(M, p);
    }
    pp.algorithmic_pieces = pp.pieces();
    fit_pieces(pp, V, opt.side, opt.cubic_spline);
    if (opt.safety_net) refine(pp, V, delta, opt.side, opt.cubic_spline);
    return pp;
}

double ppp_cnot_objective(int m, const std::vector<int>& degrees, int n) {
    return double(ppp_counts(n, m, degrees).cnot);
}

NormPyramid build_norm_pyramid(const Potential& V, int finest, int samples_per_cell) {
    if (finest < 0 || finest > 26) throw std::invalid_argument("norm pyramid: finest level out of range");
    NormPyramid pyr;
    pyr.finest = finest;
    pyr.L = V.length();
    const long M = 1L << finest;
    int R = samples_per_cell;
    if (R <= 0) R = static_cast<int>(std::max(4L, (1L << 21) >> finest));
    pyr.samples_per_cell = R;

    for (int k = 2; k <= 4; ++k) pyr.levels[k].assign(finest + 1, {});
    for (int k = 2; k <= 4; ++k) pyr.levels[k][finest].assign(M, 0.0);
    const long total = M * R;
    for (long i = 0; i <= total; ++i) {
        double x = std::min(pyr.L, double(i) * pyr.L / double(total));
        Jet j = V.jet(x);
        long cell = std::min(i / R, M - 1);
        for (int k = 2; k <= 4; ++k) {
            double v = std::abs(j.derivative(k));
            auto& lv = pyr.levels[k][finest];
            lv[cell] = std::max(lv[cell], v);
            // Right endpoint of the previous cell.
            if (i % R == 0 && i > 0 && cell != i / R - 1) lv[i / R - 1] = std::max(lv[i / R - 1], v);
        }
    }
    for (int k = 2; k <= 4; ++k)
        for (int m = finest - 1; m >= 0; --m) {
            const auto& fine = pyr.levels[k][m + 1];
            auto& coarse = pyr.levels[k][m];
            coarse.resize(fine.size() / 2);
            for (std::size_t c = 0; c < coarse.size(); ++c) coarse[c] = std::max(fine[2 * c], fine[2 * c + 1]);
        }
    return pyr;
}

std::vector<int> minimal_cell_degrees(const NormPyramid& pyr, double delta, int m, const std::vector<int>& degree_set) {
    if (m < 0 || m > pyr.finest) throw std::invalid_argument("minimal_cell_degrees: level outside the pyramid");
    const long M = 1L << m;
    const double h = pyr.L / double(M);
    std::vector<int> degs = sorted_unique(degree_set);
    std::vector<int> out(M, 0);
    for (long c = 0; c < M; ++c)
        for (int p : degs) {
            if (hermite_constant(p) * pyr.levels[p + 1][m][c] * std::pow(h, p + 1) <= delta) {
                out[c] = p;
                break;
            }
        }
    return out;
}

Alg2Result algorithm2(const Potential& V, double delta, int n, const Alg2Options& opt) {
    if (!(delta > 0)) throw std::invalid_argument("algorithm2: delta must be positive");
    if (n < 1) throw std::invalid_argument("algorithm2: n must be >= 1");
    std::vector<int> degs = sorted_unique(opt.degree_set);
    if (degs.empty() || degs.front() < 1 || degs.back() > 3)
        throw std::invalid_argument("algorithm2: degree set must be a nonempty subset of {1, 2, 3}");
    std::vector<int> ms = opt.m_set;
    if (ms.empty())
        for (int m = std::min(2, n); m <= n; ++m) ms.push_back(m);
    ms = sorted_unique(ms);
    if (ms.front() < 1 || ms.back() > n) throw std::invalid_argument("algorithm2: m set must lie in {1..n}");
    SplineObjective objective = opt.objective ? opt.objective : SplineObjective(ppp_cnot_objective);

    NormPyramid local;
    const NormPyramid* pyr = opt.pyramid;
    if (!pyr || pyr->finest < ms.back()) {
        local = build_norm_pyramid(V, ms.back());
        pyr = &local;
    }

    const double consts[4] = {0, kHermiteC1, kHermiteC2, kHermiteC3};
    bool found = false;
    Alg2Result best;
    for (int m : ms) {
        std::vector<int> cell = minimal_cell_degrees(*pyr, delta, m, degs);
        if (std::find(cell.begin(), cell.end(), 0) != cell.end()) continue;
        const double h = pyr->L / std::ldexp(1.0, m);
        const std::vector<double>* tables[4] = {nullptr, &pyr->levels[2][m], &pyr->levels[3][m], &pyr->levels[4][m]};
        PiecewisePoly pp;
        pp.m = m;
        pp.L = pyr->L;
        greedy_merge(tables, cell, h, delta, consts, pp.knots, pp.degrees);
        double obj = objective(m, pp.degrees, n);
        if (!found || obj < best.objective) {
            found = true;
            best.pp = std::move(pp);
            best.objective = obj;
            best.cell_degrees = std::move(cell);
        }
    }
    if (!found) {
        int m = ms.back();
        std::vector<int> cell = minimal_cell_degrees(*pyr, delta, m, degs);
        long bad = std::find(cell.begin(), cell.end(), 0) - cell.begin();
        double h = pyr->L / std::ldexp(1.0, m);
        throw std::runtime_error("algorithm2: no admissible degree meets delta on cell " + std::to_string(bad) +
                                 " at m=" + std::to_string(m) + " (x in [" + std::to_string(bad * h) + ", " +
                                 std::to_string((bad + 1) * h) + "])");
    }
    best.pp.algorithmic_pieces = best.pp.pieces();
    fit_pieces(best.pp, V, opt.side, false);
    if (opt.safety_net) refine(best.pp, V, delta, opt.side, false);
    return best;
}

double piecewise_max_error(const PiecewisePoly& pp, const Potential& V, int resolution) {
    if (resolution < 16) throw std::invalid_argument("piecewise_max_error: resolution must be >= 16");
    double worst = 0.0;
    for (int l = 0; l < pp.pieces(); ++l) worst = std::max(worst, piece_error(pp, V, l, resolution));
    return worst;
}

nlohmann::json to_json(const PiecewisePoly& pp) {
    return nlohmann::json{{"m", pp.m},
                          {"L", pp.L},
                          {"knots", pp.knots},
                          {"degrees", pp.degrees},
                          {"coefficients", pp.coeffs},
                          {"algorithmic_pieces", pp.algorithmic_pieces}};
}

PiecewisePoly piecewise_from_json(const nlohmann::json& j) {
    PiecewisePoly pp;
    pp.m = j.at("m").get<int>();
    pp.L = j.at("L").get<double>();
    pp.knots = j.at("knots").get<std::vector<long>>();
    pp.degrees = j.at("degrees").get<std::vector<int>>();
    pp.coeffs = j.at("coefficients").get<std::vector<std::vector<double>>>();
    pp.algorithmic_pieces = j.value("algorithmic_pieces", static_cast<long>(pp.degrees.size()));
    if (pp.knots.size() != pp.degrees.size() + 1 || pp.coeffs.size() != pp.degrees.size())
        throw std::invalid_argument("piecewise polynomial: inconsistent sizes");
    if (pp.knots.front() != 0 || pp.knots.back() != (1L << pp.m))
        throw std::invalid_argument("piecewise polynomial: knots must span the lattice");
    for (std::size_t i = 1; i < pp.knots.size(); ++i)
        if (pp.knots[i] <= pp.knots[i - 1]) throw std::invalid_argument("piecewise polynomial: knots must increase");
    return pp;
}

void write_profile_csv(std::ostream& out, const PiecewisePoly& pp, const Potential& V, int samples) {
    if (samples < 2) throw std::invalid_argument("profile: need at least two samples");
    out << "x,V,pp,error\n";
    out.precision(17);
    for (int i = 0; i < samples; ++i) {
        double x = pp.L * double(i) / double(samples - 1);
        double v = V.value(x), f = pp.eval(x);
        out << x << ',' << v << ',' << f << ',' << std::abs(f - v) << '\n';
    }
}

}  // namespace diagphase
