#include "diagphase/ppp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "diagphase/liu.hpp"

namespace diagphase {

namespace {

void add_subsets(std::map<std::uint64_t, double>& angles, int n, int size, int start, std::uint64_t mask) {
    if (size == 0) {
        angles.emplace(mask, 0.0);
        return;
    }
    for (int q = start; q < n; ++q) add_subsets(angles, n, size - 1, q + 1, mask | (std::uint64_t{1} << q));
}

std::vector<int> mask_qubits(std::uint64_t mask) {
    std::vector<int> q;
    while (mask) {
        q.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return q;
}

}  // namespace

PolyPhaseSpec poly_phase_spec(const std::vector<double>& coeffs, int n, double L) {
    if (coeffs.empty()) throw std::invalid_argument("poly phase: no coefficients");
    const int p = static_cast<int>(coeffs.size()) - 1;
    if (p > 3) throw std::invalid_argument("poly phase: degree above 3 is not supported");
    if (n < 1 || n > 62) throw std::invalid_argument("poly phase: n out of range");
    PolyPhaseSpec s;
    s.n = n;
    s.L = L;
    s.coeffs = coeffs;
    s.global = -coeffs[0];
    for (int size = 1; size <= std::min(p, n); ++size) add_subsets(s.angles, n, size, 0, 0);

    const double dx = L / std::ldexp(1.0, n);
    for (int k = 1; k <= p; ++k) {
        const double scale = -coeffs[k] * std::pow(dx, k);
        if (scale == 0.0) continue;
        // j^k = sum over index tuples (l_1..l_k) of 2^(l_1+...+l_k) prod b_{l_i}; b^2 = b collapses repeats.
        std::vector<int> idx(k, 0);
        for (;;) {
            std::uint64_t mask = 0;
            int e = 0;
            for (int l : idx) {
                mask |= std::uint64_t{1} << l;
                e += l;
            }
            s.angles[mask] += scale * std::ldexp(1.0, e);
            int pos = k - 1;
            while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
            if (pos < 0) break;
        }
    }
    return s;
}

void append_poly_phase(Circuit& c, const std::vector<double>& coeffs, int n, double L, std::optional<int> control,
                       bool minimal) {
    PolyPhaseSpec s = poly_phase_spec(coeffs, n, L);
    if (!control) c.add(Gate::global_phase(s.global));
    // Larger subsets first and single-qubit phases last, so no phase sits directly before a
    // controlled phase sharing its qubit as control.
    std::vector<std::pair<std::uint64_t, double>> order(s.angles.begin(), s.angles.end());
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return std::popcount(a.first) > std::popcount(b.first);
    });
    for (const auto& [mask, theta] : order) {
        if (minimal && normalize_angle(theta) == 0.0) continue;
        std::vector<int> q = mask_qubits(mask);
        if (control) q.insert(q.begin(), *control);
        int target = q.back();
        q.pop_back();
        c.add(Gate::mcphase(q, target, theta));
    }
    if (control && !(minimal && normalize_angle(s.global) == 0.0)) c.add(Gate::phase(*control, s.global));
}

Circuit synth_poly_phase(const std::vector<double>& coeffs, int n, double L, bool controlled, bool minimal) {
    Circuit c(n, controlled ? 1 : 0);
    append_poly_phase(c, coeffs, n, L, controlled ? std::optional<int>(n) : std::nullopt, minimal);
    return c;
}

void append_comparator(Circuit& c, const std::vector<int>& reg, int flag, long k) {
    const int m = static_cast<int>(reg.size());
    if (m < 1) throw std::invalid_argument("comparator: empty register");
    if (k < 1 || k > (1L << m) - 1) throw std::invalid_argument("comparator: k must lie in 1..2^m-1");
    std::vector<int> wide = reg;
    wide.push_back(flag);
    append_qft(c, wide);
    append_fourier_add(c, wide, -double(k), std::nullopt);
    append_iqft(c, wide);
    append_qft(c, reg);
    append_fourier_add(c, reg, double(k), std::nullopt);
    append_iqft(c, reg);
}

Circuit synth_comparator(long k, int m) {
    Circuit c(m, 1);
    std::vector<int> reg;
    for (int i = 0; i < m; ++i) reg.push_back(i);
    append_comparator(c, reg, m, k);
    return c;
}

Circuit synth_ppp(const PiecewisePoly& pp, int n, bool minimal) {
    if (pp.pieces() < 1) throw std::invalid_argument("ppp: no pieces");
    if (pp.m > n) throw std::invalid_argument("ppp: knot lattice finer than the grid");
    const int anc = n;
    Circuit c(n, 1);
    std::vector<int> reg;
    for (int b = 0; b < pp.m; ++b) reg.push_back(n - pp.m + b);

    append_poly_phase(c, pp.coeffs[0], n, pp.L, std::nullopt, minimal);
    for (int l = 1; l < pp.pieces(); ++l) {
        const long k = pp.knots[l];
        if (k < 1 || k >= (1L << pp.m)) throw std::invalid_argument("ppp: knot not representable on the top qubits");
        std::size_t len = std::max(pp.coeffs[l].size(), pp.coeffs[l - 1].size());
        std::vector<double> diff(len, 0.0);
        for (std::size_t i = 0; i < pp.coeffs[l].size(); ++i) diff[i] += pp.coeffs[l][i];
        for (std::size_t i = 0; i < pp.coeffs[l - 1].size(); ++i) diff[i] -= pp.coeffs[l - 1][i];

        Circuit comp(n, 1);
        append_comparator(comp, reg, anc, k);
        c.append(comp);
        c.add(Gate::x(anc));
        append_poly_phase(c, diff, n, pp.L, anc, minimal);
        c.add(Gate::x(anc));
        c.append(comp.inverse());
    }
    return c;
}

}  // namespace diagphase
