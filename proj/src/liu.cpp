#include "diagphase/liu.hpp"

#include <cmath>
#include <stdexcept>

#include "diagphase/walsh.hpp"

namespace diagphase {

void append_qft(Circuit& c, const std::vector<int>& q) {
    const int m = static_cast<int>(q.size());
    for (int i = m - 1; i >= 0; --i) {
        c.add(Gate::h(q[i]));
        for (int l = i - 1; l >= 0; --l) c.add(Gate::cphase(q[l], q[i], M_PI / std::ldexp(1.0, i - l)));
    }
}

void append_iqft(Circuit& c, const std::vector<int>& q) {
    Circuit f(c.width(), 0);
    append_qft(f, q);
    c.append(f.inverse());
}

void append_fourier_add(Circuit& c, const std::vector<int>& q, double amount, std::optional<int> control) {
    // After the swap-free QFT, qubit i carries e^{2 pi i k / 2^(i+1)}.
    for (std::size_t i = 0; i < q.size(); ++i) {
        double theta = 2 * M_PI * amount / std::ldexp(1.0, static_cast<int>(i) + 1);
        c.add(control ? Gate::cphase(*control, q[i], theta) : Gate::phase(q[i], theta));
    }
}

namespace {

void append_increment(Circuit& c, const std::vector<int>& q, double amount, std::optional<int> control) {
    append_qft(c, q);
    append_fourier_add(c, q, amount, control);
    append_iqft(c, q);
}

std::vector<int> top_qubits(int n, int m) {
    std::vector<int> q;
    for (int b = 0; b < m; ++b) q.push_back(n - m + b);
    return q;
}

}  // namespace

Circuit synth_controlled_increment(int m, bool controlled) {
    if (m < 1) throw std::invalid_argument("increment: m must be >= 1");
    Circuit c(controlled ? m + 1 : m, 0);
    std::vector<int> q;
    for (int i = 0; i < m; ++i) q.push_back(i);
    append_increment(c, q, 1.0, controlled ? std::optional<int>(m) : std::nullopt);
    return c;
}

LiuPlan liu_plan(const Potential& V, int n, double delta, std::optional<int> m1_override, Wrap wrap) {
    if (n < 1) throw std::invalid_argument("liu: n must be >= 1");
    LiuPlan p;
    p.n = n;
    p.L = V.length();
    p.wrap = wrap;
    if (m1_override) {
        if (*m1_override < 1) throw std::invalid_argument("liu: m1 must be >= 1");
        p.m1 = std::min(*m1_override, n);
    } else {
        if (!(delta > 0)) throw std::invalid_argument("liu: delta must be positive");
        p.m1 = std::min(std::max(coarse_params(V, delta).m1, 1), n);
    }
    const std::size_t M = std::size_t{1} << p.m1;
    p.u.resize(M + 1);
    for (std::size_t k = 0; k < M; ++k) p.u[k] = V.value(double(k) * p.L / double(M));
    p.u[M] = wrap == Wrap::Periodic ? p.u[0] : V.value(p.L);
    return p;
}

std::vector<double> liu_interpolant(const LiuPlan& p) {
    const int f = p.n - p.m1;
    const std::size_t N = std::size_t{1} << p.n, F = std::size_t{1} << f;
    std::vector<double> v(N);
    for (std::size_t j = 0; j < N; ++j) {
        std::size_t k = j >> f, kp = j & (F - 1);
        v[j] = p.u[k] + double(kp) * (p.u[k + 1] - p.u[k]) / double(F);
    }
    return v;
}

Circuit synth_liu(const Potential& V, int n, double delta, const LiuOptions& opt) {
    LiuPlan plan = liu_plan(V, n, delta, opt.m1, Wrap::Periodic);
    if (plan.m1 >= n) return synth_wal(V, n, delta, WalOptions{n, opt.minimal});
    const int m = plan.m1;
    const std::size_t M = std::size_t{1} << m;
    std::vector<int> coarse = top_qubits(n, m);
    std::vector<double> base(plan.u.begin(), plan.u.begin() + M);

    Circuit c(n, 0);
    std::vector<double> ph(M);
    for (std::size_t k = 0; k < M; ++k) ph[k] = -base[k];
    append_walsh_diagonal(c, ph, coarse, std::nullopt, opt.minimal);
    for (int p = 0; p < n - m; ++p) {
        const double scale = std::ldexp(1.0, -(n - m - p));
        for (std::size_t k = 0; k < M; ++k) ph[k] = base[k] * scale;
        append_walsh_diagonal(c, ph, coarse, std::nullopt, opt.minimal);
        append_increment(c, coarse, 1.0, p);
        for (std::size_t k = 0; k < M; ++k) ph[k] = -base[k] * scale;
        append_walsh_diagonal(c, ph, coarse, std::nullopt, opt.minimal);
        append_increment(c, coarse, -1.0, p);
    }
    return c;
}

Circuit synth_mliu(const Potential& V, int n, double delta, const LiuOptions& opt) {
    LiuPlan plan = liu_plan(V, n, delta, opt.m1, Wrap::Endpoint);
    if (plan.m1 >= n) return synth_wal(V, n, delta, WalOptions{n, opt.minimal});
    const int m = plan.m1;
    const std::size_t M = std::size_t{1} << m;
    std::vector<int> coarse = top_qubits(n, m);

    Circuit c(n, 0);
    std::vector<double> ph(M);
    for (std::size_t k = 0; k < M; ++k) ph[k] = -plan.u[k];
    append_walsh_diagonal(c, ph, coarse, std::nullopt, opt.minimal);
    for (int p = 0; p < n - m; ++p) {
        const double scale = std::ldexp(1.0, -(n - m - p));
        for (std::size_t k = 0; k < M; ++k) ph[k] = -(plan.u[k + 1] - plan.u[k]) * scale;
        append_walsh_diagonal(c, ph, coarse, p, opt.minimal);
    }
    return c;
}

}  // namespace diagphase
