#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace diagphase {

// Highest derivative order tracked by Jet.
inline constexpr int kMaxOrder = 4;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Truncated Taylor series: c[k] = f^(k)(x0) / k!.
struct Jet {
    std::array<double, kMaxOrder + 1> c{};

    static Jet constant(double v) {
        Jet j;
        j.c[0] = v;
        return j;
    }
    static Jet variable(double x) {
        Jet j;
        j.c[0] = x;
        j.c[1] = 1.0;
        return j;
    }

    double value() const { return c[0]; }
    // k-th derivative, k <= kMaxOrder.
    double derivative(int k) const {
        static constexpr double fact[] = {1.0, 1.0, 2.0, 6.0, 24.0};
        return c[k] * fact[k];
    }
    bool is_constant() const {
        for (int k = 1; k <= kMaxOrder; ++k)
            if (c[k] != 0.0) return false;
        return true;
    }
};

inline Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= kMaxOrder; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}
inline Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= kMaxOrder; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}
inline Jet operator-(const Jet& a) {
    Jet r;
    for (int k = 0; k <= kMaxOrder; ++k) r.c[k] = -a.c[k];
    return r;
}
inline Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= kMaxOrder; ++k) {
        double s = 0.0;
        for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
        r.c[k] = s;
    }
    return r;
}
inline Jet operator*(double s, const Jet& a) {
    Jet r;
    for (int k = 0; k <= kMaxOrder; ++k) r.c[k] = s * a.c[k];
    return r;
}
inline Jet operator*(const Jet& a, double s) { return s * a; }
inline Jet operator+(const Jet& a, double s) {
    Jet r = a;
    r.c[0] += s;
    return r;
}
inline Jet operator+(double s, const Jet& a) { return a + s; }
inline Jet operator-(const Jet& a, double s) { return a + (-s); }
inline Jet operator-(double s, const Jet& a) { return (-a) + s; }

inline Jet operator/(const Jet& a, const Jet& b) {
    if (b.c[0] == 0.0) throw DomainError("division by zero");
    Jet r;
    for (int k = 0; k <= kMaxOrder; ++k) {
        double s = a.c[k];
        for (int i = 1; i <= k; ++i) s -= b.c[i] * r.c[k - i];
        r.c[k] = s / b.c[0];
    }
    return r;
}
inline Jet operator/(const Jet& a, double s) {
    if (s == 0.0) throw DomainError("division by zero");
    return (1.0 / s) * a;
}
inline Jet operator/(double s, const Jet& b) { return Jet::constant(s) / b; }

// exp via a' = u' a, coefficientwise: k a_k = sum_{i=1..k} i u_i a_{k-i}.
inline Jet exp(const Jet& u) {
    Jet r;
    r.c[0] = std::exp(u.c[0]);
    for (int k = 1; k <= kMaxOrder; ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i) s += i * u.c[i] * r.c[k - i];
        r.c[k] = s / k;
    }
    return r;
}

inline Jet log(const Jet& u) {
    if (!(u.c[0] > 0.0)) throw DomainError("log of non-positive value");
    Jet r;
    r.c[0] = std::log(u.c[0]);
    for (int k = 1; k <= kMaxOrder; ++k) {
        double s = k * u.c[k];
        for (int i = 1; i < k; ++i) s -= i * r.c[i] * u.c[k - i];
        r.c[k] = s / (k * u.c[0]);
    }
    return r;
}

inline void sincos(const Jet& u, Jet& s, Jet& co) {
    s = Jet{};
    co = Jet{};
    s.c[0] = std::sin(u.c[0]);
    co.c[0] = std::cos(u.c[0]);
    for (int k = 1; k <= kMaxOrder; ++k) {
        double ss = 0.0, cc = 0.0;
        for (int i = 1; i <= k; ++i) {
            ss += i * u.c[i] * co.c[k - i];
            cc -= i * u.c[i] * s.c[k - i];
        }
        s.c[k] = ss / k;
        co.c[k] = cc / k;
    }
}
inline Jet sin(const Jet& u) {
    Jet s, c;
    sincos(u, s, c);
    return s;
}
inline Jet cos(const Jet& u) {
    Jet s, c;
    sincos(u, s, c);
    return c;
}

inline Jet sqrt(const Jet& u) {
    if (u.c[0] < 0.0) throw DomainError("sqrt of negative value");
    Jet r;
    r.c[0] = std::sqrt(u.c[0]);
    if (r.c[0] == 0.0) {
        if (!u.is_constant()) throw DomainError("sqrt not differentiable at 0");
        return r;
    }
    for (int k = 1; k <= kMaxOrder; ++k) {
        double s = u.c[k];
        for (int i = 1; i < k; ++i) s -= r.c[i] * r.c[k - i];
        r.c[k] = s / (2.0 * r.c[0]);
    }
    return r;
}

inline Jet abs(const Jet& u) {
    if (u.c[0] > 0.0) return u;
    if (u.c[0] < 0.0) return -u;
    if (!u.is_constant()) throw DomainError("abs not differentiable at 0");
    return u;
}

// Integer power by binary powering; negative exponents invert.
inline Jet powi(const Jet& u, long e) {
    if (e == 0) return Jet::constant(1.0);
    if (e < 0) return 1.0 / powi(u, -e);
    Jet result = Jet::constant(1.0);
    Jet base = u;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

inline Jet pow(const Jet& u, double e) {
    if (e == std::floor(e) && std::abs(e) <= 64.0) return powi(u, static_cast<long>(e));
    if (u.c[0] == 0.0 && e > 0.0 && u.is_constant()) return Jet::constant(0.0);
    return exp(e * log(u));
}

}  // namespace diagphase
