#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "diagphase/expr.hpp"
#include "diagphase/jet.hpp"

namespace diagphase {

// Sharp two-point Hermite constants C_p for p = 1, 2, 3.
inline constexpr double kHermiteC1 = 1.0 / 8.0;
inline constexpr double kHermiteC2 = 2.0 / 81.0;
inline constexpr double kHermiteC3 = 1.0 / 384.0;
// Type-I/II cubic spline constant.
inline constexpr double kSplineC3 = 5.0 / 384.0;

double hermite_constant(int p);

// V on [0, L] with derivatives up to order 4.
class Potential {
public:
    using JetFn = std::function<Jet(double)>;

    Potential(JetFn fn, double L, std::string description, bool sampled_derivatives = false);

    // A / sqrt(a2 + (x - L/2)^2).
    static Potential coulomb(double A, double a2, double L);
    // A exp(-a x^2) cos(omega x).
    static Potential damped_osc(double A, double a, double omega, double L);
    // sum_k coeffs[k] x^k.
    static Potential polynomial(std::vector<double> coeffs, double L);
    static Potential from_expr(const Expr& e, double L);
    // Samples (x_i, V_i) with increasing x covering [0, L]; derivatives by local divided differences.
    static Potential tabulated(std::vector<double> xs, std::vector<double> vs);
    static Potential from_csv(const std::string& path);

    double length() const { return L_; }
    const std::string& description() const { return description_; }
    // Set when derivatives come from divided differences instead of analytic rules.
    bool sampled_derivatives() const { return sampled_; }
    bool has_kinks() const { return kinks_; }

    int resolution() const { return resolution_; }
    void set_resolution(int r);

    double value(double x) const;
    double derivative(double x, int order) const;
    // Value and derivatives 0..4 at x; nudges off non-differentiable points.
    Jet jet(double x) const;

    // max |V^(order)| on [a, b] over a grid of points+1 samples with local refinement.
    double sup_norm_points(int order, double a, double b, long points) const;
    // Default density: resolution * ceil((b - a) / L * 2^m_max) points.
    double sup_norm(int order, double a, double b, int m_max = 12) const;

    // s * V(x).
    Potential scaled(double s) const;

    // Global sup norms of V^(k), k = 0..4; computed once per potential.
    std::array<double, 5> global_norms() const;

private:
    struct NormCache {
        std::once_flag once;
        std::array<double, 5> norms{};
    };
    std::array<double, 5> compute_global_norms() const;
    std::shared_ptr<NormCache> cache_ = std::make_shared<NormCache>();

    JetFn fn_;
    double L_;
    std::string description_;
    bool sampled_ = false;
    bool kinks_ = false;
    int resolution_ = 64;
};

struct CoarseParams {
    int m0 = 0;
    int m1 = 0;
    std::array<int, 4> m_p{};     // index p = 1..3
    std::array<long, 4> Mhat_p{}; // index p = 1..3
    std::array<double, 5> norms{}; // sup norms of V^(k), k = 0..4
};

// Coarse-graining exponent ceil(log2(L * (C * norm / delta)^(1/q))), clamped to >= 0.
// Returns 0 for a vanishing norm.
int coarse_exponent(double L, double C, double norm, double delta, int q);

// ceil of the trapezoid integral of (C_p |V^(p+1)| / delta)^(1/(p+1)) over [0, L].
long mhat(const Potential& V, double delta, int p, int m_p);

CoarseParams coarse_params(const Potential& V, double delta);

// Global sup norms of V^(k) for k = 0..4 (dense grid plus refinement).
std::array<double, 5> global_norms(const Potential& V);

}  // namespace diagphase
