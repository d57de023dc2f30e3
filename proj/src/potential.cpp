#include "diagphase/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace diagphase {

double hermite_constant(int p) {
    switch (p) {
    case 1: return kHermiteC1;
    case 2: return kHermiteC2;
    case 3: return kHermiteC3;
    default: throw std::invalid_argument("degree must be 1, 2 or 3");
    }
}

Potential::Potential(JetFn fn, double L, std::string description, bool sampled_derivatives)
    : fn_(std::move(fn)), L_(L), description_(std::move(description)), sampled_(sampled_derivatives) {
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("domain length L must be positive");
}

Potential Potential::coulomb(double A, double a2, double L) {
    if (!(a2 > 0.0)) throw std::invalid_argument("coulomb requires a^2 > 0");
    double c = L / 2.0;
    std::ostringstream d;
    d << "coulomb(" << A << "," << a2 << "," << L << ")";
    return Potential([=](double x) {
        Jet u = Jet::variable(x) - c;
        return A / sqrt(a2 + u * u);
    }, L, d.str());
}

Potential Potential::damped_osc(double A, double a, double omega, double L) {
    std::ostringstream d;
    d << "damped_osc(" << A << "," << a << "," << omega << "," << L << ")";
    return Potential([=](double x) {
        Jet X = Jet::variable(x);
        return A * exp(-a * (X * X)) * cos(omega * X);
    }, L, d.str());
}

Potential Potential::polynomial(std::vector<double> coeffs, double L) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    std::ostringstream d;
    d << "polynomial(";
    for (std::size_t i = 0; i < coeffs.size(); ++i) d << (i ? "," : "") << coeffs[i];
    d << ";" << L << ")";
    return Potential([coeffs](double x) {
        Jet X = Jet::variable(x);
        Jet r = Jet::constant(coeffs.back());
        for (std::size_t i = coeffs.size() - 1; i-- > 0;) r = r * X + coeffs[i];
        return r;
    }, L, d.str());
}

Potential Potential::from_expr(const Expr& e, double L) {
    Potential p([e](double x) { return e.eval_jet(x); }, L, e.to_string());
    p.kinks_ = e.has_kinks();
    return p;
}

Potential Potential::tabulated(std::vector<double> xs, std::vector<double> vs) {
    if (xs.size() != vs.size() || xs.size() < 2) throw std::invalid_argument("tabulated potential needs >= 2 samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("tabulated x values must be strictly increasing");
    if (std::abs(xs.front()) > 1e-12 * std::max(1.0, std::abs(xs.back())))
        throw std::invalid_argument("tabulated samples must start at x = 0");
    double L = xs.back();
    auto data = std::make_shared<std::pair<std::vector<double>, std::vector<double>>>(std::move(xs), std::move(vs));
    auto fn = [data](double x) {
        const auto& X = data->first;
        const auto& Y = data->second;
        const std::size_t n = X.size();
        const std::size_t w = std::min<std::size_t>(5, n);
        // Window of w samples around x.
        std::size_t hi = static_cast<std::size_t>(std::lower_bound(X.begin(), X.end(), x) - X.begin());
        std::size_t lo = hi >= w / 2 ? hi - w / 2 : 0;
        if (lo + w > n) lo = n - w;
        double xw[5], d[5];
        for (std::size_t i = 0; i < w; ++i) {
            xw[i] = X[lo + i];
            d[i] = Y[lo + i];
        }
        // Newton divided differences in place.
        for (std::size_t k = 1; k < w; ++k)
            for (std::size_t i = w - 1; i >= k; --i) d[i] = (d[i] - d[i - 1]) / (xw[i] - xw[i - k]);
        Jet t = Jet::variable(x);
        Jet r = Jet::constant(d[w - 1]);
        for (std::size_t i = w - 1; i-- > 0;) r = r * (t - xw[i]) + d[i];
        return r;
    };
    return Potential(fn, L, "tabulated", true);
}

Potential Potential::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::vector<double> xs, vs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ';', ',');
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected two columns");
        const char* a = line.c_str();
        char* end = nullptr;
        double x = std::strtod(a, &end);
        if (end == a) {
            if (xs.empty()) continue;  // header
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": malformed number");
        }
        const char* b = a + comma + 1;
        double v = std::strtod(b, &end);
        if (end == b) throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": malformed number");
        xs.push_back(x);
        vs.push_back(v);
    }
    return tabulated(std::move(xs), std::move(vs));
}

void Potential::set_resolution(int r) {
    if (r < 1) throw std::invalid_argument("resolution must be >= 1");
    resolution_ = r;
}

Jet Potential::jet(double x) const {
    try {
        return fn_(x);
    } catch (const DomainError&) {
        if (!kinks_) throw;
    }
    // Sample beside the kink instead of differentiating through it.
    double eps = 1e-9 * L_;
    double xr = x + eps <= L_ ? x + eps : x - eps;
    return fn_(xr);
}

double Potential::value(double x) const { return jet(x).value(); }

double Potential::derivative(double x, int order) const {
    if (order < 0 || order > kMaxOrder) throw std::invalid_argument("derivative order must be in 0..4");
    return jet(x).derivative(order);
}

double Potential::sup_norm_points(int order, double a, double b, long points) const {
    if (order < 0 || order > kMaxOrder) throw std::invalid_argument("derivative order must be in 0..4");
    if (!(a < b)) throw std::invalid_argument("sup_norm needs a < b");
    points = std::max(points, 2L);
    double step = (b - a) / static_cast<double>(points);
    double best = -1.0;
    long arg = 0;
    for (long i = 0; i <= points; ++i) {
        double x = i == points ? b : a + step * static_cast<double>(i);
        double v = std::abs(jet(x).derivative(order));
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    // Golden-section refinement on the bracketing cells.
    double lo = std::max(a, a + step * static_cast<double>(arg - 1));
    double hi = std::min(b, a + step * static_cast<double>(arg + 1));
    auto f = [&](double x) { return std::abs(jet(x).derivative(order)); };
    const double g = 0.6180339887498949;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max({best, f1, f2});
}

double Potential::sup_norm(int order, double a, double b, int m_max) const {
    double cells = std::ceil((b - a) / L_ * std::ldexp(1.0, m_max) - 1e-9);
    return sup_norm_points(order, a, b, static_cast<long>(std::max(1.0, cells)) * resolution_);
}

std::array<double, 5> Potential::global_norms() const {
    std::call_once(cache_->once, [this] { cache_->norms = compute_global_norms(); });
    return cache_->norms;
}

Potential Potential::scaled(double s) const {
    JetFn f = fn_;
    Potential p([f, s](double x) { return s * f(x); }, L_, description_, sampled_);
    p.kinks_ = kinks_;
    p.resolution_ = resolution_;
    return p;
}

int coarse_exponent(double L, double C, double norm, double delta, int q) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (!(norm > 0.0)) return 0;
    double v = std::log2(L) + std::log2(C * norm / delta) / q;
    // Absorb rounding just above an exact power of two.
    int m = static_cast<int>(std::ceil(v - 1e-12));
    return std::max(m, 0);
}

std::array<double, 5> global_norms(const Potential& V) { return V.global_norms(); }

std::array<double, 5> Potential::compute_global_norms() const {
    const Potential& V = *this;
    std::array<double, 5> out{};
    const long points = 1L << 20;
    const double L = V.length();
    const double step = L / static_cast<double>(points);
    std::array<double, 5> best{};
    std::array<long, 5> arg{};
    best.fill(-1.0);
    for (long i = 0; i <= points; ++i) {
        double x = i == points ? L : step * static_cast<double>(i);
        Jet j = V.jet(x);
        for (int k = 0; k <= kMaxOrder; ++k) {
            double v = std::abs(j.derivative(k));
            if (v > best[k]) {
                best[k] = v;
                arg[k] = i;
            }
        }
    }
    for (int k = 0; k <= kMaxOrder; ++k) {
        if (best[k] == 0.0) {
            out[k] = 0.0;
            continue;
        }
        double lo = std::max(0.0, step * static_cast<double>(arg[k] - 1));
        double hi = std::min(L, step * static_cast<double>(arg[k] + 1));
        out[k] = std::max(best[k], V.sup_norm_points(k, lo, hi, 64L));
    }
    return out;
}

long mhat(const Potential& V, double delta, int p, int m_p) {
    const double C = hermite_constant(p);
    const double L = V.length();
    long panels = (1L << std::min(std::max(m_p, 0), 24)) * static_cast<long>(V.resolution());
    double h = L / static_cast<double>(panels);
    double q = 1.0 / (p + 1);
    double sum = 0.0;
    for (long i = 0; i <= panels; ++i) {
        double x = i == panels ? L : h * static_cast<double>(i);
        double f = std::pow(C * std::abs(V.jet(x).derivative(p + 1)) / delta, q);
        sum += (i == 0 || i == panels) ? 0.5 * f : f;
    }
    double integral = sum * h;
    if (!(integral > 0.0)) return 1;
    return std::max(1L, static_cast<long>(std::ceil(integral - 1e-12)));
}

CoarseParams coarse_params(const Potential& V, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    CoarseParams cp;
    cp.norms = global_norms(V);
    const double L = V.length();
    cp.m0 = coarse_exponent(L, 1.0, cp.norms[1], delta, 1);
    cp.m1 = coarse_exponent(L, kHermiteC1, cp.norms[2], delta, 2);
    for (int p = 1; p <= 3; ++p) {
        cp.m_p[p] = coarse_exponent(L, hermite_constant(p), cp.norms[p + 1], delta, p + 1);
        cp.Mhat_p[p] = cp.norms[p + 1] > 0.0 ? mhat(V, delta, p, cp.m_p[p]) : 1;
    }
    return cp;
}

}  // namespace diagphase
