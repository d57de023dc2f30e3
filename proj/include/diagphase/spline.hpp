#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "diagphase/potential.hpp"

namespace diagphase {

// Which endpoint carries the derivative condition of the quadratic Hermite piece.
enum class QuadSide { Left, Right };

struct PiecewisePoly {
    int m = 0;
    double L = 0.0;
    std::vector<long> knots;                // lattice indices, knots.front() = 0, knots.back() = 2^m
    std::vector<int> degrees;               // one per piece
    std::vector<std::vector<double>> coeffs; // monomial coefficients in physical x, one vector per piece
    // Piece count before the a posteriori refinement.
    long algorithmic_pieces = 0;

    int pieces() const { return static_cast<int>(degrees.size()); }
    double knot_x(int l) const;
    // Piece containing x, using half-open intervals [x_l, x_{l+1}); x = L maps to the last piece.
    int piece_index(double x) const;
    // Piece containing grid point j of an n-qubit grid (integer comparison on the top m bits).
    int piece_of_grid(long long j, int n) const;
    double eval(double x) const;
};

// Monomial coefficients (in x) of the two-point Hermite interpolant of degree p on [a, b].
// p = 2 matches V(a), V(b) and V' at the chosen side; p = 3 matches both derivatives.
std::vector<double> fit_hermite_piece(const Potential& V, double a, double b, int p, QuadSide side = QuadSide::Right);

// Evaluates sum_k c[k] x^k.
double eval_monomial(const std::vector<double>& c, double x);

struct Alg1Options {
    bool merge = true;
    QuadSide side = QuadSide::Right;
    // Error constant; 0 selects the Hermite constant of degree p.
    double constant = 0.0;
    // Global clamped cubic spline instead of independent Hermite pieces (p = 3 only).
    bool cubic_spline = false;
    // Samples per coarse cell, endpoints included, for the local derivative norms.
    int samples_per_cell = 64;
    // Bisect pieces whose measured error exceeds delta.
    bool safety_net = true;
};

PiecewisePoly algorithm1(const Potential& V, double delta, int p, const Alg1Options& opt = {});

// Cost of a candidate (m, per-piece degrees) on n qubits.
using SplineObjective = std::function<double(int m, const std::vector<int>& degrees, int n)>;

// PPP decomposed CNOT count.
double ppp_cnot_objective(int m, const std::vector<int>& degrees, int n);

// Cell maxima of |V^(k)|, k = 2..4, on every lattice level 0..finest.
struct NormPyramid {
    int finest = 0;
    double L = 0.0;
    int samples_per_cell = 0;
    // levels[k][m][cell]
    std::array<std::vector<std::vector<double>>, 5> levels;
};

// Samples per finest cell default to max(4, 2^21 / 2^finest).
NormPyramid build_norm_pyramid(const Potential& V, int finest, int samples_per_cell = 0);

// Per-cell minimal feasible degree at level m (0 marks an infeasible cell).
std::vector<int> minimal_cell_degrees(const NormPyramid& pyr, double delta, int m, const std::vector<int>& degree_set);

struct Alg2Options {
    std::vector<int> degree_set = {1, 2, 3};
    // Empty selects {2, ..., n}.
    std::vector<int> m_set;
    SplineObjective objective;  // empty selects ppp_cnot_objective
    QuadSide side = QuadSide::Right;
    bool safety_net = true;
    // Reused across calls when given; must cover max(m_set).
    const NormPyramid* pyramid = nullptr;
};

struct Alg2Result {
    PiecewisePoly pp;
    double objective = 0.0;
    std::vector<int> cell_degrees;  // minimal degree per cell at the chosen m
};

Alg2Result algorithm2(const Potential& V, double delta, int n, const Alg2Options& opt = {});

// max |pp(x) - V(x)| with `resolution` samples per piece, endpoints included.
double piecewise_max_error(const PiecewisePoly& pp, const Potential& V, int resolution = 2000);

nlohmann::json to_json(const PiecewisePoly& pp);
PiecewisePoly piecewise_from_json(const nlohmann::json& j);

// Rows x, V, pp, error on a uniform grid of `samples` points.
void write_profile_csv(std::ostream& out, const PiecewisePoly& pp, const Potential& V, int samples);

}  // namespace diagphase
