#pragma once

#include <complex>
#include <string>
#include <vector>

#include "conseq/pattern.hpp"
#include "conseq/rational.hpp"

namespace conseq {

// Growth-rate estimation and polynomial bounds for the avoidance
// probabilities a_n.  Counts stay exact rationals; conversion to double
// happens only at ratio/root-finding time.

struct RhoEstimate {
    double raw;          // last ratio a_{n_max}/a_{n_max-1}
    double accelerated;  // Aitken delta-squared applied to the last 5 ratios
    int n_max;
};

RhoEstimate rho_estimate(const Pattern& v, int n_max);

// |a_{alpha k d} - (a_lambda)^k| <= (k+2) (a_lambda)^{k-1} with
// lambda = 1 + d(alpha-1), checked in exact arithmetic for each k.
struct MineqRow {
    int k;
    Rat lhs;
    Rat rhs;
    bool holds;
};

struct MineqReport {
    std::string pattern;
    int alpha = 0;
    std::vector<MineqRow> rows;
    bool all_hold() const;
};

MineqReport verify_mineq(const Pattern& v, int alpha, int k_lo, int k_hi);

// (g_0(S_{alpha d}) / (alpha d)!)^(1/(alpha d))
double upper_bound_block(const Pattern& v, int alpha);

// Durand-Kerner roots of a real-coefficient polynomial (highest degree
// first); deterministic start values, tolerance 1e-14, iteration cap 1e4.
std::vector<std::complex<double>> all_roots(const std::vector<double>& coeffs);

// Bracketing roots from the two characteristic polynomials at a given ell:
//   poly1: x^(ell+d-1) - x^(ell+d-2) + beta
//   poly2: x^(ell+2d-2) - x^(ell+2d-3) + beta x^(d-1) - (d-1)/d!
// rho values are the moduli of the largest-modulus roots; whether each
// dominant root is real is checked per instance and flagged, not assumed.
struct PolyBounds {
    double rho_l = 0;
    double rho_u = 0;
    std::complex<double> poly1_dominant;
    std::complex<double> poly2_dominant;
    bool poly1_dominant_real = false;
    bool poly2_dominant_real = false;
    double poly1_residual = 0;  // |p(dominant)|
    double poly2_residual = 0;
    Rat beta;
    int ell = 0;
};

PolyBounds poly_bounds(const Pattern& v, int ell);

// Closed-form lower-bound certificate: scans a geometric grid of exponents
// alpha' > 0 for feasibility of 1 < (1-delta)(1/beta)^(alpha'/(1+alpha'))
// with delta = beta^(1/((m-1)(1+alpha'))), m = d + ell - 1.  Throws
// "no certificate found" when beta lies outside (0, (m-1)^(m-1)/m^m) or no
// grid point is feasible.
struct ClosedLower {
    double delta = 0;
    double gamma = 0;
    bool gamma_vacuous = false;  // 1 - beta - delta <= 0, exponent undefined
    double alpha_used = 0;
    double lower_value = 0;  // 1 - beta - beta^gamma when gamma is defined
};

ClosedLower lower_bound_closed(const Pattern& v, int ell);

// rho estimates for all of S_d with the expected extremal patterns checked
struct ExtremalReport {
    int d = 0;
    int n_max = 0;
    double tolerance = 0;
    std::vector<std::pair<std::string, double>> estimates;  // pattern, accelerated
    std::string expected_min;
    std::string expected_max;
    bool ordering_holds = false;
    std::string to_json(bool pretty = true) const;
};

ExtremalReport extremal_ordering(int d, int n_max);

}  // namespace conseq
