#pragma once

#include "affsphere/laurent.hpp"

// Birkhoff factorization L = V+ * (V-)^{-1} of twisted loops, equivalently
// L * V- = V+ with V+ normalized (degree-0 coefficient = identity) and V-
// supported on degrees <= 0.  The improper case has an exact closed form;
// the generic solver truncates V- and solves the induced linear system.

namespace affsphere::birkhoff {

using loop::LaurentMatrix;

struct BigCellError : std::runtime_error {
    double b = 0.0, s = 0.0;
    BigCellError(const std::string& what, double b_, double s_)
        : std::runtime_error(what), b(b_), s(s_) {}
    explicit BigCellError(const std::string& what) : std::runtime_error(what) {}
};

struct TruncationError : std::runtime_error {
    double residual = 0.0;
    TruncationError(const std::string& what, double r) : std::runtime_error(what), residual(r) {}
};

struct BirkhoffPair {
    LaurentMatrix v_plus;   // degrees >= 0, degree-0 coefficient = identity
    LaurentMatrix v_minus;  // degrees <= 0
    double residual = 0.0;
};

/// F+ of the explicit improper solution: unit lower triangular with
/// b*lambda, c*lambda^2, a*lambda entries.
LaurentMatrix make_fplus_h0(double a, double b, double c);

/// G- of the explicit improper solution.
LaurentMatrix make_gminus_h0(double r, double s, double t);

/// Closed-form factorization of (G-)^{-1} F+ in the improper case.
/// Requires 1 - b*s != 0 (the big cell).
BirkhoffPair factor_explicit_h0(double a, double b, double c, double r, double s, double t);

/// Truncated factorization: V- carries unknown coefficients on degrees
/// -K..0 (the degree-0 unknown a full matrix); all strictly negative degrees
/// of L*V- are forced to vanish and the degree-0 coefficient to equal the
/// identity, by column-wise least squares with a singular value cutoff.
/// Throws BigCellError when the system is numerically singular and
/// TruncationError when the residual exceeds `residual_tol`.
BirkhoffPair factor_truncated(const LaurentMatrix& L, int K, int H,
                              double residual_tol = 1e-8);

/// Reconstruction residual max over probe lambdas of
/// |evaluate(L,l)*evaluate(V-,l) - evaluate(V+,l)|.
double reconstruction_residual(const LaurentMatrix& L, const BirkhoffPair& p);

}  // namespace affsphere::birkhoff
