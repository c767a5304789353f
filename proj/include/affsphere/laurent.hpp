#pragma once

#include "affsphere/lattice.hpp"

#include <iosfwd>
#include <map>

// Finite Laurent polynomials in lambda with real 3x3 coefficients: the
// concrete representation of twisted SL3 loop group elements.  All arithmetic
// stays real; the Q-twist is checked through the degree-class block pattern
// of the coefficients instead of evaluation at complex q*lambda.

namespace affsphere::loop {

/// Coefficients below this max-norm are dropped after arithmetic.
inline constexpr double kPruneTol = 1e-14;

class LaurentMatrix {
public:
    LaurentMatrix() = default;

    static LaurentMatrix identity() {
        LaurentMatrix a;
        a.coeffs_[0] = Mat3::Identity();
        return a;
    }
    static LaurentMatrix monomial(int degree, const Mat3& c) {
        LaurentMatrix a;
        a.coeffs_[degree] = c;
        a.prune();
        return a;
    }

    bool empty() const { return coeffs_.empty(); }
    int min_degree() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    int max_degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }
    /// max positive degree + max negative degree, both clamped at 0.
    int span() const { return std::max(0, max_degree()) - std::min(0, min_degree()); }

    Mat3 coeff(int degree) const {
        auto it = coeffs_.find(degree);
        return it == coeffs_.end() ? Mat3(Mat3::Zero()) : it->second;
    }
    void set_coeff(int degree, const Mat3& c) {
        if (c.cwiseAbs().maxCoeff() <= kPruneTol)
            coeffs_.erase(degree);
        else
            coeffs_[degree] = c;
    }
    void add_coeff(int degree, const Mat3& c) { set_coeff(degree, coeff(degree) + c); }

    const std::map<int, Mat3>& coeffs() const { return coeffs_; }

    void prune(double tol = kPruneTol) {
        for (auto it = coeffs_.begin(); it != coeffs_.end();)
            it = (it->second.cwiseAbs().maxCoeff() <= tol) ? coeffs_.erase(it) : std::next(it);
    }

    /// Largest coefficient entry in absolute value.
    double coeff_norm() const {
        double w = 0.0;
        for (const auto& [k, c] : coeffs_) w = std::max(w, c.cwiseAbs().maxCoeff());
        return w;
    }

    /// Keep only degrees in [lo, hi]; returns the norm of what was dropped.
    double truncate(int lo, int hi) {
        double dropped = 0.0;
        for (auto it = coeffs_.begin(); it != coeffs_.end();) {
            if (it->first < lo || it->first > hi) {
                dropped = std::max(dropped, it->second.cwiseAbs().maxCoeff());
                it = coeffs_.erase(it);
            } else {
                ++it;
            }
        }
        return dropped;
    }

private:
    std::map<int, Mat3> coeffs_;
};

/// Cauchy product over degrees.
LaurentMatrix multiply(const LaurentMatrix& a, const LaurentMatrix& b);
inline LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
    return multiply(a, b);
}

LaurentMatrix subtract(const LaurentMatrix& a, const LaurentMatrix& b);

/// Largest coefficient entry of a - b.
double coeff_distance(const LaurentMatrix& a, const LaurentMatrix& b);

/// Sum lambda^k a_k.  lambda = 0 is a domain error when negative degrees
/// are present.
Mat3 evaluate(const LaurentMatrix& a, double lambda);

/// Scalar Laurent polynomial det(a), computed symbolically.
std::map<int, double> laurent_det(const LaurentMatrix& a);

/// Exact adjugate; equals the group inverse when det(a) = 1.
LaurentMatrix adjugate(const LaurentMatrix& a);

/// Inverse of a loop group element (det = 1), via the adjugate.  The result
/// is exact up to the deviation of det(a) from 1; degrees outside
/// [-max_neg_degree, max_pos_degree] are rejected.  Defaults derive the
/// bounds from the adjugate itself (span of a + 6 safety margin).
LaurentMatrix inverse_of_group_element(const LaurentMatrix& a, int max_neg_degree = -1,
                                       int max_pos_degree = -1);

/// The T matrix of the lambda -> -lambda twist; depends on H.
Mat3 twist_T(int H);

/// Nonzero-entry mask for coefficient degree class k mod 3 (the Q-twist
/// block pattern): class 0 diagonal, class 1 at (1,3),(2,1),(3,2), class 2
/// at (1,2),(2,3),(3,1).
Eigen::Matrix<bool, 3, 3> twist_pattern(int degree);

struct TwistReport {
    double T_residual = 0.0;
    double Q_block_residual = 0.0;
    double det_residual = 0.0;

    double worst() const {
        return std::max(T_residual, std::max(Q_block_residual, det_residual));
    }
};

/// Probe points for evaluated loop checks.
inline const std::vector<double>& probe_lambdas() {
    static const std::vector<double> p = {0.5, -0.5, 1.0, -1.0, 2.0, -2.0};
    return p;
}

/// T-twist residual max_lambda |t(a(-l)) T a(l) - T|, Q-twist block-pattern
/// violation mass, and max |det a(l) - 1| over the probe set.
TwistReport verify_twisted(const LaurentMatrix& a, int H);

/// Debug dump, one line per degree: "deg k: 9 reals, row-major".
void dump(const LaurentMatrix& a, std::ostream& os);
std::string dump(const LaurentMatrix& a);

}  // namespace affsphere::loop
