#include "affsphere/birkhoff.hpp"

#include <Eigen/SVD>

namespace affsphere::birkhoff {



LaurentMatrix make_fplus_h0(double a, double b, double c) {
    LaurentMatrix f = LaurentMatrix::identity();
    Mat3 m1 = Mat3::Zero();
    m1(1, 0) = b;
    m1(2, 1) = a;
    f.set_coeff(1, m1);
    Mat3 m2 = Mat3::Zero();
    m2(2, 0) = c;
    f.set_coeff(2, m2);
    return f;
}

LaurentMatrix make_gminus_h0(double r, double s, double t) {
    LaurentMatrix g = LaurentMatrix::identity();
    Mat3 m1 = Mat3::Zero();
    m1(0, 1) = s;
    m1(2, 0) = r;
    g.set_coeff(-1, m1);
    Mat3 m2 = Mat3::Zero();
    m2(2, 1) = t;
    g.set_coeff(-2, m2);
    return g;
}

BirkhoffPair factor_explicit_h0(double a, double b, double c, double r, double s, double t) {
    const double cell = 1.0 - b * s;
    if (std::abs(cell) < 1e-12)
        throw BigCellError("outside big cell: 1 - b*s = " + std::to_string(cell) +
                               " (b = " + std::to_string(b) + ", s = " + std::to_string(s) + ")",
                           b, s);
    const double ic = 1.0 / cell;

    BirkhoffPair p;
    p.v_plus = LaurentMatrix::identity();
    Mat3 p1 = Mat3::Zero();
    p1(1, 0) = b * ic;
    p1(2, 1) = a - s * (a * b - c);
    p.v_plus.set_coeff(1, p1);
    Mat3 p2 = Mat3::Zero();
    p2(2, 0) = c * ic;
    p.v_plus.set_coeff(2, p2);

    Mat3 m0 = Mat3::Zero();
    m0(0, 0) = ic;
    m0(1, 1) = cell;
    m0(2, 2) = 1.0;
    p.v_minus.set_coeff(0, m0);
    Mat3 m1 = Mat3::Zero();
    m1(0, 1) = s;
    m1(2, 0) = r + b * t * ic;
    p.v_minus.set_coeff(-1, m1);
    Mat3 m2 = Mat3::Zero();
    m2(2, 1) = t;
    p.v_minus.set_coeff(-2, m2);

    const LaurentMatrix L =
        multiply(loop::adjugate(make_gminus_h0(r, s, t)), make_fplus_h0(a, b, c));
    p.residual = coeff_distance(multiply(L, p.v_minus), p.v_plus);
    return p;
}

BirkhoffPair factor_truncated(const LaurentMatrix& L, int K, int /*H*/, double residual_tol) {
    if (K < 1) throw std::invalid_argument("factor_truncated: K must be positive");
    const int max_neg = std::max(0, -L.min_degree());
    const int d_max = K + max_neg;  // lowest forced degree of L*V-

    // Unknowns per column: the 3(K+1) entries of that column of the V-
    // coefficients W_0..W_K (W_j sits at degree -j).  Constraint rows force
    // (L*V-)_{-d} = 0 for d = 1..d_max and (L*V-)_0 = id.
    const int rows = 3 * (d_max + 1);
    const int cols = 3 * (K + 1);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
    for (int d = 0; d <= d_max; ++d)
        for (int j = 0; j <= K; ++j) {
            const Mat3 lk = L.coeff(j - d);
            if (lk.cwiseAbs().maxCoeff() > 0.0) A.block<3, 3>(3 * d, 3 * j) = lk;
        }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sv_max = svd.singularValues()(0);
    const double sv_min = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(sv_max > 0.0) || sv_min < 1e-11 * sv_max)
        throw BigCellError("outside big cell (numerical): smallest singular value " +
                           std::to_string(sv_min));
    svd.setThreshold(1e-11);

    LaurentMatrix v_minus;
    for (int col = 0; col < 3; ++col) {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
        b(col) = 1.0;  // identity column in the degree-0 block
        const Eigen::VectorXd x = svd.solve(b);
        for (int j = 0; j <= K; ++j) {
            Mat3 c = v_minus.coeff(-j);
            c.col(col) = x.segment<3>(3 * j);
            v_minus.set_coeff(-j, c);
        }
    }
    v_minus.prune();

    BirkhoffPair p;
    p.v_minus = v_minus;
    LaurentMatrix prod = multiply(L, v_minus);
    double res = (prod.coeff(0) - Mat3::Identity()).cwiseAbs().maxCoeff();
    for (const auto& [k, c] : prod.coeffs())
        if (k < 0) res = std::max(res, c.cwiseAbs().maxCoeff());
    prod.truncate(0, prod.max_degree());
    p.v_plus = prod;
    p.residual = res;
    if (res > residual_tol)
        throw TruncationError("factor_truncated: residual " + std::to_string(res) +
                                  " above tolerance; increase truncation order K",
                              res);
    return p;
}

double reconstruction_residual(const LaurentMatrix& L, const BirkhoffPair& p) {
    double w = 0.0;
    for (double l : loop::probe_lambdas()) {
        const Mat3 r = evaluate(L, l) * evaluate(p.v_minus, l) - evaluate(p.v_plus, l);
        w = std::max(w, r.cwiseAbs().maxCoeff());
    }
    return w;
}

}  // namespace affsphere::birkhoff
