#include "affsphere/laurent.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace affsphere::loop {

LaurentMatrix multiply(const LaurentMatrix& a, const LaurentMatrix& b) {
    LaurentMatrix c;
    for (const auto& [p, ca] : a.coeffs())
        for (const auto& [q, cb] : b.coeffs()) c.add_coeff(p + q, ca * cb);
    c.prune();
    return c;
}

LaurentMatrix subtract(const LaurentMatrix& a, const LaurentMatrix& b) {
    LaurentMatrix c = a;
    for (const auto& [k, cb] : b.coeffs()) c.add_coeff(k, -cb);
    c.prune();
    return c;
}

double coeff_distance(const LaurentMatrix& a, const LaurentMatrix& b) {
    double w = 0.0;
    for (const auto& [k, ca] : a.coeffs()) w = std::max(w, (ca - b.coeff(k)).cwiseAbs().maxCoeff());
    for (const auto& [k, cb] : b.coeffs()) w = std::max(w, (a.coeff(k) - cb).cwiseAbs().maxCoeff());
    return w;
}

Mat3 evaluate(const LaurentMatrix& a, double lambda) {
    if (lambda == 0.0 && a.min_degree() < 0)
        throw std::domain_error("evaluate: lambda = 0 with negative degrees present");
    Mat3 m = Mat3::Zero();
    for (const auto& [k, c] : a.coeffs()) m += std::pow(lambda, k) * c;
    return m;
}

namespace {

using ScalarLaurent = std::map<int, double>;

ScalarLaurent entry_poly(const LaurentMatrix& a, int i, int j) {
    ScalarLaurent p;
    for (const auto& [k, c] : a.coeffs())
        if (c(i, j) != 0.0) p[k] = c(i, j);
    return p;
}

ScalarLaurent smul(const ScalarLaurent& x, const ScalarLaurent& y) {
    ScalarLaurent out;
    for (const auto& [p, a] : x)
        for (const auto& [q, b] : y) out[p + q] += a * b;
    return out;
}

void sadd(ScalarLaurent& x, const ScalarLaurent& y, double sign) {
    for (const auto& [k, v] : y) x[k] += sign * v;
}

void sprune(ScalarLaurent& x) {
    for (auto it = x.begin(); it != x.end();)
        it = (std::abs(it->second) <= kPruneTol) ? x.erase(it) : std::next(it);
}

}  // namespace

std::map<int, double> laurent_det(const LaurentMatrix& a) {
    ScalarLaurent e[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e[i][j] = entry_poly(a, i, j);
    ScalarLaurent det;
    sadd(det, smul(e[0][0], smul(e[1][1], e[2][2])), 1.0);
    sadd(det, smul(e[0][1], smul(e[1][2], e[2][0])), 1.0);
    sadd(det, smul(e[0][2], smul(e[1][0], e[2][1])), 1.0);
    sadd(det, smul(e[0][2], smul(e[1][1], e[2][0])), -1.0);
    sadd(det, smul(e[0][1], smul(e[1][0], e[2][2])), -1.0);
    sadd(det, smul(e[0][0], smul(e[1][2], e[2][1])), -1.0);
    sprune(det);
    return det;
}

LaurentMatrix adjugate(const LaurentMatrix& a) {
    ScalarLaurent e[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e[i][j] = entry_poly(a, i, j);
    LaurentMatrix adj;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            // adj(i,j) = (-1)^{i+j} * minor of a with row j, column i removed
            const int r0 = (j == 0) ? 1 : 0, r1 = (j == 2) ? 1 : 2;
            const int c0 = (i == 0) ? 1 : 0, c1 = (i == 2) ? 1 : 2;
            ScalarLaurent m = smul(e[r0][c0], e[r1][c1]);
            sadd(m, smul(e[r0][c1], e[r1][c0]), -1.0);
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            for (const auto& [k, v] : m) {
                Mat3 c = adj.coeff(k);
                c(i, j) += sign * v;
                adj.set_coeff(k, c);
            }
        }
    }
    adj.prune();
    return adj;
}

LaurentMatrix inverse_of_group_element(const LaurentMatrix& a, int max_neg_degree,
                                       int max_pos_degree) {
    for (double l : probe_lambdas()) {
        const double d = evaluate(a, l).determinant();
        if (std::abs(d) < 1e-10)
            throw std::runtime_error("inverse_of_group_element: outside group, det(" +
                                     std::to_string(l) + ") = " + std::to_string(d));
    }
    LaurentMatrix inv = adjugate(a);
    if (max_neg_degree < 0) max_neg_degree = a.span() + 6;
    if (max_pos_degree < 0) max_pos_degree = a.span() + 6;
    if (inv.min_degree() < -max_neg_degree || inv.max_degree() > max_pos_degree)
        throw std::runtime_error("inverse_of_group_element: degree bounds exceeded");
    const double res = coeff_distance(multiply(a, inv), LaurentMatrix::identity());
    if (res > 1e-10)
        throw std::runtime_error("inverse_of_group_element: truncation residual " +
                                 std::to_string(res));
    return inv;
}

Mat3 twist_T(int H) {
    Mat3 t;
    t << 0, 1, 0, 1, 0, 0, 0, 0, -static_cast<double>(H);
    return t;
}

Eigen::Matrix<bool, 3, 3> twist_pattern(int degree) {
    int cls = degree % 3;
    if (cls < 0) cls += 3;
    Eigen::Matrix<bool, 3, 3> p;
    p.setConstant(false);
    if (cls == 0) {
        p(0, 0) = p(1, 1) = p(2, 2) = true;
    } else if (cls == 1) {
        p(0, 2) = p(1, 0) = p(2, 1) = true;
    } else {
        p(0, 1) = p(1, 2) = p(2, 0) = true;
    }
    return p;
}

TwistReport verify_twisted(const LaurentMatrix& a, int H) {
    TwistReport rep;
    const Mat3 T = twist_T(H);
    for (double l : probe_lambdas()) {
        const Mat3 al = evaluate(a, l);
        const Mat3 am = evaluate(a, -l);
        rep.T_residual = std::max(rep.T_residual, (am.transpose() * T * al - T).cwiseAbs().maxCoeff());
        rep.det_residual = std::max(rep.det_residual, std::abs(al.determinant() - 1.0));
    }
    for (const auto& [k, c] : a.coeffs()) {
        const auto mask = twist_pattern(k);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!mask(i, j)) rep.Q_block_residual += std::abs(c(i, j));
    }
    return rep;
}

void dump(const LaurentMatrix& a, std::ostream& os) {
    char buf[32];
    for (const auto& [k, c] : a.coeffs()) {
        os << "deg " << k << ":";
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                std::snprintf(buf, sizeof buf, " %.17g", c(i, j));
                os << buf;
            }
        os << "\n";
    }
}

std::string dump(const LaurentMatrix& a) {
    std::ostringstream ss;
    dump(a, ss);
    return ss.str();
}

}  // namespace affsphere::loop
