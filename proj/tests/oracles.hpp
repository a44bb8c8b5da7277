#pragma once

// Reference implementations used only by the tests. They are written
// independently of the library: explicit loops, dense matrices and generic
// decompositions instead of the index arithmetic and LDLᵀ solves in src/.

#include "qsurf/embed.hpp"
#include "qsurf/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using qsurf::Matrix;
using qsurf::Vector;

// Lower triangle, column by column.
inline std::vector<std::pair<int, int>> lower_entries(int n) {
    std::vector<std::pair<int, int>> e;
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) e.emplace_back(i, j);
    return e;
}

inline Matrix duplication(int n) {
    const auto e = lower_entries(n);
    Matrix D = Matrix::Zero(n * n, static_cast<Eigen::Index>(e.size()));
    for (std::size_t k = 0; k < e.size(); ++k) {
        const auto [i, j] = e[k];
        D(i + j * n, static_cast<Eigen::Index>(k)) = 1.0;
        D(j + i * n, static_cast<Eigen::Index>(k)) = 1.0;
    }
    return D;
}

inline Matrix elimination(int n) {
    const auto e = lower_entries(n);
    Matrix L = Matrix::Zero(static_cast<Eigen::Index>(e.size()), n * n);
    for (std::size_t k = 0; k < e.size(); ++k) L(static_cast<Eigen::Index>(k), e[k].first + e[k].second * n) = 1.0;
    return L;
}

inline Vector vec(const Matrix& A) {
    Vector v(A.size());
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i) v(i + j * A.rows()) = A(i, j);
    return v;
}

inline Vector hvec(const Matrix& A) {
    const auto e = lower_entries(static_cast<int>(A.rows()));
    Vector h(static_cast<Eigen::Index>(e.size()));
    for (std::size_t k = 0; k < e.size(); ++k) h(static_cast<Eigen::Index>(k)) = A(e[k].first, e[k].second);
    return h;
}

/// Rank by Gaussian elimination with partial pivoting.
inline int rank(Matrix A, double tol = 1e-10) {
    int r = 0;
    for (Eigen::Index c = 0; c < A.cols() && r < A.rows(); ++c) {
        Eigen::Index piv = r;
        for (Eigen::Index i = r; i < A.rows(); ++i)
            if (std::abs(A(i, c)) > std::abs(A(piv, c))) piv = i;
        if (std::abs(A(piv, c)) <= tol) continue;
        A.row(piv).swap(A.row(r));
        for (Eigen::Index i = r + 1; i < A.rows(); ++i) A.row(i) -= (A(i, c) / A(r, c)) * A.row(r);
        ++r;
    }
    return r;
}

/// r(x) = [½ D_nᵀ vec(xxᵀ); x].
inline Vector embed(const Vector& x) {
    const int n = static_cast<int>(x.size());
    const Vector q = 0.5 * duplication(n).transpose() * vec(x * x.transpose());
    Vector r(q.size() + n);
    r << q, x;
    return r;
}

inline Vector features(const Vector& x, bool quadratic) { return quadratic ? embed(x) : x; }

inline Matrix random_matrix(qsurf::Rng& rng, Eigen::Index m, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
    Matrix X(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) X(i, j) = rng.uniform(lo, hi);
    return X;
}

inline Matrix random_symmetric(qsurf::Rng& rng, Eigen::Index n) {
    Matrix A = random_matrix(rng, n, n);
    return (A + A.transpose()).eval();
}

struct Group {
    Matrix points;
    double weight;
    double target;
};

/// argmin Σ_g w_g Σ (zᵀφ(x) + c − t_g)² + λ‖hvec-block of z‖² by QR on the
/// stacked weighted rows. Returns [z; c].
inline Vector least_squares(const std::vector<Group>& groups, int n, bool quadratic, double lambda) {
    const int d = quadratic ? n * (n + 1) / 2 + n : n;
    const int nh = quadratic ? n * (n + 1) / 2 : 0;
    int rows = lambda > 0 ? nh : 0;
    for (const auto& g : groups) rows += static_cast<int>(g.points.rows());
    Matrix Aq = Matrix::Zero(rows, d + 1);
    Vector bq = Vector::Zero(rows);
    int r = 0;
    for (const auto& g : groups) {
        const double s = std::sqrt(g.weight);
        for (Eigen::Index i = 0; i < g.points.rows(); ++i, ++r) {
            Aq.row(r).head(d) = s * features(g.points.row(i).transpose(), quadratic).transpose();
            Aq(r, d) = s;
            bq(r) = s * g.target;
        }
    }
    if (lambda > 0)
        for (int k = 0; k < nh; ++k, ++r) Aq(r, k) = std::sqrt(lambda);
    return Aq.colPivHouseholderQr().solve(bq);
}

/// Exhaustive active-set search for min ½xᵀQx − qᵀx on a box: every variable
/// is at its lower bound, its upper bound, or free (3ⁿ patterns).
inline double brute_force_box_qp(const Matrix& Q, const Vector& q, const Vector& lo, const Vector& hi, Vector* best_x = nullptr) {
    const int n = static_cast<int>(q.size());
    int patterns = 1;
    for (int i = 0; i < n; ++i) patterns *= 3;
    double best = std::numeric_limits<double>::infinity();
    for (int code = 0; code < patterns; ++code) {
        Vector x = Vector::Zero(n);
        std::vector<int> free;
        int c = code;
        for (int i = 0; i < n; ++i, c /= 3) {
            if (c % 3 == 0) x(i) = lo(i);
            else if (c % 3 == 1) x(i) = hi(i);
            else free.push_back(i);
        }
        if (!free.empty()) {
            const int f = static_cast<int>(free.size());
            Matrix QF(f, f);
            Vector rhs(f);
            for (int a = 0; a < f; ++a) {
                rhs(a) = q(free[a]);
                for (int i = 0; i < n; ++i)
                    if (std::find(free.begin(), free.end(), i) == free.end()) rhs(a) -= Q(free[a], i) * x(i);
                for (int b = 0; b < f; ++b) QF(a, b) = Q(free[a], free[b]);
            }
            const Vector xf = QF.completeOrthogonalDecomposition().solve(rhs);
            if ((QF * xf - rhs).norm() > 1e-8 * (1 + rhs.norm())) continue;
            bool ok = true;
            for (int a = 0; a < f; ++a) {
                if (xf(a) < lo(free[a]) - 1e-12 || xf(a) > hi(free[a]) + 1e-12) ok = false;
                x(free[a]) = xf(a);
            }
            if (!ok) continue;
        }
        const double obj = 0.5 * x.dot(Q * x) - q.dot(x);
        if (obj < best) {
            best = obj;
            if (best_x) *best_x = x;
        }
    }
    return best;
}

/// Log-barrier interior point for min ½xᵀPx + pᵀx s.t. Gx ≤ h, with a
/// strictly feasible start. Dense Newton steps; duality gap ≤ gap_tol.
inline Vector barrier_qp(const Matrix& P, const Vector& p, const Matrix& G, const Vector& h, Vector x,
                         double gap_tol = 1e-11) {
    const double m = static_cast<double>(G.rows());
    auto slack = [&](const Vector& v) { return (h - G * v).eval(); };
    for (double t = 1.0; m / t > gap_tol; t *= 8.0) {
        for (int it = 0; it < 200; ++it) {
            const Vector s = slack(x);
            const Vector inv = s.cwiseInverse();
            const Vector grad = t * (P * x + p) + G.transpose() * inv;
            const Matrix H = t * P + G.transpose() * inv.cwiseAbs2().asDiagonal() * G;
            const Vector dx = -H.ldlt().solve(grad);
            const double dec = -grad.dot(dx);
            if (dec / 2 < 1e-13) break;
            auto phi = [&](const Vector& v) {
                const Vector sv = slack(v);
                if ((sv.array() <= 0).any()) return std::numeric_limits<double>::infinity();
                return t * (0.5 * v.dot(P * v) + p.dot(v)) - sv.array().log().sum();
            };
            double step = 1.0;
            const double f0 = phi(x);
            while (phi(x + step * dx) > f0 - 0.25 * step * dec && step > 1e-16) step *= 0.5;
            x += step * dx;
        }
    }
    return x;
}

}  // namespace oracle
