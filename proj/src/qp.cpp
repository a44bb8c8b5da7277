#include "qsurf/qp.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace qsurf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Vector clamp(const Vector& y, const Vector& lo, const Vector& hi) {
    return y.cwiseMax(lo).cwiseMin(hi);
}
}  // namespace

// ---------------------------------------------------------------- box QP

Vector BoxQP::apply(const Vector& x) const {
    if (factor.size()) return factor * (factor.transpose() * x);
    return Q * x;
}

double BoxQP::objective(const Vector& x) const { return 0.5 * x.dot(apply(x)) - q.dot(x); }

Vector project_box_hyperplane(const Vector& y, const Vector& a, const Vector& lo, const Vector& hi) {
    auto phi = [&](double nu) { return a.dot(clamp(y - nu * a, lo, hi)); };
    // φ(ν) = aᵀΠ_box(y − νa) is non-increasing; its range is [φ(+∞), φ(−∞)].
    double top = 0.0, bottom = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) > 0) {
            top += a(i) * hi(i);
            bottom += a(i) * lo(i);
        } else if (a(i) < 0) {
            top += a(i) * lo(i);
            bottom += a(i) * hi(i);
        }
    }
    if (!(top >= 0.0 && bottom <= 0.0))
        throw std::invalid_argument("box and hyperplane constraints do not intersect");

    double lo_nu = -1.0, hi_nu = 1.0;
    while (phi(lo_nu) < 0.0) {
        hi_nu = lo_nu;
        lo_nu *= 2.0;
        if (!std::isfinite(lo_nu)) throw std::runtime_error("projection bracket diverged");
    }
    while (phi(hi_nu) > 0.0) {
        lo_nu = hi_nu;
        hi_nu *= 2.0;
        if (!std::isfinite(hi_nu)) throw std::runtime_error("projection bracket diverged");
    }
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo_nu + hi_nu);
        if (mid <= lo_nu || mid >= hi_nu) break;
        (phi(mid) > 0.0 ? lo_nu : hi_nu) = mid;
    }
    Vector x = clamp(y - 0.5 * (lo_nu + hi_nu) * a, lo, hi);
    // Remove the last rounding-level violation along the free coordinates.
    const double viol = a.dot(x);
    double norm2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x(i) > lo(i) && x(i) < hi(i)) norm2 += a(i) * a(i);
    if (norm2 > 0.0) {
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x(i) > lo(i) && x(i) < hi(i)) x(i) = std::clamp(x(i) - viol * a(i) / norm2, lo(i), hi(i));
    }
    return x;
}

namespace {

void box_residuals(const BoxQP& prob, const Vector& x, const Vector& g, QPSolution& s,
                   const std::function<Vector(const Vector&)>& proj) {
    s.stationarity = (x - proj(x - g)).cwiseAbs().maxCoeff();
    double primal = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        primal = std::max({primal, prob.lower(i) - x(i), x(i) - prob.upper(i)});
    Vector gt = g;
    if (prob.equality) {
        const Vector& a = *prob.equality;
        primal = std::max(primal, std::abs(a.dot(x)));
        // Multiplier of aᵀx = 0 estimated on the free coordinates.
        double num = 0.0, den = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x(i) > prob.lower(i) && x(i) < prob.upper(i)) {
                num -= a(i) * g(i);
                den += a(i) * a(i);
            }
        }
        if (den > 0.0) gt += (num / den) * a;
    }
    double comp = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::isfinite(prob.lower(i))) comp = std::max(comp, std::abs((x(i) - prob.lower(i)) * std::max(gt(i), 0.0)));
        if (std::isfinite(prob.upper(i))) comp = std::max(comp, std::abs((prob.upper(i) - x(i)) * std::max(-gt(i), 0.0)));
    }
    s.primal_residual = primal;
    s.complementarity = comp;
}

}  // namespace

QPSolution solve_box_qp(const BoxQP& prob, const QPOptions& opts) {
    const Eigen::Index n = prob.size();
    if (prob.lower.size() != n || prob.upper.size() != n)
        throw std::invalid_argument("solve_box_qp: bound vectors have wrong length");
    if (prob.factor.size() ? prob.factor.rows() != n : (prob.Q.rows() != n || prob.Q.cols() != n))
        throw std::invalid_argument("solve_box_qp: Q has wrong shape");
    if ((prob.lower.array() > prob.upper.array()).any())
        throw std::invalid_argument("solve_box_qp: infeasible box (lower > upper)");
    if (prob.equality && prob.equality->size() != n)
        throw std::invalid_argument("solve_box_qp: equality vector has wrong length");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_box_qp: tol must be positive");

    std::function<Vector(const Vector&)> proj = [&](const Vector& y) -> Vector {
        if (prob.equality) return project_box_hyperplane(y, *prob.equality, prob.lower, prob.upper);
        return clamp(y, prob.lower, prob.upper);
    };

    QPSolution s;
    Vector x = proj(Vector::Zero(n));
    Vector Qx = prob.apply(x);
    Vector g = Qx - prob.q;
    double f = 0.5 * x.dot(Qx) - prob.q.dot(x);

    double diag_max = 0.0;
    if (prob.factor.size())
        diag_max = prob.factor.rowwise().squaredNorm().maxCoeff();
    else if (n)
        diag_max = prob.Q.diagonal().maxCoeff();
    double step = 1.0 / std::max(diag_max, 1e-12);
    if (opts.record_trace) s.trace.push_back(f);

    // The projected-gradient residual is bounded by the box width, so narrow
    // boxes need a proportionally tighter threshold.
    double width = 1.0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (prob.upper(i) > prob.lower(i)) width = std::min(width, prob.upper(i) - prob.lower(i));
    const double tol = opts.tol * width;

    s.status = QPStatus::max_iter;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        if (n == 0 || (x - proj(x - g)).cwiseAbs().maxCoeff() <= tol) {
            s.status = QPStatus::converged;
            break;
        }
        Vector d, Qd;
        double ft = f;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            d = proj(x - step * g) - x;
            Qd = prob.apply(d);
            const double gd = g.dot(d);
            ft = f + gd + 0.5 * d.dot(Qd);
            if (ft <= f + 1e-4 * gd || d.cwiseAbs().maxCoeff() == 0.0) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        x += d;
        Qx += Qd;
        g = Qx - prob.q;
        f = std::min(ft, f);
        if (opts.record_trace) s.trace.push_back(f);
        if ((it + 1) % 200 == 0) {
            Qx = prob.apply(x);
            g = Qx - prob.q;
            f = 0.5 * x.dot(Qx) - prob.q.dot(x);
        }
        const double sy = d.dot(Qd);
        step = sy > 0.0 ? std::clamp(d.squaredNorm() / sy, 1e-12, 1e12) : 1.0 / std::max(diag_max, 1e-12);
    }
    s.iterations = it;
    s.x = x;
    s.objective = prob.objective(x);
    box_residuals(prob, x, prob.apply(x) - prob.q, s, proj);
    return s;
}

// ---------------------------------------------------------------- general QP

double GeneralQP::objective(const Vector& x) const { return 0.5 * x.dot(P * x) + p.dot(x); }

namespace {

using Sparse = Eigen::SparseMatrix<double>;

struct Kkt {
    double primal, stationarity, complementarity;
    bool ok(double tol) const { return primal <= tol && stationarity <= tol && complementarity <= tol; }
};

Kkt kkt_residuals(const Sparse& P, const Vector& p, const Sparse& A, const Vector& u, const Vector& x,
                  const Vector& y) {
    const Vector Ax = A * x;
    Kkt k{0.0, 0.0, 0.0};
    if (Ax.size()) {
        k.primal = std::max(0.0, (Ax - u).maxCoeff());
        k.complementarity = (y.array() * (u - Ax).array()).abs().maxCoeff();
    }
    k.stationarity = x.size() ? (P * x + p + A.transpose() * y).cwiseAbs().maxCoeff() : 0.0;
    return k;
}

// Solves the equality-constrained problem on the guessed active set.
bool polish(const Sparse& P, const Vector& p, const Sparse& A, const Vector& u, const Vector& z, const Vector& y,
            double tol, Vector& x_out, Vector& y_out) {
    const Eigen::Index n = P.rows(), m = A.rows();
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < m; ++i)
        if (u(i) - z(i) < y(i)) active.push_back(i);
    const auto na = static_cast<Eigen::Index>(active.size());

    Sparse At(na, n);
    {
        std::vector<Eigen::Triplet<double>> t;
        const Sparse Ar = A;  // column-major; walk by column
        std::vector<Eigen::Index> row_map(static_cast<std::size_t>(m), -1);
        for (Eigen::Index k = 0; k < na; ++k) row_map[static_cast<std::size_t>(active[k])] = k;
        for (Eigen::Index c = 0; c < Ar.outerSize(); ++c)
            for (Sparse::InnerIterator it(Ar, c); it; ++it)
                if (row_map[static_cast<std::size_t>(it.row())] >= 0)
                    t.emplace_back(row_map[static_cast<std::size_t>(it.row())], c, it.value());
        At.setFromTriplets(t.begin(), t.end());
    }
    const double reg = 1e-9;
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index c = 0; c < P.outerSize(); ++c)
        for (Sparse::InnerIterator it(P, c); it; ++it) t.emplace_back(it.row(), c, it.value());
    for (Eigen::Index c = 0; c < At.outerSize(); ++c)
        for (Sparse::InnerIterator it(At, c); it; ++it) {
            t.emplace_back(n + it.row(), c, it.value());
            t.emplace_back(c, n + it.row(), it.value());
        }
    Sparse K(n + na, n + na), Kreg(n + na, n + na);
    K.setFromTriplets(t.begin(), t.end());
    for (Eigen::Index i = 0; i < n; ++i) t.emplace_back(i, i, reg);
    for (Eigen::Index i = 0; i < na; ++i) t.emplace_back(n + i, n + i, -reg);
    Kreg.setFromTriplets(t.begin(), t.end());

    Eigen::SimplicialLDLT<Sparse> ldlt(Kreg);
    if (ldlt.info() != Eigen::Success) return false;
    Vector rhs(n + na);
    rhs.head(n) = -p;
    for (Eigen::Index k = 0; k < na; ++k) rhs(n + k) = u(active[k]);
    Vector sol = ldlt.solve(rhs);
    for (int r = 0; r < 25; ++r) {
        const Vector res = rhs - K * sol;
        if (res.cwiseAbs().maxCoeff() <= 1e-3 * tol) break;
        sol += ldlt.solve(res);
    }
    if (!sol.allFinite()) return false;
    x_out = sol.head(n);
    y_out = Vector::Zero(m);
    for (Eigen::Index k = 0; k < na; ++k) y_out(active[k]) = std::max(0.0, sol(n + k));
    return kkt_residuals(P, p, A, u, x_out, y_out).ok(tol);
}

}  // namespace

QPSolution solve_general_qp(const GeneralQP& prob, const QPOptions& opts) {
    const Eigen::Index n = prob.size();
    if (prob.P.rows() != n || prob.P.cols() != n) throw std::invalid_argument("solve_general_qp: P has wrong shape");
    if (prob.G.cols() != n || prob.G.rows() != prob.h.size())
        throw std::invalid_argument("solve_general_qp: G/h have wrong shape");
    if (!prob.nonneg.empty() && static_cast<Eigen::Index>(prob.nonneg.size()) != n)
        throw std::invalid_argument("solve_general_qp: nonnegativity mask has wrong length");

    // Stack Gx ≤ h with −x_i ≤ 0 for masked variables.
    Eigen::Index nn = 0;
    for (char c : prob.nonneg) nn += c ? 1 : 0;
    const Eigen::Index m = prob.G.rows() + nn;
    Sparse A(m, n);
    {
        std::vector<Eigen::Triplet<double>> t;
        for (Eigen::Index c = 0; c < prob.G.outerSize(); ++c)
            for (Sparse::InnerIterator it(prob.G, c); it; ++it) t.emplace_back(it.row(), c, it.value());
        Eigen::Index row = prob.G.rows();
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(prob.nonneg.size()); ++i)
            if (prob.nonneg[static_cast<std::size_t>(i)]) t.emplace_back(row++, i, -1.0);
        A.setFromTriplets(t.begin(), t.end());
    }
    Vector u = Vector::Zero(m);
    u.head(prob.h.size()) = prob.h;
    const Sparse At = A.transpose();
    const Sparse& P = prob.P;

    const double sigma = 1e-6, relax = 1.6;
    double rho = 0.1;
    Sparse I(n, n);
    I.setIdentity();
    const Sparse AtA = At * A;
    Eigen::SimplicialLDLT<Sparse> ldlt;
    auto refactor = [&] {
        Sparse K = P + sigma * I + rho * AtA;
        ldlt.compute(K);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error("solve_general_qp: KKT factorization failed (P not PSD?)");
    };
    refactor();

    Vector x = Vector::Zero(n), z = Vector::Zero(m), y = Vector::Zero(m);
    QPSolution s;
    s.status = QPStatus::max_iter;
    int it = 0;
    int last_polish = -1000;
    for (; it < opts.max_iter; ++it) {
        const Vector rhs = sigma * x - prob.p + At * (rho * z - y);
        const Vector xt = ldlt.solve(rhs);
        const Vector zt = A * xt;
        x = relax * xt + (1.0 - relax) * x;
        const Vector v = relax * zt + (1.0 - relax) * z;
        const Vector zn = (v + y / rho).cwiseMin(u);
        y += rho * (v - zn);
        z = zn;

        if ((it + 1) % 10 != 0) continue;
        const Kkt k = kkt_residuals(P, prob.p, A, u, x, y);
        if (k.ok(opts.tol)) {
            s.status = QPStatus::converged;
            ++it;
            break;
        }
        const Vector Ax = A * x;
        const double prim = m ? (Ax - z).cwiseAbs().maxCoeff() : 0.0;
        const double dual = k.stationarity;
        if (prim < 1e-3 && dual < 1e-3 && it - last_polish >= 50) {
            last_polish = it;
            Vector xp, yp;
            if (polish(P, prob.p, A, u, z, y, opts.tol, xp, yp)) {
                x = xp;
                y = yp;
                s.status = QPStatus::converged;
                ++it;
                break;
            }
        }
        if ((it + 1) % 50 == 0 && m) {
            const double pscale = std::max({Ax.cwiseAbs().maxCoeff(), z.cwiseAbs().maxCoeff(), 1e-30});
            const Vector Px = P * x, Aty = At * y;
            const double dscale = std::max({Px.cwiseAbs().maxCoeff(), Aty.cwiseAbs().maxCoeff(),
                                            prob.p.size() ? prob.p.cwiseAbs().maxCoeff() : 0.0, 1e-30});
            const double ratio = std::sqrt((prim / pscale) / std::max(dual / dscale, 1e-30));
            const double nr = std::clamp(rho * ratio, 1e-6, 1e6);
            if (nr > 5.0 * rho || nr < 0.2 * rho) {
                rho = nr;
                refactor();
            }
        }
    }
    if (s.status != QPStatus::converged) {
        Vector xp, yp;
        if (polish(P, prob.p, A, u, z, y, opts.tol, xp, yp)) {
            x = xp;
            y = yp;
            s.status = QPStatus::converged;
        }
    }
    const Kkt k = kkt_residuals(P, prob.p, A, u, x, y);
    s.x = x;
    s.y = y;
    s.iterations = it;
    s.objective = prob.objective(x);
    s.primal_residual = k.primal;
    s.stationarity = k.stationarity;
    s.complementarity = k.complementarity;
    return s;
}

}  // namespace qsurf
