#include "qsurf/linsolve.hpp"

#include <cmath>
#include <limits>

namespace qsurf {
namespace {

struct Factored {
    Eigen::LDLT<Matrix> ldlt;
    bool ok = false;
};

Factored factor(const Matrix& M, double delta) {
    Matrix R = M;
    R.diagonal().array() += delta;
    Factored f;
    f.ldlt.compute(R);
    f.ok = f.ldlt.info() == Eigen::Success;
    if (f.ok) {
        // LDLᵀ of a PSD matrix must not produce negative or zero pivots.
        const auto& d = f.ldlt.vectorD();
        f.ok = (d.array() > 0.0).all() && std::isfinite(f.ldlt.rcond());
    }
    return f;
}

std::string with_context(std::string msg, const std::string& ctx) {
    if (!ctx.empty()) msg += " (" + ctx + ")";
    return msg;
}

}  // namespace

Vector solve_spd_system(const Matrix& M_in, const Vector& rhs_in, const SolveOptions& opts,
                        SolveDiagnostics* diag) {
    if (M_in.rows() != M_in.cols()) throw std::invalid_argument("solve_spd_system: matrix is not square");
    if (rhs_in.size() != M_in.rows())
        throw std::invalid_argument("solve_spd_system: right-hand side has wrong length");
    const Eigen::Index dim = M_in.rows();
    if (dim == 0) return Vector();
    if (opts.delta && !(*opts.delta >= 0.0)) throw std::invalid_argument("solve_spd_system: delta must be >= 0");

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(dim);
    perm.setIdentity();
    if (opts.ordering == Ordering::reversed)
        for (Eigen::Index i = 0; i < dim; ++i) perm.indices()(i) = static_cast<int>(dim - 1 - i);
    const Matrix M = perm * M_in * perm.transpose();
    const Vector rhs = perm * rhs_in;

    const double scale = std::max(M.diagonal().cwiseAbs().sum() / static_cast<double>(dim), 1e-300);
    double delta = opts.delta.value_or(kAutoDeltaScale * scale);
    SolveDiagnostics d;

    Factored f = factor(M, delta);
    const double eps = std::numeric_limits<double>::epsilon();
    if (delta == 0.0) {
        if (!f.ok || f.ldlt.rcond() < static_cast<double>(dim) * eps)
            throw SingularSystemError(with_context(
                "linear system is singular (rcond " + std::to_string(f.ok ? f.ldlt.rcond() : 0.0) +
                    "); rerun with a positive ridge delta",
                opts.context));
    } else if (!f.ok || f.ldlt.rcond() < eps) {
        delta = std::max(delta * 1e4, kAutoDeltaScale * scale);
        d.bumped = true;
        f = factor(M, delta);
        if (!f.ok)
            throw SingularSystemError(with_context(
                "linear system could not be factorized even with ridge " + std::to_string(delta), opts.context));
    }
    d.delta = delta;
    d.rcond = f.ldlt.rcond();

    Vector x = f.ldlt.solve(rhs);
    const double target = opts.refine_tol * (1.0 + rhs.norm());
    double res_norm = (rhs - M * x).norm();
    if (opts.refine) {
        for (int it = 0; it < opts.max_refine && res_norm > target; ++it) {
            const Vector res = rhs - M * x;
            const Vector xn = x + f.ldlt.solve(res);
            const double rn = (rhs - M * xn).norm();
            if (!(rn < res_norm)) break;
            x = xn;
            res_norm = rn;
            ++d.refinements;
        }
    }
    d.residual = res_norm;
    if (!x.allFinite())
        throw SingularSystemError(with_context("linear solve produced non-finite values", opts.context));
    if (diag) *diag = d;
    return perm.transpose() * x;
}

}  // namespace qsurf
